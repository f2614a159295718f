"""Two particles in a 1D harmonic trap at infinite contact repulsion.

Dimensionless units (hbar = m = omega = 1). The ground state is built from
the two lowest oscillator eigenfunctions; the "labeled" wave function is the
absolute value of their Slater determinant, the "ordered" one (left/right
particle) is the determinant itself.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .errors import BadArgs, GridTooCoarse

TRACE_TOL = 1e-3
DEFAULT_EXTENT = 6.0
DEFAULT_POINTS = 600
KINDS = ("labeled", "ordered")


@dataclass(frozen=True)
class TrapGrid:
    """Uniform trapezoid grid on [-L, L] with ``n`` nodes."""

    L: float = DEFAULT_EXTENT
    n: int = DEFAULT_POINTS

    def __post_init__(self):
        if self.n < 3:
            raise BadArgs("grid needs at least 3 points")
        if not self.L > 0:
            raise BadArgs("grid extent must be positive")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(-self.L, self.L, self.n)

    @property
    def spacing(self) -> float:
        return 2.0 * self.L / (self.n - 1)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.n, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w

    def halved(self) -> "TrapGrid":
        return TrapGrid(self.L, max(3, self.n // 2))


@dataclass(frozen=True, eq=False)
class Kernel:
    grid: TrapGrid
    values: np.ndarray = field(repr=False)
    kind: str = ""

    def trace(self) -> float:
        return float(np.diag(self.values) @ self.grid.weights)

    def density(self) -> np.ndarray:
        return np.diag(self.values).copy()

    def weighted_matrix(self) -> np.ndarray:
        """W^{1/2} K W^{1/2}: same spectrum as the integral operator."""
        s = np.sqrt(self.grid.weights)
        return s[:, None] * self.values * s[None, :]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.weighted_matrix())[::-1]


@dataclass(frozen=True)
class TrapReport:
    S_L_labeled: float
    S_L_ordered: float
    extent: float
    grid_points: int
    convergence_labeled: float
    convergence_ordered: float
    trace_labeled: float
    trace_ordered: float

    @property
    def convergence(self) -> float:
        return max(self.convergence_labeled, self.convergence_ordered)


def hermite_mode(k: int, u):
    """Normalized oscillator eigenfunction phi_k(u), by three-term recurrence."""
    if k < 0:
        raise BadArgs("mode index must be >= 0")
    u = np.asarray(u, dtype=np.float64)
    prev = np.zeros_like(u)
    cur = np.pi ** -0.25 * np.exp(-0.5 * u * u)
    for j in range(k):
        prev, cur = cur, np.sqrt(2.0 / (j + 1)) * u * cur - np.sqrt(j / (j + 1)) * prev
    return cur if cur.ndim else float(cur)


def _slater(u1, u2):
    return (hermite_mode(0, u1) * hermite_mode(1, u2) - hermite_mode(1, u1) * hermite_mode(0, u2)) / np.sqrt(2.0)


def psi_gs(u1, u2):
    """Labeled ground state: symmetric, vanishing at u1 == u2."""
    return np.abs(_slater(u1, u2))


def psi_ordered(ul, ur):
    """Ground state in (left, right) coordinates, antisymmetrically extended to the plane."""
    return _slater(ul, ur)


def wavefunction_matrix(kind: str, grid: TrapGrid) -> np.ndarray:
    u = grid.nodes
    phi0, phi1 = hermite_mode(0, u), hermite_mode(1, u)
    det = (np.outer(phi0, phi1) - np.outer(phi1, phi0)) / np.sqrt(2.0)
    if kind == "labeled":
        return np.abs(det)
    if kind == "ordered":
        return det
    raise BadArgs(f"kind must be one of {KINDS}, got {kind!r}")


def one_body_kernel(kind: str, grid: TrapGrid | None = None) -> Kernel:
    """K(u, u') = int psi(u, v) psi(u', v) dv by trapezoid quadrature."""
    grid = grid or TrapGrid()
    psi = wavefunction_matrix(kind, grid)
    values = kernels.quadrature_kernel(psi, grid.weights)
    values = 0.5 * (values + values.T)
    kernel = Kernel(grid, values, kind)
    tr = kernel.trace()
    if abs(tr - 1.0) > TRACE_TOL:
        raise GridTooCoarse(f"{kind} kernel trace {tr:.6g} (L={grid.L}, n={grid.n})")
    return kernel


def analytic_ordered_kernel(grid: TrapGrid) -> np.ndarray:
    u = grid.nodes
    phi0, phi1 = hermite_mode(0, u), hermite_mode(1, u)
    return 0.5 * (np.outer(phi0, phi0) + np.outer(phi1, phi1))


def kernel_purity(kernel: Kernel) -> float:
    """Tr rho^2 ~ sum_kl K_kl^2 w_k w_l."""
    return kernels.weighted_square_sum(kernel.values, kernel.grid.weights)


def _entropies(grid: TrapGrid):
    out = {}
    for kind in KINDS:
        k = one_body_kernel(kind, grid)
        out[kind] = (1.0 - kernel_purity(k), k.trace())
    return out


def trap_report(grid: TrapGrid | None = None) -> TrapReport:
    """Linear entropies on ``grid`` with a convergence estimate against n/2 nodes."""
    grid = grid or TrapGrid()
    fine = _entropies(grid)
    coarse = _entropies(grid.halved())
    return TrapReport(
        S_L_labeled=fine["labeled"][0],
        S_L_ordered=fine["ordered"][0],
        extent=grid.L,
        grid_points=grid.n,
        convergence_labeled=abs(fine["labeled"][0] - coarse["labeled"][0]),
        convergence_ordered=abs(fine["ordered"][0] - coarse["ordered"][0]),
        trace_labeled=fine["labeled"][1],
        trace_ordered=fine["ordered"][1],
    )


def write_kernel_csv(kernel: Kernel, path: str | Path) -> Path:
    path = Path(path)
    u = kernel.grid.nodes
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["u", "u_prime", "value"])
        for i, ui in enumerate(u):
            for j, uj in enumerate(u):
                writer.writerow([repr(float(ui)), repr(float(uj)), repr(float(kernel.values[i, j]))])
    return path


def write_density_csv(kernel: Kernel, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["u", "density"])
        for ui, rho in zip(kernel.grid.nodes, kernel.density()):
            writer.writerow([repr(float(ui)), repr(float(rho))])
    return path


def read_kernel_csv(path: str | Path):
    """Returns (nodes, values) from a kernel CSV written by :func:`write_kernel_csv`."""
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    nodes = np.unique(data[:, 0])
    n = nodes.size
    return nodes, data[:, 2].reshape(n, n)

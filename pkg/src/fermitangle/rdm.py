"""Reduced density matrices, spectra, purity and linear entropy."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from . import kernels
from .errors import BadM, InvalidState, NonConvergence
from .fock import DistinguishableState, FermionState, basis_combos

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace Hermitian PSD matrix plus a description of its basis.

    ``basis_tag`` is e.g. ``"slater(d=4,M=1)"`` or ``"party1(dim=2)"``.
    """

    matrix: np.ndarray = field(repr=False)
    basis_tag: str = ""

    def __post_init__(self):
        rho = np.array(self.matrix, dtype=np.complex128)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidState("density matrix must be square")
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise InvalidState("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > TRACE_TOL:
            raise InvalidState(f"trace {np.trace(rho).real!r} != 1")
        rho = 0.5 * (rho + rho.conj().T)
        if np.linalg.eigvalsh(rho)[0] < -PSD_TOL:
            raise InvalidState("density matrix has a negative eigenvalue")
        rho.setflags(write=False)
        object.__setattr__(self, "matrix", rho)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@lru_cache(maxsize=128)
def _split_patterns(n: int, m: int):
    """Position patterns for splitting N sorted modes into (M, N-M) parts.

    Returns (pat_b, pat_g, signs), where signs[s] is the parity of the
    permutation that merges the concatenation (beta, gamma) into sorted order.
    """
    pat_b, pat_g, signs = [], [], []
    for b in itertools.combinations(range(n), m):
        g = tuple(p for p in range(n) if p not in b)
        inversions = sum(1 for x in b for y in g if y < x)
        pat_b.append(b)
        pat_g.append(g)
        signs.append(-1.0 if inversions % 2 else 1.0)
    out = (np.array(pat_b, dtype=np.int64).reshape(-1, m),
           np.array(pat_g, dtype=np.int64).reshape(-1, n - m),
           np.array(signs))
    for a in out:
        a.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def _binomials(d: int) -> np.ndarray:
    t = kernels.binomial_table(d)
    t.setflags(write=False)
    return t


def split_matrix(psi: FermionState, M: int) -> np.ndarray:
    """C(d,M) x C(d,N-M) matrix A with reduce(psi, M) = A A^dagger."""
    if not 1 <= M <= psi.N - 1:
        raise BadM(f"M={M} outside [1, {psi.N - 1}]")
    pat_b, pat_g, signs = _split_patterns(psi.N, M)
    return kernels.split_amplitudes(
        psi.amplitudes, basis_combos(psi.d, psi.N), pat_b, pat_g, signs, _binomials(psi.d), psi.d)


def reduce(psi: FermionState, M: int) -> DensityMatrix:
    """M-fermion reduced density matrix over the C(d, M) Slater basis, trace 1."""
    A = split_matrix(psi, M)
    rho = A @ A.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho, f"slater(d={psi.d},M={M})")


def reduce_bipartite(phi: DistinguishableState, side: int = 1) -> DensityMatrix:
    A = phi.amplitudes
    if side == 1:
        rho = A @ A.conj().T
    elif side == 2:
        rho = (A.conj().T @ A).T
    else:
        raise ValueError("side must be 1 or 2")
    return DensityMatrix(0.5 * (rho + rho.conj().T), f"party{side}(dim={rho.shape[0]})")


def purity(rho: DensityMatrix) -> float:
    """Tr rho^2."""
    m = rho.matrix
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.vdot(m, m).real)


def linear_entropy(rho: DensityMatrix) -> float:
    return 1.0 - purity(rho)


def spectral(rho: DensityMatrix) -> Spectrum:
    """Eigen-decomposition with eigenvalues in descending order, clipped to [0, 1]."""
    try:
        vals, vecs = np.linalg.eigh(rho.matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NonConvergence(str(exc)) from exc
    order = np.argsort(vals)[::-1]
    vals = np.clip(vals[order], 0.0, 1.0)
    return Spectrum(vals, vecs[:, order])


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(np.eye(dim) / dim, f"mixed(dim={dim})")


def slater_dim(d: int, M: int) -> int:
    return comb(d, M)

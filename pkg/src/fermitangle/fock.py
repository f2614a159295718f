"""Pure N-fermion states over a lexicographically ordered Slater basis.

A basis state is a strictly increasing tuple of mode indices; amplitude
vectors are indexed by the lexicographic rank of that tuple, so for d=4,
N=2 the order is (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial, sqrt
from typing import Hashable, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DoubleOccupancy,
    InvalidState,
    InvalidSubset,
    LinearlyDependentFactors,
    NotUnitary,
    UnknownName,
    UnsupportedN,
)

NORM_TOL = 1e-12
DEPENDENCE_CUTOFF = 1e-10
UNITARY_TOL = 1e-10
OCCUPANCY_TOL = 1e-10


# --------------------------------------------------------------------------
# Basis combinatorics
# --------------------------------------------------------------------------


def _check_subset(modes: Sequence[int], d: int) -> tuple[int, ...]:
    modes = tuple(int(m) for m in modes)
    for a, b in zip(modes, modes[1:]):
        if b <= a:
            raise InvalidSubset(f"modes {modes} are not strictly increasing")
    if modes and (modes[0] < 0 or modes[-1] >= d):
        raise InvalidSubset(f"modes {modes} out of range for d={d}")
    return modes


def rank_subset(modes: Sequence[int], d: int) -> int:
    """Lexicographic rank of a strictly increasing mode tuple among C(d, N)."""
    modes = _check_subset(modes, d)
    k = len(modes)
    return comb(d, k) - 1 - sum(comb(d - 1 - c, k - i) for i, c in enumerate(modes))


def unrank_subset(rank: int, d: int, n: int) -> tuple[int, ...]:
    """Inverse of :func:`rank_subset`."""
    total = comb(d, n)
    if not 0 <= rank < total:
        raise InvalidSubset(f"rank {rank} outside [0, {total})")
    out = []
    start = 0
    for i in range(n):
        remaining = n - i - 1
        for c in range(start, d):
            block = comb(d - 1 - c, remaining)
            if rank < block:
                out.append(c)
                start = c + 1
                break
            rank -= block
    return tuple(out)


@lru_cache(maxsize=256)
def _combos_cached(d: int, n: int) -> np.ndarray:
    arr = np.array(list(itertools.combinations(range(d), n)), dtype=np.int64).reshape(-1, n)
    arr.setflags(write=False)
    return arr


def basis_combos(d: int, n: int) -> np.ndarray:
    """All N-subsets of range(d) in lexicographic order, shape (C(d,N), N)."""
    return _combos_cached(int(d), int(n))


def basis_dim(d: int, n: int) -> int:
    return comb(d, n)


# --------------------------------------------------------------------------
# State types
# --------------------------------------------------------------------------


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FermionState:
    """Normalized pure state of ``N`` fermions in ``d`` single-particle modes."""

    d: int
    N: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.N <= self.d:
            raise InvalidState(f"need 1 <= N <= d, got N={self.N}, d={self.d}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != comb(self.d, self.N):
            raise InvalidState(f"expected {comb(self.d, self.N)} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidState(f"state norm {norm!r} deviates from 1")
        object.__setattr__(self, "amplitudes", _readonly(amps))

    @classmethod
    def from_amplitudes(cls, d: int, N: int, amplitudes, normalize: bool = True) -> "FermionState":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise InvalidState("zero vector cannot be normalized")
            amps = amps / norm
        return cls(d, N, amps)

    @classmethod
    def from_modes(cls, d: int, N: int, terms: Mapping[tuple[int, ...], complex],
                   normalize: bool = True) -> "FermionState":
        """Build from ``{(modes...): amplitude}``; unlisted basis states are zero."""
        amps = np.zeros(comb(d, N), dtype=np.complex128)
        for modes, value in terms.items():
            if len(modes) != N:
                raise InvalidSubset(f"{modes} does not have {N} modes")
            amps[rank_subset(modes, d)] += value
        return cls.from_amplitudes(d, N, amps, normalize=normalize)

    @classmethod
    def basis_state(cls, d: int, modes: Sequence[int]) -> "FermionState":
        modes = _check_subset(modes, d)
        amps = np.zeros(comb(d, len(modes)), dtype=np.complex128)
        amps[rank_subset(modes, d)] = 1.0
        return cls(d, len(modes), amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def terms(self, tol: float = 0.0):
        """Yield ``(modes, amplitude)`` for amplitudes with magnitude above ``tol``."""
        combos = basis_combos(self.d, self.N)
        for idx in np.flatnonzero(np.abs(self.amplitudes) > tol):
            yield tuple(int(m) for m in combos[idx]), complex(self.amplitudes[idx])


@dataclass(frozen=True, eq=False)
class ProductState:
    """Unit-norm single-particle factors, one per particle."""

    factors: tuple

    def __post_init__(self):
        vecs = tuple(_readonly(np.asarray(f, dtype=np.complex128).reshape(-1)) for f in self.factors)
        if not vecs:
            raise InvalidState("a product state needs at least one factor")
        d = vecs[0].size
        for v in vecs:
            if v.size != d:
                raise DimensionMismatch("factors have different lengths")
            if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
                raise InvalidState("product factors must be unit-norm")
        object.__setattr__(self, "factors", vecs)

    @classmethod
    def normalized(cls, factors) -> "ProductState":
        return cls(tuple(np.asarray(f, dtype=np.complex128) / np.linalg.norm(f) for f in factors))

    @property
    def d(self) -> int:
        return self.factors[0].size

    @property
    def N(self) -> int:
        return len(self.factors)

    def matrix(self) -> np.ndarray:
        """Factor components as a d x N matrix (one column per particle)."""
        return np.column_stack(self.factors)


@dataclass(frozen=True, eq=False)
class DistinguishableState:
    """Bipartite pure state of two labeled parties as a d1 x d2 amplitude matrix."""

    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 2:
            raise InvalidState("amplitudes must be a matrix")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidState(f"state norm {norm!r} deviates from 1")
        object.__setattr__(self, "amplitudes", _readonly(amps))

    @classmethod
    def from_matrix(cls, amplitudes, normalize: bool = True) -> "DistinguishableState":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(amps)

    @property
    def dims(self) -> tuple[int, int]:
        return self.amplitudes.shape


# --------------------------------------------------------------------------
# Operations
# --------------------------------------------------------------------------


def antisymmetrize(product: ProductState | Sequence) -> FermionState:
    """Normalized antisymmetric projection of a product state.

    The amplitude on basis state ``alpha`` is the determinant of the factor
    components restricted to the rows ``alpha``; raises
    :class:`LinearlyDependentFactors` when the projection is numerically zero.
    """
    if not isinstance(product, ProductState):
        product = ProductState(tuple(product))
    F = product.matrix()
    d, n = F.shape
    if n > d:
        raise LinearlyDependentFactors(f"{n} fermions cannot occupy {d} modes")
    combos = basis_combos(d, n)
    amps = np.linalg.det(F[combos])
    # |A (f1 x ... x fN)|^2 = det(Gram) / N!
    projection_norm = np.linalg.norm(amps) / sqrt(factorial(n))
    if projection_norm < DEPENDENCE_CUTOFF:
        raise LinearlyDependentFactors(f"antisymmetric projection has norm {projection_norm:.3g}")
    return FermionState(d, n, amps / np.linalg.norm(amps))


def overlap(a: FermionState, b: FermionState) -> complex:
    """<a|b> (conjugate-linear in the first argument)."""
    if (a.d, a.N) != (b.d, b.N):
        raise DimensionMismatch(f"(d, N) = {(a.d, a.N)} vs {(b.d, b.N)}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def check_unitary(U, d: int | None = None, tol: float = UNITARY_TOL) -> np.ndarray:
    U = np.asarray(U, dtype=np.complex128)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise NotUnitary("matrix is not square")
    if d is not None and U.shape[0] != d:
        raise DimensionMismatch(f"unitary is {U.shape[0]}x{U.shape[0]}, state has d={d}")
    if np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) > tol:
        raise NotUnitary("U^dagger U deviates from identity")
    return U


def compound_matrix(U, n: int) -> np.ndarray:
    """n-th compound matrix: entry (beta, alpha) is det U[beta, alpha]."""
    U = np.asarray(U, dtype=np.complex128)
    d = U.shape[0]
    combos = basis_combos(d, n)
    rows = U[combos]  # (C, n, d)
    out = np.empty((len(combos), len(combos)), dtype=np.complex128)
    for i in range(len(combos)):
        out[i] = np.linalg.det(rows[i][:, combos].transpose(1, 0, 2))
    return out


def single_particle_transform(psi: FermionState, U) -> FermionState:
    """Apply the same single-particle unitary to every fermion.

    Mode ``i`` is mapped to ``sum_j U[j, i] |j>``, so amplitudes transform by
    the N-th compound matrix of ``U``.
    """
    U = check_unitary(U, psi.d)
    amps = compound_matrix(U, psi.N) @ psi.amplitudes
    return FermionState.from_amplitudes(psi.d, psi.N, amps)


Site = Hashable


def _parse_partition(partition, d: int) -> list[tuple[Site, int]]:
    if isinstance(partition, Mapping):
        try:
            entries = [partition[m] for m in range(d)]
        except KeyError as exc:
            raise DimensionMismatch(f"partition does not cover mode {exc.args[0]}") from None
    else:
        entries = list(partition)
    if len(entries) != d:
        raise DimensionMismatch(f"partition has {len(entries)} entries for d={d}")
    return [(site, int(internal)) for site, internal in entries]


def freeze(psi: FermionState, partition, left: Site | None = None) -> DistinguishableState:
    """Turn a two-fermion state on two disjoint sites into a labeled bipartite state.

    ``partition[mode] = (site, internal)``. The particle on ``left`` (default:
    site of mode 0) becomes party 1. Same-site amplitudes are rejected.
    """
    if psi.N != 2:
        raise UnsupportedN(f"freeze needs N=2, got N={psi.N}")
    entries = _parse_partition(partition, psi.d)
    sites = list(dict.fromkeys(site for site, _ in entries))
    if len(sites) != 2:
        raise DimensionMismatch(f"partition must use exactly two sites, got {sites}")
    if left is None:
        left = entries[0][0]
    if left not in sites:
        raise DimensionMismatch(f"left site {left!r} not in partition")
    right = sites[1] if sites[0] == left else sites[0]
    d1 = 1 + max(i for s, i in entries if s == left)
    d2 = 1 + max(i for s, i in entries if s == right)
    A = np.zeros((d1, d2), dtype=np.complex128)
    for (i, j), c in psi.terms():
        (si, ki), (sj, kj) = entries[i], entries[j]
        if si == sj:
            if abs(c) > OCCUPANCY_TOL:
                raise DoubleOccupancy(f"amplitude {abs(c):.3g} on same-site pair {(i, j)}")
            continue
        # |i j> - |j i>: the left particle is read off first
        if si == left:
            A[ki, kj] += c
        else:
            A[kj, ki] -= c
    norm = np.linalg.norm(A)
    if norm < OCCUPANCY_TOL:
        raise DoubleOccupancy("state has no weight on split-site configurations")
    return DistinguishableState(A / norm)


SITE_MODE_LABELS = ("A0", "A1", "B0", "B1")
SITE_PARTITION = (("A", 0), ("A", 1), ("B", 0), ("B", 1))


def build_reference_state(name: str) -> FermionState:
    """Two-fermion, four-mode reference states (mode order A0, A1, B0, B1).

    ``slater-AB`` is the single determinant on {A0, B1}; ``non-slater-AB`` is
    the balanced superposition of determinants on {A0, B1} and {A1, B0}.
    """
    if name == "slater-AB":
        return FermionState.from_modes(4, 2, {(0, 3): 1.0})
    if name == "non-slater-AB":
        r = 1 / sqrt(2)
        return FermionState.from_modes(4, 2, {(0, 3): r, (1, 2): r})
    raise UnknownName(name)


REFERENCE_STATE_NAMES = ("slater-AB", "non-slater-AB")

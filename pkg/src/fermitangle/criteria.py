"""Purity-based entanglement classification for pure fermionic states."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb, sqrt

from .errors import BadArgs, InvariantViolation
from .fock import DistinguishableState, FermionState
from .rdm import linear_entropy, purity, reduce, reduce_bipartite

DEFAULT_TOL = 1e-8
# purity deficits below this are roundoff; sqrt would inflate them to ~1e-7
DEFICIT_FLOOR = 1e-14


class Classification(str, enum.Enum):
    NON_ENTANGLED = "NonEntangled"
    ENTANGLED = "Entangled"

    def __str__(self) -> str:
        return self.value


class Correlation(str, enum.Enum):
    UNCORRELATED = "Uncorrelated"
    CORRELATED = "Correlated"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PurityBounds:
    lower: float
    upper: float
    d_M: int

    @property
    def degenerate(self) -> bool:
        return self.upper - self.lower <= 0.0


@dataclass(frozen=True)
class Verdict:
    classification: Classification
    purity: float
    bounds: PurityBounds
    margin: float

    @property
    def entangled(self) -> bool:
        return self.classification is Classification.ENTANGLED


@dataclass(frozen=True)
class CorrelationReport:
    correlation: Correlation
    linear_entropy_1: float
    linear_entropy_2: float


def purity_bounds(N: int, M: int, d: int) -> PurityBounds:
    """Admissible range of Tr rho_M^2 for pure N-fermion states in d modes.

    The upper value 1/C(N, M) is reached exactly by single Slater
    determinants; the lower value is 1/C(d, min(M, N - M)).
    """
    if not (1 <= M <= N - 1 and N <= d):
        raise BadArgs(f"need 1 <= M <= N-1 and N <= d, got N={N}, M={M}, d={d}")
    d_M = comb(d, min(M, N - M))
    return PurityBounds(lower=1.0 / d_M, upper=1.0 / comb(N, M), d_M=d_M)


def classify(psi: FermionState, M: int, tol: float = DEFAULT_TOL) -> Verdict:
    bounds = purity_bounds(psi.N, M, psi.d)
    p = purity(reduce(psi, M))
    margin = bounds.upper - p
    if bounds.degenerate or abs(margin) <= tol:
        cls = Classification.NON_ENTANGLED
    elif margin > tol and p >= bounds.lower - tol:
        cls = Classification.ENTANGLED
    else:
        raise InvariantViolation(
            f"purity {p!r} outside [{bounds.lower!r}, {bounds.upper!r}] beyond tol {tol}")
    return Verdict(cls, p, bounds, margin)


def fermionic_concurrence(psi: FermionState, M: int = 1) -> float:
    """Normalized purity deficit sqrt((upper - purity) / (upper - lower)).

    Zero exactly on single Slater determinants, one at the lower bound; for
    N=2, d=4, M=1 it equals :func:`fermitangle.slater.concurrence_2f`.
    """
    bounds = purity_bounds(psi.N, M, psi.d)
    if bounds.degenerate:
        return 0.0
    deficit = bounds.upper - purity(reduce(psi, M))
    if deficit <= DEFICIT_FLOOR:
        return 0.0
    value = sqrt(deficit / (bounds.upper - bounds.lower))
    return min(value, 1.0)


def correlation_criterion(phi: DistinguishableState, tol: float = DEFAULT_TOL) -> CorrelationReport:
    s1 = linear_entropy(reduce_bipartite(phi, 1))
    s2 = linear_entropy(reduce_bipartite(phi, 2))
    cor = Correlation.CORRELATED if s1 > tol else Correlation.UNCORRELATED
    return CorrelationReport(cor, s1, s2)

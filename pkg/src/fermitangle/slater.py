"""Slater and Schmidt decompositions, and two-party concurrences.

A two-fermion state is written as psi = sum_ij w_ij |i>|j> with w
antisymmetric and sum |w_ij|^2 = 1. Its Slater decomposition is
w = U . blockdiag(z_k [[0, 1], [-1, 0]]) . U^T with U unitary and z_k >= 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .errors import (
    DegeneracyResolutionFailure,
    InvalidState,
    NonConvergence,
    UnsupportedDims,
    UnsupportedN,
)
from .fock import DistinguishableState, FermionState, basis_combos

ANTISYMMETRY_TOL = 1e-12
COEFF_NORM_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-8
PAIR_CUTOFF = 1e-12

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True, eq=False)
class CoeffMatrix:
    w: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.w, dtype=np.complex128)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InvalidState("coefficient matrix must be square")
        if np.max(np.abs(w + w.T), initial=0.0) > ANTISYMMETRY_TOL:
            raise InvalidState("coefficient matrix is not antisymmetric")
        if abs(np.vdot(w, w).real - 1.0) > COEFF_NORM_TOL:
            raise InvalidState("coefficient matrix is not normalized")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def d(self) -> int:
        return self.w.shape[0]


@dataclass(frozen=True, eq=False)
class SlaterDecomposition:
    U: np.ndarray = field(repr=False)
    pair_coeffs: np.ndarray

    def canonical(self) -> np.ndarray:
        d = self.U.shape[0]
        B = np.zeros((d, d), dtype=np.complex128)
        for k, z in enumerate(self.pair_coeffs):
            B[2 * k:2 * k + 2, 2 * k:2 * k + 2] = z * _J
        return B

    def reconstruct(self) -> np.ndarray:
        return self.U @ self.canonical() @ self.U.T


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left: np.ndarray = field(repr=False)
    right: np.ndarray = field(repr=False)

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.coefficients) @ self.right.T

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.coefficients > 1e-12))


def _require_two(psi: FermionState):
    if psi.N != 2:
        raise UnsupportedN(f"two-fermion operation called with N={psi.N}")


def coeff_matrix(psi: FermionState) -> CoeffMatrix:
    """w_ij = amplitude({i, j}) / sqrt(2) for i < j, antisymmetrically extended."""
    _require_two(psi)
    combos = basis_combos(psi.d, 2)
    w = np.zeros((psi.d, psi.d), dtype=np.complex128)
    a = psi.amplitudes / sqrt(2)
    w[combos[:, 0], combos[:, 1]] = a
    w[combos[:, 1], combos[:, 0]] = -a
    return CoeffMatrix(w)


def _phase_fix(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > np.abs(v).max() * (1 - 1e-9)))
    return v * (abs(v[k]) / v[k])


def slater_decompose(w: CoeffMatrix) -> SlaterDecomposition:
    """Canonical pairing form of an antisymmetric coefficient matrix.

    Peels off one pair block at a time: the top eigenvector u of w w^dagger
    (eigenvalue z^2) is paired with u' = -w conj(u) / z, and z (u u'^T - u' u^T)
    is subtracted. The remainder is again antisymmetric with the pair removed
    from its range, so its spectrum is the old one minus the pair {z^2, z^2}.
    """
    d = w.d
    rest = np.array(w.w)
    columns, coeffs = [], []
    for _ in range(d // 2):
        try:
            vals, vecs = np.linalg.eigh(rest @ rest.conj().T)
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise NonConvergence(str(exc)) from exc
        u = _phase_fix(vecs[:, -1])
        partner = -rest @ u.conj()
        z = np.linalg.norm(partner)
        if z <= PAIR_CUTOFF:
            break
        partner /= z
        columns += [u, partner]
        coeffs.append(z)
        rest = rest - z * (np.outer(u, partner) - np.outer(partner, u))

    U = _complete_basis(np.array(columns, dtype=np.complex128).T.reshape(d, len(columns)), d)
    z = np.zeros(d // 2)
    z[:len(coeffs)] = coeffs
    dec = SlaterDecomposition(U, z)
    err = np.max(np.abs(dec.reconstruct() - w.w), initial=0.0)
    if err > RECONSTRUCTION_TOL:
        raise DegeneracyResolutionFailure(f"pairing reconstruction error {err:.3g}")
    return dec


def _complete_basis(cols: np.ndarray, d: int) -> np.ndarray:
    """Extend orthonormal columns to a d x d unitary (deterministically)."""
    k = cols.shape[1]
    if k == d:
        return cols
    # project the standard basis out of span(cols) and orthonormalize
    residual = np.eye(d, dtype=np.complex128) - cols @ cols.conj().T
    q, r = np.linalg.qr(residual)
    strength = np.abs(np.diag(r))
    picked = q[:, np.argsort(-strength, kind="stable")[:d - k]]
    # second pass against roundoff leaking back into span(cols)
    picked = picked - cols @ (cols.conj().T @ picked)
    picked, _ = np.linalg.qr(picked)
    return np.hstack([cols, picked])


def slater_rank(psi: FermionState, tol: float = 1e-8) -> int:
    """Number of pair coefficients above ``tol``; 1 means a single determinant."""
    _require_two(psi)
    return int(np.count_nonzero(slater_decompose(coeff_matrix(psi)).pair_coeffs > tol))


def pfaffian4(w: np.ndarray) -> complex:
    return complex(w[0, 1] * w[2, 3] - w[0, 2] * w[1, 3] + w[0, 3] * w[1, 2])


def concurrence_2f(psi: FermionState) -> float:
    """Two-fermion concurrence 4 |Pf(w)| for N=2, d=4."""
    _require_two(psi)
    if psi.d != 4:
        raise UnsupportedDims(f"needs d=4, got d={psi.d}")
    return 4.0 * abs(pfaffian4(coeff_matrix(psi).w))


def schmidt_decompose(phi: DistinguishableState) -> SchmidtDecomposition:
    """Singular-value form: phi = sum_k c_k |left_k>|right_k>, c descending."""
    try:
        left, c, vh = np.linalg.svd(phi.amplitudes, full_matrices=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NonConvergence(str(exc)) from exc
    return SchmidtDecomposition(c, left, vh.T)


def concurrence_2qubit(phi: DistinguishableState) -> float:
    """Pure-state two-qubit concurrence 2 |det A|."""
    if phi.dims != (2, 2):
        raise UnsupportedDims(f"needs dims (2, 2), got {phi.dims}")
    return 2.0 * abs(np.linalg.det(phi.amplitudes))

"""Hot numerical kernels, each with a numba and a pure-numpy implementation.

The public entry points (``split_amplitudes``, ``quadrature_kernel``,
``weighted_square_sum``) dispatch on :data:`fermitangle._accel.USE_NUMBA`.
The ``*_numba`` / ``*_numpy`` variants are importable directly so tests and
benchmarks can compare them.
"""
from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit, prange

# --------------------------------------------------------------------------
# Subset ranking
# --------------------------------------------------------------------------


def binomial_table(n: int) -> np.ndarray:
    """Pascal table ``T[a, b] = C(a, b)`` for ``0 <= a, b <= n`` (int64)."""
    table = np.zeros((n + 1, n + 1), dtype=np.int64)
    for a in range(n + 1):
        table[a, 0] = 1
        for b in range(1, a + 1):
            table[a, b] = table[a - 1, b - 1] + table[a - 1, b]
    return table


def rank_rows_numpy(subsets: np.ndarray, d: int, binom: np.ndarray) -> np.ndarray:
    """Lexicographic ranks of the sorted rows of ``subsets`` (shape (m, k))."""
    subsets = np.asarray(subsets, dtype=np.int64)
    k = subsets.shape[1]
    if k == 0:
        return np.zeros(subsets.shape[0], dtype=np.int64)
    # rank = C(d,k) - 1 - sum_i C(d-1-c_i, k-i)
    tail = np.zeros(subsets.shape[0], dtype=np.int64)
    for i in range(k):
        tail += binom[d - 1 - subsets[:, i], k - i]
    return binom[d, k] - 1 - tail


# --------------------------------------------------------------------------
# M-fermion split matrix
# --------------------------------------------------------------------------
# For an N-fermion state with amplitudes c_alpha, the split matrix is
#   A[beta, gamma] = sign(beta, gamma) * c_{beta u gamma} / sqrt(C(N, M))
# over disjoint M-subsets beta and (N-M)-subsets gamma, where the sign is the
# parity of merging beta followed by gamma into increasing order. The
# M-fermion reduced density matrix is A @ A^dagger.


@njit(cache=True)
def _split_amplitudes_numba(coeffs, combos, pat_b, pat_g, signs, binom, d, scale, out):
    n_alpha = combos.shape[0]
    n_split = pat_b.shape[0]
    m = pat_b.shape[1]
    r = pat_g.shape[1]
    cd_m = binom[d, m]
    cd_r = binom[d, r]
    for a in range(n_alpha):
        c = coeffs[a]
        if c.real == 0.0 and c.imag == 0.0:
            continue
        for s in range(n_split):
            tail = 0
            for i in range(m):
                tail += binom[d - 1 - combos[a, pat_b[s, i]], m - i]
            rb = cd_m - 1 - tail
            tail = 0
            for i in range(r):
                tail += binom[d - 1 - combos[a, pat_g[s, i]], r - i]
            rg = cd_r - 1 - tail
            out[rb, rg] = signs[s] * scale * c
    return out


def split_amplitudes_numba(coeffs, combos, pat_b, pat_g, signs, binom, d):
    m, r = pat_b.shape[1], pat_g.shape[1]
    out = np.zeros((int(binom[d, m]), int(binom[d, r])), dtype=np.complex128)
    scale = 1.0 / np.sqrt(float(pat_b.shape[0]))
    return _split_amplitudes_numba(
        np.ascontiguousarray(coeffs, dtype=np.complex128),
        np.ascontiguousarray(combos, dtype=np.int64),
        np.ascontiguousarray(pat_b, dtype=np.int64),
        np.ascontiguousarray(pat_g, dtype=np.int64),
        np.ascontiguousarray(signs, dtype=np.float64),
        binom, d, scale, out,
    )


def split_amplitudes_numpy(coeffs, combos, pat_b, pat_g, signs, binom, d):
    m, r = pat_b.shape[1], pat_g.shape[1]
    out = np.zeros((int(binom[d, m]), int(binom[d, r])), dtype=np.complex128)
    scale = 1.0 / np.sqrt(float(pat_b.shape[0]))
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    for s in range(pat_b.shape[0]):
        rb = rank_rows_numpy(combos[:, pat_b[s]], d, binom)
        rg = rank_rows_numpy(combos[:, pat_g[s]], d, binom)
        out[rb, rg] = signs[s] * scale * coeffs
    return out


def split_amplitudes(coeffs, combos, pat_b, pat_g, signs, binom, d):
    if USE_NUMBA:
        return split_amplitudes_numba(coeffs, combos, pat_b, pat_g, signs, binom, d)
    return split_amplitudes_numpy(coeffs, combos, pat_b, pat_g, signs, binom, d)


# --------------------------------------------------------------------------
# Quadrature kernels
# --------------------------------------------------------------------------


@njit(cache=True, parallel=True)
def _quadrature_kernel_numba(psi, weights, out):
    n = psi.shape[0]
    nv = psi.shape[1]
    for i in prange(n):
        for j in range(i, n):
            acc = 0.0
            for v in range(nv):
                acc += psi[i, v] * psi[j, v] * weights[v]
            out[i, j] = acc
            out[j, i] = acc
    return out


def quadrature_kernel_numba(psi: np.ndarray, weights: np.ndarray) -> np.ndarray:
    psi = np.ascontiguousarray(psi, dtype=np.float64)
    out = np.empty((psi.shape[0], psi.shape[0]), dtype=np.float64)
    return _quadrature_kernel_numba(psi, np.ascontiguousarray(weights, dtype=np.float64), out)


def quadrature_kernel_numpy(psi: np.ndarray, weights: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.float64)
    return (psi * weights) @ psi.T


def quadrature_kernel(psi: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """``K[i, j] = sum_v psi[i, v] psi[j, v] w[v]``, the discretized partial trace."""
    if USE_NUMBA:
        return quadrature_kernel_numba(psi, weights)
    return quadrature_kernel_numpy(psi, weights)


@njit(cache=True)
def _weighted_square_sum_numba(k, weights):
    n = k.shape[0]
    acc = 0.0
    for i in range(n):
        row = 0.0
        for j in range(n):
            row += k[i, j] * k[i, j] * weights[j]
        acc += row * weights[i]
    return acc


def weighted_square_sum_numba(k: np.ndarray, weights: np.ndarray) -> float:
    return float(_weighted_square_sum_numba(
        np.ascontiguousarray(k, dtype=np.float64), np.ascontiguousarray(weights, dtype=np.float64)))


def weighted_square_sum_numpy(k: np.ndarray, weights: np.ndarray) -> float:
    k = np.asarray(k, dtype=np.float64)
    return float(weights @ (k * k) @ weights)


def weighted_square_sum(k: np.ndarray, weights: np.ndarray) -> float:
    """``sum_{ij} K[i,j]^2 w_i w_j``: quadrature of Tr rho^2 for a real kernel."""
    if USE_NUMBA:
        return weighted_square_sum_numba(k, weights)
    return weighted_square_sum_numpy(k, weights)

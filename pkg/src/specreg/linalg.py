"""From-scratch dense linear algebra for the projection pipelines.

Unpivoted modified Gram-Schmidt QR (with a reorthogonalization pass),
back substitution, a one-sided Jacobi SVD, the midpoint cumulative-sum
operator with its analytic inverse, and a radix-2 FFT.  Everything works
on plain float64 ndarrays; the heavy loops live in the kernel backends.
"""

from dataclasses import dataclass

import numpy as np

from ._backend import kernels

MAX_JACOBI_SWEEPS = 60


class RankDeficiencyError(ValueError):
    """A matrix column is numerically dependent on its predecessors."""


class SingularMatrixError(ValueError):
    """A triangular solve met a zero diagonal entry."""


class IterationLimitError(RuntimeError):
    """An iterative factorization failed to converge."""


@dataclass(frozen=True)
class QRFactors:
    """Thin QR: Q has orthonormal columns, R is upper triangular with
    positive diagonal, columns in original order."""

    Q: np.ndarray
    R: np.ndarray


@dataclass(frozen=True)
class SVDFactors:
    """Full SVD of a square matrix, singular values sorted descending."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray


def _as_matrix(M, name: str) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise ValueError(f"{name} must be a 2-d array")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} must have finite entries")
    return np.ascontiguousarray(M)


def qr_mgs(P) -> QRFactors:
    """QR of an m x n matrix, m >= n, by reorthogonalized MGS.

    Raises RankDeficiencyError naming the offending (1-based) column when
    a diagonal entry falls below 1e-12 times the column's norm.
    """
    P = _as_matrix(P, "P")
    m, n = P.shape
    if m < n or n < 1:
        raise ValueError(f"need m >= n >= 1 columns, got {m} x {n}")
    Q, R, bad = kernels().mgs_qr(P)
    if bad >= 0:
        raise RankDeficiencyError(
            f"column {bad + 1} is numerically dependent on earlier columns")
    return QRFactors(Q=Q, R=R)


def back_substitute(R, y) -> np.ndarray:
    """Solve R x = y for upper-triangular R."""
    R = np.asarray(R, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError("R must be square")
    n = R.shape[0]
    if y.shape != (n,):
        raise ValueError("right-hand side length must match R")
    for j in range(n):
        if R[j, j] == 0.0:
            raise SingularMatrixError(f"diagonal entry {j + 1} of R is zero")
    x = np.empty(n)
    for j in range(n - 1, -1, -1):
        x[j] = (y[j] - R[j, j + 1:] @ x[j + 1:]) / R[j, j]
    return x


def _complete_orthonormal(U: np.ndarray, have: int) -> None:
    """Fill columns have..m-1 of U with an orthonormal completion, in place."""
    m = U.shape[0]
    for k in range(have, m):
        best = None
        best_norm = -1.0
        for cand in range(m):
            e = np.zeros(m)
            e[cand] = 1.0
            r = e - U[:, :k] @ (U[:, :k].T @ e)
            r -= U[:, :k] @ (U[:, :k].T @ r)
            rn = float(np.sqrt(r @ r))
            if rn > best_norm:
                best_norm = rn
                best = r
        U[:, k] = best / best_norm


def jacobi_svd(M, max_sweeps: int = MAX_JACOBI_SWEEPS) -> SVDFactors:
    """Full SVD of a square matrix by one-sided Jacobi iteration.

    Sweeps rotate column pairs until every off-diagonal Gram entry is at
    most 1e-14 * ||M||_F^2; raises IterationLimitError if max_sweeps
    cyclic sweeps do not get there.
    """
    M = _as_matrix(M, "M")
    m, n = M.shape
    if m != n:
        raise ValueError("jacobi_svd expects a square matrix")
    thr = 1e-14 * float(np.sum(M * M))
    B, V, sweeps = kernels().jacobi_svd_sweeps(M, int(max_sweeps), thr)
    if sweeps < 0:
        raise IterationLimitError(
            f"one-sided Jacobi did not converge within {max_sweeps} sweeps")
    norms = np.sqrt(np.sum(B * B, axis=0))
    order = np.argsort(-norms, kind="stable")
    sigma = norms[order]
    B = B[:, order]
    V = V[:, order]
    U = np.empty_like(B)
    # columns whose norm is at rounding level carry no direction; they are
    # replaced by an orthonormal completion below
    cut = m * np.finfo(np.float64).eps * (sigma[0] if m and sigma[0] > 0.0 else 1.0)
    have = int(np.sum(sigma > cut))
    for k in range(have):
        U[:, k] = B[:, k] / sigma[k]
    _complete_orthonormal(U, have)
    return SVDFactors(U=U, sigma=sigma, V=V)


def cumulative_op(m: int, h: float):
    """Midpoint cumulative-sum operator L = h * (lower ones) and its
    analytic inverse, the forward-difference bidiagonal divided by h."""
    if m < 1:
        raise ValueError("grid size must be at least 1")
    if not h > 0.0:
        raise ValueError("step must be positive")
    L = h * np.tril(np.ones((m, m)))
    L_inv = (np.eye(m) - np.eye(m, k=-1)) / h
    return L, L_inv


def fft_radix2(series, M: int | None = None) -> np.ndarray:
    """DFT of a real series zero-padded to a power-of-two length M.

    Indexing puts the first sample at t = 1:
    R_j = sum_{t=1..M} r_t exp(-i 2 pi j t / M), j = 0..M-1.
    """
    r = np.asarray(series, dtype=np.float64)
    if r.ndim != 1 or r.size < 1:
        raise ValueError("series must be a nonempty 1-d array")
    m = r.size
    if M is None:
        M = 1
        while M < m:
            M *= 2
    M = int(M)
    if M < m or M & (M - 1) != 0 or M < 1:
        raise ValueError("M must be a power of two no smaller than the series length")
    z = np.zeros(M, dtype=np.complex128)
    z[:m] = r
    X = kernels().fft_pow2(z)
    # shift from t-from-0 to t-from-1 indexing
    return X * np.exp(-2j * np.pi * np.arange(M) / M)

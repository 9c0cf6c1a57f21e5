"""Pure-numpy kernels.

Reference implementations mirrored by _kernels_numba.  Failure is
signalled through sentinel return values, never exceptions, so the two
backends stay call-compatible under numba's nopython restrictions.
"""

import numpy as np


def mgs_qr(P: np.ndarray):
    """Thin QR via modified Gram-Schmidt plus one reorthogonalization pass.

    Returns (Q, R, bad) with bad = 0-based index of the first column that
    is numerically dependent on its predecessors, or -1 on success.  The
    rank test compares the surviving norm against 1e-12 times the original
    column norm, so scaling a column does not change the verdict.
    """
    m, n = P.shape
    Q = np.array(P, dtype=np.float64)
    R = np.zeros((n, n))
    for j in range(n):
        v = Q[:, j]
        col_norm = np.sqrt(v @ v)
        # two sequential sweeps: plain MGS, then once more to mop up the
        # orthogonality lost to cancellation in the first sweep
        for _ in range(2):
            for i in range(j):
                c = Q[:, i] @ v
                v -= c * Q[:, i]
                R[i, j] += c
        rjj = np.sqrt(v @ v)
        if rjj <= 1e-12 * col_norm:
            return Q, R, j
        R[j, j] = rjj
        Q[:, j] = v / rjj
    return Q, R, -1


def jacobi_svd_sweeps(M: np.ndarray, max_sweeps: int, thr: float):
    """One-sided Jacobi orthogonalization of the columns of M.

    Cyclic row-ordered sweeps; a rotation fires while the off-diagonal
    Gram entry exceeds thr in magnitude or sits above the pair-relative
    floor m*eps*|bp||bq|.  The relative test matters when the column
    norms are spread, otherwise pairs of short columns stop rotating
    while still far from orthogonal.  Returns (B, V, sweeps) where
    B = M V has orthogonal columns, sweeps is the count actually used,
    or -1 when max_sweeps passed without a clean sweep.
    """
    m, n = M.shape
    B = np.array(M, dtype=np.float64)
    V = np.eye(n)
    rel = m * 2.220446049250313e-16
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                bp = B[:, p]
                bq = B[:, q]
                gam = bp @ bq
                alpha = bp @ bp
                beta = bq @ bq
                if abs(gam) <= thr and gam * gam <= rel * rel * alpha * beta:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gam)
                sign = 1.0 if zeta >= 0.0 else -1.0
                t = sign / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                new_p = c * bp - s * bq
                new_q = s * bp + c * bq
                B[:, p] = new_p
                B[:, q] = new_q
                vp = V[:, p].copy()
                V[:, p] = c * vp - s * V[:, q]
                V[:, q] = s * vp + c * V[:, q]
        if not rotated:
            return B, V, sweep
    return B, V, -1


def fft_pow2(z: np.ndarray) -> np.ndarray:
    """Iterative radix-2 DFT of a complex128 vector whose length is 2**k.

    Plain convention X_j = sum_t z_t exp(-2 pi i j t / M) with t from 0.
    """
    M = z.shape[0]
    levels = 0
    while (1 << levels) < M:
        levels += 1
    idx = np.arange(M)
    rev = np.zeros(M, dtype=np.int64)
    work = idx.copy()
    for _ in range(levels):
        rev = (rev << 1) | (work & 1)
        work >>= 1
    a = z[rev].astype(np.complex128)
    size = 2
    while size <= M:
        half = size // 2
        tw = np.exp(-2j * np.pi * np.arange(half) / size)
        blocks = a.reshape(-1, size)
        t = blocks[:, half:] * tw
        upper = blocks[:, :half] - t
        blocks[:, :half] += t
        blocks[:, half:] = upper
        size *= 2
    return a


def legendre_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """Rows 0..nmax-1 of Legendre P_k(x) by the three-term recurrence."""
    T = np.empty((nmax, x.shape[0]))
    T[0] = 1.0
    if nmax > 1:
        T[1] = x
    for k in range(2, nmax):
        T[k] = ((2.0 * k - 1.0) * x * T[k - 1] - (k - 1.0) * T[k - 2]) / k
    return T


def legendre_deriv_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """Rows 0..nmax-1 of P_k'(x) via P_k' = P_{k-2}' + (2k-1) P_{k-1}."""
    T = legendre_table(nmax, x)
    D = np.zeros((nmax, x.shape[0]))
    if nmax > 1:
        D[1] = 1.0
    for k in range(2, nmax):
        D[k] = D[k - 2] + (2.0 * k - 1.0) * T[k - 1]
    return D


def jacobi_table(nmax: int, alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    """Rows 0..nmax-1 of Jacobi P_k^(alpha,beta)(x), alpha, beta > -1."""
    T = np.empty((nmax, x.shape[0]))
    T[0] = 1.0
    if nmax > 1:
        T[1] = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0
    ab = alpha + beta
    for k in range(2, nmax):
        c1 = 2.0 * k * (k + ab) * (2.0 * k + ab - 2.0)
        c2 = (2.0 * k + ab - 1.0) * (alpha * alpha - beta * beta)
        c3 = (2.0 * k + ab - 1.0) * (2.0 * k + ab) * (2.0 * k + ab - 2.0)
        c4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + ab)
        T[k] = ((c2 + c3 * x) * T[k - 1] - c4 * T[k - 2]) / c1
    return T


def gauss_legendre_nodes(n: int):
    """Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1].

    Newton iteration from the Chebyshev-like initial guess; converges to
    machine precision in a handful of steps for any practical n.
    """
    k = np.arange(1, n + 1, dtype=np.float64)
    x = np.cos(np.pi * (4.0 * k - 1.0) / (4.0 * n + 2.0))
    for _ in range(100):
        p0 = np.ones(n)
        p1 = x.copy()
        for j in range(2, n + 1):
            p0, p1 = p1, ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j
        dpn = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dpn
        x -= dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    # final weights from the derivative at the converged nodes
    p0 = np.ones(n)
    p1 = x.copy()
    for j in range(2, n + 1):
        p0, p1 = p1, ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j
    dpn = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dpn * dpn)
    order = np.argsort(x)
    return x[order], w[order]

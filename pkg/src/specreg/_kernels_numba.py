"""Numba-compiled kernels.

Mirrors _kernels_numpy exactly: same names, same sentinel conventions.
Loop-heavy formulations compile well under nopython mode; cache=True so
the JIT cost is paid once per machine, not once per process.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def mgs_qr(P):
    m, n = P.shape
    Q = P.astype(np.float64).copy()
    R = np.zeros((n, n))
    for j in range(n):
        col_norm = 0.0
        for r in range(m):
            col_norm += Q[r, j] * Q[r, j]
        col_norm = math.sqrt(col_norm)
        for _ in range(2):
            for i in range(j):
                c = 0.0
                for r in range(m):
                    c += Q[r, i] * Q[r, j]
                for r in range(m):
                    Q[r, j] -= c * Q[r, i]
                R[i, j] += c
        rjj = 0.0
        for r in range(m):
            rjj += Q[r, j] * Q[r, j]
        rjj = math.sqrt(rjj)
        if rjj <= 1e-12 * col_norm:
            return Q, R, j
        R[j, j] = rjj
        for r in range(m):
            Q[r, j] /= rjj
    return Q, R, -1


@njit(cache=True)
def jacobi_svd_sweeps(M, max_sweeps, thr):
    m, n = M.shape
    B = M.astype(np.float64).copy()
    V = np.eye(n)
    rel = m * 2.220446049250313e-16
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gam = 0.0
                alpha = 0.0
                beta = 0.0
                for r in range(m):
                    gam += B[r, p] * B[r, q]
                    alpha += B[r, p] * B[r, p]
                    beta += B[r, q] * B[r, q]
                if abs(gam) <= thr and gam * gam <= rel * rel * alpha * beta:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gam)
                sign = 1.0 if zeta >= 0.0 else -1.0
                t = sign / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                for r in range(m):
                    bp = B[r, p]
                    bq = B[r, q]
                    B[r, p] = c * bp - s * bq
                    B[r, q] = s * bp + c * bq
                for r in range(n):
                    vp = V[r, p]
                    vq = V[r, q]
                    V[r, p] = c * vp - s * vq
                    V[r, q] = s * vp + c * vq
        if not rotated:
            return B, V, sweep
    return B, V, -1


@njit(cache=True)
def fft_pow2(z):
    M = z.shape[0]
    a = z.astype(np.complex128).copy()
    # bit reversal permutation, done with pair swaps
    j = 0
    for i in range(1, M):
        bit = M >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            tmp = a[i]
            a[i] = a[j]
            a[j] = tmp
    size = 2
    while size <= M:
        half = size // 2
        ang = -2.0 * math.pi / size
        wstep = complex(math.cos(ang), math.sin(ang))
        for start in range(0, M, size):
            w = complex(1.0, 0.0)
            for k in range(half):
                lo = a[start + k]
                hi = a[start + k + half] * w
                a[start + k] = lo + hi
                a[start + k + half] = lo - hi
                w *= wstep
        size *= 2
    return a


@njit(cache=True)
def legendre_table(nmax, x):
    npts = x.shape[0]
    T = np.empty((nmax, npts))
    for i in range(npts):
        T[0, i] = 1.0
    if nmax > 1:
        for i in range(npts):
            T[1, i] = x[i]
    for k in range(2, nmax):
        for i in range(npts):
            T[k, i] = ((2.0 * k - 1.0) * x[i] * T[k - 1, i]
                       - (k - 1.0) * T[k - 2, i]) / k
    return T


@njit(cache=True)
def legendre_deriv_table(nmax, x):
    npts = x.shape[0]
    T = legendre_table(nmax, x)
    D = np.zeros((nmax, npts))
    if nmax > 1:
        for i in range(npts):
            D[1, i] = 1.0
    for k in range(2, nmax):
        for i in range(npts):
            D[k, i] = D[k - 2, i] + (2.0 * k - 1.0) * T[k - 1, i]
    return D


@njit(cache=True)
def jacobi_table(nmax, alpha, beta, x):
    npts = x.shape[0]
    T = np.empty((nmax, npts))
    for i in range(npts):
        T[0, i] = 1.0
    if nmax > 1:
        for i in range(npts):
            T[1, i] = (alpha + 1.0) + (alpha + beta + 2.0) * (x[i] - 1.0) / 2.0
    ab = alpha + beta
    for k in range(2, nmax):
        c1 = 2.0 * k * (k + ab) * (2.0 * k + ab - 2.0)
        c2 = (2.0 * k + ab - 1.0) * (alpha * alpha - beta * beta)
        c3 = (2.0 * k + ab - 1.0) * (2.0 * k + ab) * (2.0 * k + ab - 2.0)
        c4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + ab)
        for i in range(npts):
            T[k, i] = ((c2 + c3 * x[i]) * T[k - 1, i] - c4 * T[k - 2, i]) / c1
    return T


@njit(cache=True)
def gauss_legendre_nodes(n):
    x = np.empty(n)
    w = np.empty(n)
    for k in range(1, n + 1):
        xi = math.cos(math.pi * (4.0 * k - 1.0) / (4.0 * n + 2.0))
        dpn = 1.0
        for _ in range(100):
            p0 = 1.0
            p1 = xi
            for j in range(2, n + 1):
                p0, p1 = p1, ((2.0 * j - 1.0) * xi * p1 - (j - 1.0) * p0) / j
            dpn = n * (xi * p1 - p0) / (xi * xi - 1.0)
            dx = p1 / dpn
            xi -= dx
            if abs(dx) < 1e-15:
                break
        p0 = 1.0
        p1 = xi
        for j in range(2, n + 1):
            p0, p1 = p1, ((2.0 * j - 1.0) * xi * p1 - (j - 1.0) * p0) / j
        dpn = n * (xi * p1 - p0) / (xi * xi - 1.0)
        x[n - k] = xi
        w[n - k] = 2.0 / ((1.0 - xi * xi) * dpn * dpn)
    return x, w

"""Basis families, singular systems, and special-function primitives.

Three families drive the regularization pipelines:

* "trig" on [0, 1]: integration.  v_j(x) = sqrt(2) cos(c_j pi x),
  u_j(x) = sqrt(2) sin(c_j pi x), sigma_j = 1/(pi c_j), c_j = j - 1/2.
* "fractional" on [-1, 1]: Riemann-Liouville integration of order mu in
  (0, 1).  v_j = sqrt(2j-1) P_{j-1} (Legendre), u_j = c_j (1+x)^mu
  P_{j-1}^(-mu, mu) (Jacobi), with c_j a Gamma-ratio normalizer.
* "legendre" on [-1, 1]: orthonormalized Legendre smoothing basis,
  sqrt((2j-1)/2) P_{j-1}; its source side is termwise differentiation.

Indices j are 1-based throughout.

The closed-form candidate for the fractional singular values,
sqrt(Gamma(j-1/2-mu) / Gamma(j-1/2+mu)), is not consistent with the u_j,
v_j above: it hits a Gamma pole at j=1, mu=1/2, and elsewhere differs
from the operator by a j-dependent factor.  sigma_j is therefore defined
operationally, as the ratio of I^mu v_j against u_j measured by
quadrature; the closed form is used only when it agrees with that
measurement to 1e-6 relative.  frac_sigma_check exposes both routes.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from ._backend import active_backend, kernels

_DOMAINS = {
    "trig": (0.0, 1.0),
    "fractional": (-1.0, 1.0),
    "legendre": (-1.0, 1.0),
}


@dataclass(frozen=True)
class BasisFamily:
    """A named basis family; mu is present only for kind="fractional"."""

    kind: str
    mu: float | None = None

    def __post_init__(self):
        if self.kind not in _DOMAINS:
            raise ValueError(
                f"unknown basis kind {self.kind!r}; expected one of {sorted(_DOMAINS)}")
        if self.kind == "fractional":
            if self.mu is None or not 0.0 < self.mu < 1.0:
                raise ValueError("fractional family needs mu strictly inside (0, 1)")
        elif self.mu is not None:
            raise ValueError(f"mu is only meaningful for the fractional family, "
                             f"not {self.kind!r}")

    @property
    def domain(self) -> tuple[float, float]:
        return _DOMAINS[self.kind]

    @classmethod
    def trig(cls) -> "BasisFamily":
        return cls("trig")

    @classmethod
    def fractional(cls, mu: float) -> "BasisFamily":
        return cls("fractional", float(mu))

    @classmethod
    def legendre(cls) -> "BasisFamily":
        return cls("legendre")


@dataclass(frozen=True)
class SingularTriple:
    """One rung (sigma_j, v_j, u_j) of a singular system, 1-based index.

    v is the source-side function, u the data-side function; the family
    operator maps v to sigma * u.
    """

    index: int
    sigma: float
    v: Callable
    u: Callable


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0.0:
        raise ValueError("log_gamma is defined here only for x > 0")
    return math.lgamma(x)


def _eval_table(x, build_row):
    """Evaluate a recurrence row on scalar or any-shape array input."""
    arr = np.asarray(x, dtype=np.float64)
    flat = np.ascontiguousarray(arr.reshape(-1))
    row = build_row(flat)
    if arr.ndim == 0:
        return float(row[0])
    return row.reshape(arr.shape)


def legendre_eval(j: int, x):
    """Legendre P_j(x) by the three-term recurrence; scalar or array x."""
    if j < 0:
        raise ValueError("polynomial degree must be >= 0")
    return _eval_table(x, lambda flat: kernels().legendre_table(j + 1, flat)[j])


def legendre_deriv(j: int, x):
    """dP_j/dx via P'_j = P'_{j-2} + (2j-1) P_{j-1}; scalar or array x."""
    if j < 0:
        raise ValueError("polynomial degree must be >= 0")
    return _eval_table(x, lambda flat: kernels().legendre_deriv_table(j + 1, flat)[j])


def jacobi_eval(j: int, alpha: float, beta: float, x):
    """Jacobi P_j^(alpha, beta)(x), alpha, beta > -1; scalar or array x."""
    if j < 0:
        raise ValueError("polynomial degree must be >= 0")
    if alpha <= -1.0 or beta <= -1.0:
        raise ValueError("Jacobi parameters must satisfy alpha, beta > -1")
    return _eval_table(
        x, lambda flat: kernels().jacobi_table(j + 1, float(alpha), float(beta), flat)[j])


@lru_cache(maxsize=32)
def _gl_raw(n: int, backend: str):
    x, w = kernels().gauss_legendre_nodes(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0):
    """n-point Gauss-Legendre nodes and weights on [a, b]."""
    if n < 1:
        raise ValueError("need at least one quadrature node")
    if not b > a:
        raise ValueError("need b > a")
    x, w = _gl_raw(n, active_backend())
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return mid + half * x, half * w


def trig_singular_triple(j: int) -> SingularTriple:
    """Integration system on [0, 1]: sigma = 1/(pi c), c = j - 1/2."""
    if j < 1:
        raise ValueError("singular-system index starts at 1")
    c = j - 0.5
    sigma = 1.0 / (math.pi * c)
    # cos(c pi x) = (-1)^(j-1) sin(c pi (1-x)); the reflected form makes
    # v(1) an exact floating-point zero, which the triple promises
    sign = 1.0 if j % 2 == 1 else -1.0

    def v(x, _c=c, _sign=sign):
        return _sign * math.sqrt(2.0) * np.sin(_c * math.pi * (1.0 - np.asarray(x, dtype=np.float64)))

    def u(x, _c=c):
        return math.sqrt(2.0) * np.sin(_c * math.pi * np.asarray(x, dtype=np.float64))

    return SingularTriple(index=j, sigma=sigma, v=v, u=u)


def riemann_liouville_quad(f: Callable, mu: float, a: float, x, nodes: int = 200):
    """Riemann-Liouville integral (1/Gamma(mu)) int_a^x (x-y)^(mu-1) f(y) dy.

    The substitution y = x - (x-a) t^(1/mu) absorbs the endpoint
    singularity exactly, leaving a smooth integrand handled by
    Gauss-Legendre with `nodes` points.  x may be a scalar or a 1-d
    array of points, all strictly greater than a; f must accept array
    arguments (scalar-valued f is broadcast).
    """
    if not 0.0 < mu < 1.0:
        raise ValueError("fractional order mu must lie strictly inside (0, 1)")
    if nodes < 8:
        raise ValueError("quadrature needs at least 8 nodes")
    xa = np.asarray(x, dtype=np.float64)
    scalar = xa.ndim == 0
    pts = np.atleast_1d(xa)
    if pts.ndim != 1:
        raise ValueError("x must be a scalar or a 1-d array")
    if np.any(pts <= a):
        raise ValueError("evaluation points must lie strictly to the right of a")
    t, w = gauss_legendre(nodes, 0.0, 1.0)
    y = pts[:, None] - (pts - a)[:, None] * t[None, :] ** (1.0 / mu)
    fy = np.asarray(f(y), dtype=np.float64)
    if fy.shape != y.shape:
        fy = np.broadcast_to(fy, y.shape)
    out = (pts - a) ** mu / (mu * math.gamma(mu)) * (fy @ w)
    return float(out[0]) if scalar else out


def _frac_c(j: int, mu: float) -> float:
    # c_j = sqrt((j - 1/2) Gamma(j)^2 / (Gamma(j-mu) Gamma(j+mu)))
    return math.exp(0.5 * (math.log(j - 0.5) + 2.0 * math.lgamma(j)
                           - math.lgamma(j - mu) - math.lgamma(j + mu)))


def _frac_v(j: int):
    def v(x, _j=j):
        return math.sqrt(2.0 * _j - 1.0) * legendre_eval(_j - 1, x)
    return v


def _frac_u(j: int, mu: float):
    c = _frac_c(j, mu)

    def u(x, _j=j, _mu=mu, _c=c):
        xx = np.asarray(x, dtype=np.float64)
        return _c * (1.0 + xx) ** _mu * jacobi_eval(_j - 1, -_mu, _mu, xx)

    return u


@lru_cache(maxsize=512)
def _frac_sigma_oracle(j: int, mu: float) -> float:
    # least-squares ratio of I^mu v_j against u_j on a fixed point set;
    # the points are asymmetric so no u_j zero set can hide the ratio
    pts = np.linspace(-0.85, 0.9, 12)
    iv = riemann_liouville_quad(_frac_v(j), mu, -1.0, pts, nodes=200)
    uu = _frac_u(j, mu)(pts)
    return float((iv @ uu) / (uu @ uu))


@dataclass(frozen=True)
class SigmaCheck:
    """Both sigma routes for the fractional family, and which one is used."""

    printed: float      # Gamma-ratio closed form; nan when it is not finite
    oracle: float       # quadrature measurement of I^mu v_j / u_j
    agree: bool         # closed form finite and within 1e-6 relative of oracle
    used: float


def frac_sigma_check(j: int, mu: float) -> SigmaCheck:
    """Compare the closed-form fractional sigma_j against the quadrature oracle."""
    if j < 1:
        raise ValueError("singular-system index starts at 1")
    if not 0.0 < mu < 1.0:
        raise ValueError("fractional order mu must lie strictly inside (0, 1)")
    arg = j - 0.5 - mu
    if arg > 0.0:
        printed = math.exp(0.5 * (math.lgamma(arg) - math.lgamma(j - 0.5 + mu)))
    else:
        printed = float("nan")  # Gamma pole or sign flip: no finite value
    oracle = _frac_sigma_oracle(j, float(mu))
    agree = math.isfinite(printed) and abs(printed - oracle) <= 1e-6 * abs(oracle)
    return SigmaCheck(printed=printed, oracle=oracle, agree=agree,
                      used=printed if agree else oracle)


def frac_singular_triple(j: int, mu: float) -> SingularTriple:
    """Fractional-integration system on [-1, 1] for order mu in (0, 1)."""
    check = frac_sigma_check(j, mu)
    return SingularTriple(index=j, sigma=check.used, v=_frac_v(j), u=_frac_u(j, mu))

"""Benchmark problems, deterministic noise, and sampling grids.

Each problem ships the exact data function g, the exact source f (g's
derivative, or its half-order fractional derivative for the Abel
problem), the interval, and the basis family its pipeline uses.  All
shipped problems satisfy g(left endpoint) = 0, which the integral
operators require.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .basis import BasisFamily

DEFAULT_M = 250
DEFAULT_SIGMA = 0.05
DEFAULT_SEED = 20260815  # repo-wide fixed seed; golden values are tied to it


@dataclass(frozen=True)
class TestProblem:
    name: str
    domain: tuple
    g: Callable
    f: Callable
    family: BasisFamily


@dataclass(frozen=True)
class NoiseSpec:
    """Constant noise level plus the seed that makes draws reproducible."""

    sigma: float
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError("noise level sigma must be positive")


def craig_brown(alpha: float = 0.8, beta: float = 0.04, omega: float = 20.0,
                variant: str = "unit") -> TestProblem:
    """Rising exponential with a small fast ripple; the source is its derivative.

    variant "wide" keeps the native [0, 2] interval; "unit" rescales the
    independent variable onto [0, 1] (doubling the rates), which is the
    form the trig pipeline consumes.
    """
    if variant == "unit":
        domain = (0.0, 1.0)
        rate, freq = 2.0 * alpha, 2.0 * omega
        name = "craig-brown"
    elif variant == "wide":
        domain = (0.0, 2.0)
        rate, freq = alpha, omega
        name = "craig-brown-wide"
    else:
        raise ValueError(f"unknown variant {variant!r}; expected 'unit' or 'wide'")

    def g(x, _r=rate, _w=freq, _b=beta):
        x = np.asarray(x, dtype=np.float64)
        return 1.0 - np.exp(-_r * x) + _b * np.sin(_w * x)

    def f(x, _r=rate, _w=freq, _b=beta):
        x = np.asarray(x, dtype=np.float64)
        return _r * np.exp(-_r * x) + _b * _w * np.cos(_w * x)

    return TestProblem(name=name, domain=domain, g=g, f=f, family=BasisFamily.trig())


def cubic_problem(variant: str = "unit") -> TestProblem:
    """Cubic data function whose derivative is the source.

    variant "unit": g = (1 + (2x-1)^3)/2 on [0, 1], trig family.
    variant "legendre": the same shape on [-1, 1], g = (1 + x^3)/2, with
    the plain Legendre basis (source = termwise derivative).
    """
    if variant == "unit":
        def g(x):
            x = np.asarray(x, dtype=np.float64)
            return 0.5 * (1.0 + (2.0 * x - 1.0) ** 3)

        def f(x):
            x = np.asarray(x, dtype=np.float64)
            return 3.0 * (2.0 * x - 1.0) ** 2

        return TestProblem(name="cubic", domain=(0.0, 1.0), g=g, f=f,
                           family=BasisFamily.trig())
    if variant == "legendre":
        def g(x):
            x = np.asarray(x, dtype=np.float64)
            return 0.5 * (1.0 + x ** 3)

        def f(x):
            x = np.asarray(x, dtype=np.float64)
            return 1.5 * x ** 2

        return TestProblem(name="cubic-legendre", domain=(-1.0, 1.0), g=g, f=f,
                           family=BasisFamily.legendre())
    raise ValueError(f"unknown variant {variant!r}; expected 'unit' or 'legendre'")


def abel_problem() -> TestProblem:
    """Half-order fractional-integration problem with a known cubic source."""
    def g(x):
        z = 0.5 * (np.asarray(x, dtype=np.float64) + 1.0)
        return (2.0 / 105.0) / math.sqrt(math.pi) * np.sqrt(z) * (
            105.0 - 56.0 * z ** 2 + 48.0 * z ** 3)

    def f(x):
        z = 0.5 * (np.asarray(x, dtype=np.float64) + 1.0)
        return (z ** 3 - z ** 2 + 1.0) / math.sqrt(2.0)

    return TestProblem(name="abel", domain=(-1.0, 1.0), g=g, f=f,
                       family=BasisFamily.fractional(0.5))


def sample_grid(m: int, interval, include_left: bool = False) -> np.ndarray:
    """Equispaced grid with h = (b-a)/m ending exactly at b.

    The default drops the left endpoint (x_1 = a + h, ..., x_m = b); with
    include_left the grid gains x_0 = a and has m + 1 points.
    """
    a, b = float(interval[0]), float(interval[1])
    if m < 1:
        raise ValueError("grid size must be at least 1")
    if not b > a:
        raise ValueError("need b > a")
    pts = np.linspace(a, b, m + 1)
    return pts if include_left else pts[1:]


# splitmix64 constants
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(counters: np.ndarray) -> np.ndarray:
    z = counters
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def gaussian_noise(n: int, spec: NoiseSpec) -> np.ndarray:
    """Deterministic N(0, sigma^2) draws, a pure function of (seed, n).

    Counter-based: the i-th 64-bit word is splitmix64(seed + i * gamma),
    mapped to a uniform in the open interval (0, 1), and uniforms are
    paired through Box-Muller.  No stream state exists, so concurrent
    calls and repeated calls agree bit for bit.
    """
    if n < 1:
        raise ValueError("need at least one draw")
    pairs = (n + 1) // 2
    idx = np.arange(1, 2 * pairs + 1, dtype=np.uint64)
    bits = _splitmix64(np.uint64(spec.seed & 0xFFFFFFFFFFFFFFFF) + idx * _GAMMA)
    u = ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53
    radius = np.sqrt(-2.0 * np.log(u[0::2]))
    angle = 2.0 * math.pi * u[1::2]
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return spec.sigma * out[:n]


def make_dataset(problem: TestProblem, m: int = DEFAULT_M,
                 noise: NoiseSpec | None = None, s: float | None = None):
    """Sample a problem on its default grid, optionally perturbed by noise.

    With a NoiseSpec, g gains seeded draws and the s column records the
    noise level.  Without one the data are exact and a positive stated
    s must be supplied for the scaling step.
    """
    from .regularize import NoisyDataset

    xs = sample_grid(m, problem.domain)
    g = problem.g(xs)
    if noise is not None:
        g = g + gaussian_noise(m, noise)
        s_col = np.full(m, noise.sigma)
    else:
        if s is None or not s > 0.0:
            raise ValueError("noiseless datasets need an explicit positive s")
        s_col = np.full(m, float(s))
    return NoisyDataset(xs=xs, g=g, s=s_col)

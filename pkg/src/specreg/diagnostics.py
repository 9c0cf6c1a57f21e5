"""Residual acceptance tests.

Given a residual series in units of its standard deviations, three
checks decide whether what is left after regularization looks like
white Gaussian noise:

1. discrepancy: the sum of squared residuals must fall inside
   m +- kappa sqrt(2m) (kappa = 2);
2. normality: a chi-square goodness-of-fit test against N(mean, var)
   with equiprobable bins must not reject at the 5% level;
3. whiteness: the cumulative periodogram must hug the straight line
   y = 2 nu inside a Kolmogorov-Smirnov band, with at most 5% of the
   ordinates outside.

A path-length statistic for the cumulative curve is reported alongside:
a straight-line (white) cumulative has length sqrt(1.25) ~= 1.1180, and
any curve from (0, 0) to (1/2, 1) is at least that long.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import fft_radix2

KS_POINT_05 = 1.358  # asymptotic 5% Kolmogorov-Smirnov critical point


class DegenerateSampleError(ValueError):
    """Sample statistics cannot be formed (zero variance or zero power)."""


def scale(dataset) -> np.ndarray:
    """b = g / s: measured values in units of their standard deviations."""
    g = np.asarray(dataset.g, dtype=np.float64)
    s = np.asarray(dataset.s, dtype=np.float64)
    if g.shape != s.shape:
        raise ValueError("g and s must have the same shape")
    if np.any(s <= 0.0):
        raise ValueError("standard deviations must all be positive")
    return g / s


def ssr_bounds(m: int, kappa: float = 2.0):
    """Discrepancy interval (m - kappa sqrt(2m), m + kappa sqrt(2m)), lo >= 0."""
    if m < 1:
        raise ValueError("sample size must be at least 1")
    if kappa < 0.0:
        raise ValueError("kappa must be nonnegative")
    half = kappa * math.sqrt(2.0 * m)
    return max(0.0, m - half), m + half


def _normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


# rational approximation coefficients for the normal quantile (Acklam);
# a Newton step against erfc pushes the ~1e-9 fit down to rounding level
_PPF_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
          1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_PPF_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
          6.680131188771972e+01, -1.328068155288572e+01)
_PPF_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
          -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_PPF_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
          3.754408661907416e+00)


def _normal_ppf(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError("quantile argument must lie strictly inside (0, 1)")
    a, b, c, d = _PPF_A, _PPF_B, _PPF_C, _PPF_D
    p_low, p_high = 0.02425, 1.0 - 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    elif p <= p_high:
        q = p - 0.5
        r = q * q
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    err = _normal_cdf(x) - p
    x -= err * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x


def _gammainc_upper(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0."""
    if a <= 0.0 or x < 0.0:
        raise ValueError("need a > 0 and x >= 0")
    if x == 0.0:
        return 1.0
    log_front = -x + a * math.log(x) - math.lgamma(a)
    if x < a + 1.0:
        # lower series, then complement
        term = 1.0 / a
        total = term
        n = a
        while term > total * 1e-17:
            n += 1.0
            term *= x / n
            total += term
        return max(0.0, 1.0 - total * math.exp(log_front))
    # modified Lentz continued fraction for the upper tail
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return min(1.0, h * math.exp(log_front))


def chi2_gof_normal(resid, bins: int = 10):
    """Chi-square normality test with equiprobable bins.

    Returns (stat, dof, pvalue) with dof = bins_after_merge - 3 (mean
    and variance are estimated from the sample).  Bins with expected
    count under 5 are folded inward from the ends, never below 4 bins.
    """
    r = np.asarray(resid, dtype=np.float64)
    if r.ndim != 1:
        raise ValueError("residuals must be a 1-d array")
    m = r.size
    if m < 20:
        raise ValueError("the goodness-of-fit test needs at least 20 residuals")
    if bins < 4:
        raise ValueError("need at least 4 bins")
    mean = float(np.mean(r))
    sd = float(np.std(r, ddof=1))
    if sd == 0.0:
        raise DegenerateSampleError("residuals have zero sample variance")
    edges = [mean + sd * _normal_ppf(i / bins) for i in range(1, bins)]
    counts = list(np.histogram(r, bins=[-np.inf] + edges + [np.inf])[0])
    expected = [m / bins] * bins
    while len(counts) > 4 and min(expected) < 5.0:
        if expected[0] <= expected[-1]:
            counts[1] += counts[0]
            expected[1] += expected[0]
            del counts[0], expected[0]
        else:
            counts[-2] += counts[-1]
            expected[-2] += expected[-1]
            del counts[-1], expected[-1]
    stat = float(sum((o - e) ** 2 / e for o, e in zip(counts, expected)))
    dof = max(1, len(counts) - 3)
    return stat, dof, _gammainc_upper(dof / 2.0, stat / 2.0)


def periodogram(resid, pad_to: int | None = None):
    """Single-sided periodogram (frequencies j/M, powers |R_j|^2 / m).

    The series is zero-padded to the power-of-two length pad_to (default
    the next power of two >= m); the divisor stays the original length m.
    Returns ordinates j = 0..M/2 inclusive.
    """
    r = np.asarray(resid, dtype=np.float64)
    if r.ndim != 1 or r.size < 1:
        raise ValueError("residuals must be a nonempty 1-d array")
    m = r.size
    R = fft_radix2(r, pad_to)
    M = R.size
    q = M // 2
    freqs = np.arange(q + 1) / M
    power = np.abs(R[:q + 1]) ** 2 / m
    return freqs, power


def cumulative_periodogram(P) -> np.ndarray:
    """Normalized cumulative periodogram over ordinates j = 1..q.

    Input excludes the j = 0 (mean) ordinate.  Output has length q + 1,
    starts at exactly 0 and ends at exactly 1.
    """
    p = np.asarray(P, dtype=np.float64)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("need a nonempty 1-d vector of ordinates")
    if np.any(p < 0.0):
        raise ValueError("periodogram ordinates must be nonnegative")
    cs = np.cumsum(p)
    total = cs[-1]
    if not total > 0.0:
        raise DegenerateSampleError("cumulative periodogram needs positive total power")
    return np.concatenate(([0.0], cs / total))


def ks_band(q: int) -> float:
    """Half-width of the 5% Kolmogorov-Smirnov band for q ordinates."""
    if q < 2:
        raise ValueError("the band needs at least 2 ordinates")
    return KS_POINT_05 / math.sqrt(q)


def _path_length(freqs, cumulative) -> float:
    return float(np.sum(np.hypot(np.diff(cumulative), np.diff(freqs))))


@dataclass(frozen=True)
class DiagnosticsReport:
    """Everything the three residual checks measured, plus pass flags."""

    m: int
    ssr: float
    ssr_lo: float
    ssr_hi: float
    gof_stat: float
    gof_dof: int
    gof_pvalue: float
    frequencies: np.ndarray
    periodogram: np.ndarray
    cumulative: np.ndarray
    q: int
    band_delta: float
    outside_fraction: float
    path_length: float
    pass_d1: bool
    pass_d2: bool
    pass_d3: bool

    @property
    def all_pass(self) -> bool:
        return self.pass_d1 and self.pass_d2 and self.pass_d3

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "ssr": self.ssr,
            "ssr_lo": self.ssr_lo,
            "ssr_hi": self.ssr_hi,
            "gof_stat": self.gof_stat,
            "gof_dof": self.gof_dof,
            "gof_pvalue": self.gof_pvalue,
            "frequencies": self.frequencies.tolist(),
            "periodogram": self.periodogram.tolist(),
            "cumulative": self.cumulative.tolist(),
            "q": self.q,
            "band_delta": self.band_delta,
            "outside_fraction": self.outside_fraction,
            "path_length": self.path_length,
            "pass_d1": self.pass_d1,
            "pass_d2": self.pass_d2,
            "pass_d3": self.pass_d3,
        }


def whiteness_report(resid, pad_to: int | None = None, bins: int = 10) -> DiagnosticsReport:
    """Run all three residual checks and assemble a DiagnosticsReport."""
    r = np.asarray(resid, dtype=np.float64)
    if r.ndim != 1:
        raise ValueError("residuals must be a 1-d array")
    m = r.size
    if m < 8:
        raise ValueError("the spectral checks need at least 8 residuals")
    if not np.all(np.isfinite(r)):
        raise ValueError("residuals must be finite")
    ssr = float(r @ r)
    lo, hi = ssr_bounds(m, 2.0)
    stat, dof, pvalue = chi2_gof_normal(r, bins)
    freqs, power = periodogram(r, pad_to)
    q = freqs.size - 1
    cum = cumulative_periodogram(power[1:])
    delta = ks_band(q)
    outside = float(np.mean(np.abs(cum[1:] - 2.0 * freqs[1:]) > delta))
    return DiagnosticsReport(
        m=m,
        ssr=ssr,
        ssr_lo=lo,
        ssr_hi=hi,
        gof_stat=stat,
        gof_dof=dof,
        gof_pvalue=pvalue,
        frequencies=freqs,
        periodogram=power,
        cumulative=cum,
        q=q,
        band_delta=delta,
        outside_fraction=outside,
        path_length=_path_length(freqs, cum),
        pass_d1=lo < ssr < hi,
        pass_d2=pvalue >= 0.05,
        pass_d3=outside <= 0.05,
    )

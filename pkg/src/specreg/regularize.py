"""Signal/noise splitting pipelines.

The projection route: build the design matrix P_{kj} = u_j(x_k), factor
P = QR, rotate the scaled data a = Q^T b, keep components with
|a_k| > tau (minus any the frequency-gap rule or the caller demotes),
map the kept part back to data space, solve R xi = Q^T g_S for the
expansion coefficients, and divide by singular values (or differentiate,
for the plain Legendre basis) to estimate the source.

The discrete route does the same split in the SVD basis of the scaled
midpoint-rule operator S^{-1} L and applies the analytic L^{-1}, giving
a pointwise source estimate at the grid midpoints instead of a
closed-form expansion.

Component indices are 1-based everywhere a split or an expansion is
exposed.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .basis import BasisFamily, _frac_c, frac_sigma_check
from .diagnostics import DiagnosticsReport, scale, whiteness_report
from .linalg import QRFactors, back_substitute, cumulative_op, jacobi_svd, qr_mgs

DEFAULT_TAU = 3.0
DEFAULT_GAP_FACTOR = 10.0
FRACTIONAL_COLUMN_CAP = 90  # fractional designs turn rank-deficient past ~90 columns
CONDITION_WARN_RATIO = 1e12

ROLE_DATA = "data"
ROLE_SOURCE = "source"


@dataclass(frozen=True)
class NoisyDataset:
    """Samples (x_j, g_j) with per-point standard deviations s_j."""

    xs: np.ndarray
    g: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=np.float64)
        g = np.asarray(self.g, dtype=np.float64)
        s = np.asarray(self.s, dtype=np.float64)
        if not (xs.ndim == g.ndim == s.ndim == 1):
            raise ValueError("xs, g, s must be 1-d arrays")
        if not (xs.size == g.size == s.size >= 1):
            raise ValueError("xs, g, s must share a common positive length")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(g)) and np.all(np.isfinite(s))):
            raise ValueError("dataset entries must be finite")
        if np.any(np.diff(xs) <= 0.0):
            raise ValueError("sample grid must be strictly increasing")
        if np.any(s <= 0.0):
            raise ValueError("standard deviations must be positive")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "s", s)

    @property
    def m(self) -> int:
        return self.xs.size


@dataclass(frozen=True)
class ProjectionSplit:
    """Rotated data a = Q^T b partitioned into signal and noise indices.

    Index sets are 1-based and together cover 1..n; ssr is the energy of
    the noise part, sum of a_k^2 over noise_idx.
    """

    a: np.ndarray
    signal_idx: tuple
    noise_idx: tuple
    tau: float
    ssr: float

    @property
    def k_max(self) -> int:
        return max(self.signal_idx) if self.signal_idx else 0

    def signal_mask(self) -> np.ndarray:
        mask = np.zeros(self.a.size, dtype=bool)
        for k in self.signal_idx:
            mask[k - 1] = True
        return mask

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "signal": list(self.signal_idx),
            "noise": list(self.noise_idx),
            "ssr": self.ssr,
            "k_max": self.k_max,
        }


@dataclass(frozen=True)
class Expansion:
    """A finite expansion in one basis family, evaluable in closed form.

    coefficients maps 1-based component index to weight.  role "data"
    means the data-side basis (u_j); role "source" means the source-side
    basis: cosines for trig, scaled Legendre for fractional, and the
    termwise derivative for the plain Legendre family.
    """

    family: BasisFamily
    coefficients: dict
    role: str = ROLE_DATA

    def __post_init__(self):
        if self.role not in (ROLE_DATA, ROLE_SOURCE):
            raise ValueError(f"role must be {ROLE_DATA!r} or {ROLE_SOURCE!r}")
        clean = {}
        for idx, val in self.coefficients.items():
            idx = int(idx)
            val = float(val)
            if idx < 1:
                raise ValueError("component indices are 1-based")
            if not math.isfinite(val):
                raise ValueError("coefficients must be finite")
            clean[idx] = val
        object.__setattr__(self, "coefficients", clean)

    def evaluate(self, x):
        """Evaluate the expansion at scalar or array x."""
        xs = np.asarray(x, dtype=np.float64)
        scalar = xs.ndim == 0
        flat = np.ascontiguousarray(np.atleast_1d(xs).reshape(-1))
        out = np.zeros(flat.size)
        if self.coefficients:
            kind = self.family.kind
            jmax = max(self.coefficients)
            items = sorted(self.coefficients.items())
            if kind == "trig":
                for j, xi in items:
                    c = (j - 0.5) * math.pi
                    if self.role == ROLE_DATA:
                        out += xi * math.sqrt(2.0) * np.sin(c * flat)
                    else:
                        out += xi * math.sqrt(2.0) * np.cos(c * flat)
            elif kind == "legendre":
                if self.role == ROLE_DATA:
                    T = kernels().legendre_table(jmax, flat)
                else:
                    T = kernels().legendre_deriv_table(jmax, flat)
                for j, xi in items:
                    out += xi * math.sqrt((2.0 * j - 1.0) / 2.0) * T[j - 1]
            else:
                if self.role == ROLE_DATA:
                    J = kernels().jacobi_table(jmax, -self.family.mu, self.family.mu, flat)
                    env = (1.0 + flat) ** self.family.mu
                    for j, xi in items:
                        out += xi * _frac_c(j, self.family.mu) * env * J[j - 1]
                else:
                    T = kernels().legendre_table(jmax, flat)
                    for j, xi in items:
                        out += xi * math.sqrt(2.0 * j - 1.0) * T[j - 1]
        if scalar:
            return float(out[0])
        return out.reshape(xs.shape)

    __call__ = evaluate

    def to_dict(self) -> dict:
        doc = {
            "family": self.family.kind,
            "role": self.role,
            "coefficients": [[j, v] for j, v in sorted(self.coefficients.items())],
        }
        if self.family.mu is not None:
            doc["mu"] = self.family.mu
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "Expansion":
        family = BasisFamily(doc["family"], doc.get("mu"))
        coeffs = {int(j): float(v) for j, v in doc["coefficients"]}
        return cls(family=family, coefficients=coeffs, role=doc["role"])


def build_design(family: BasisFamily, xs, n: int) -> np.ndarray:
    """Design matrix P_{kj} = u_j(x_k), m rows by n columns."""
    xs = np.ascontiguousarray(np.asarray(xs, dtype=np.float64))
    if xs.ndim != 1:
        raise ValueError("xs must be a 1-d grid")
    m = xs.size
    if not 1 <= n <= m:
        raise ValueError(f"column count must satisfy 1 <= n <= m = {m}")
    lo, hi = family.domain
    if np.any(xs < lo) or np.any(xs > hi):
        raise ValueError(f"grid leaves the family domain [{lo}, {hi}]")
    if family.kind == "trig":
        c = np.arange(1, n + 1) - 0.5
        return math.sqrt(2.0) * np.sin(math.pi * np.outer(xs, c))
    if family.kind == "legendre":
        T = kernels().legendre_table(n, xs)
        scales = np.sqrt((2.0 * np.arange(1, n + 1) - 1.0) / 2.0)
        return T.T * scales[None, :]
    J = kernels().jacobi_table(n, -family.mu, family.mu, xs)
    cs = np.array([_frac_c(j, family.mu) for j in range(1, n + 1)])
    return ((1.0 + xs) ** family.mu)[:, None] * (J.T * cs[None, :])


def project_data(qr: QRFactors, b) -> np.ndarray:
    """Rotate scaled data onto the orthonormal columns: a = Q^T b."""
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 1 or b.size != qr.Q.shape[0]:
        raise ValueError("data length must match the factorization rows")
    return qr.Q.T @ b


def split_signal(a, tau: float = DEFAULT_TAU, gap_factor: float = DEFAULT_GAP_FACTOR,
                 demote=()) -> ProjectionSplit:
    """Partition rotated components into signal (|a_k| > tau) and noise.

    After thresholding, the frequency-gap rule demotes stragglers: walking
    the candidates in increasing index order, a candidate whose gap to the
    previous retained one exceeds gap_factor times the median consecutive
    candidate gap moves to noise.  Indices listed in demote are moved to
    noise unconditionally.  gap_factor <= 0 disables the gap rule.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 1 or a.size < 1:
        raise ValueError("need a nonempty 1-d component vector")
    if not tau > 0.0:
        raise ValueError("threshold tau must be positive")
    n = a.size
    candidates = [k for k in range(1, n + 1) if abs(a[k - 1]) > tau]
    if len(candidates) >= 2 and gap_factor > 0.0:
        med = float(np.median(np.diff(candidates)))
        retained = []
        for k in candidates:
            if retained and (k - retained[-1]) > gap_factor * med:
                continue
            retained.append(k)
    else:
        retained = list(candidates)
    drop = {int(k) for k in demote}
    signal = tuple(k for k in retained if k not in drop)
    signal_set = set(signal)
    noise = tuple(k for k in range(1, n + 1) if k not in signal_set)
    ssr = float(sum(a[k - 1] ** 2 for k in noise))
    return ProjectionSplit(a=a, signal_idx=signal, noise_idx=noise, tau=tau, ssr=ssr)


def reconstruct_split(qr: QRFactors, split: ProjectionSplit, s):
    """Map the split back to data space: g_S = S Q a_S, g_N = S Q a_N."""
    s = np.asarray(s, dtype=np.float64)
    if split.a.size != qr.Q.shape[1]:
        raise ValueError("split length must match the factorization columns")
    if s.ndim != 1 or s.size != qr.Q.shape[0]:
        raise ValueError("standard-deviation length must match the rows")
    mask = split.signal_mask()
    a_S = np.where(mask, split.a, 0.0)
    a_N = split.a - a_S
    return s * (qr.Q @ a_S), s * (qr.Q @ a_N)


def solve_coefficients(qr: QRFactors, g_S, family: BasisFamily,
                       signal_idx=None) -> Expansion:
    """Expansion coefficients xi = R^{-1} Q^T g_S as a data-side Expansion.

    When signal_idx is given the sparse map keeps only those components;
    the remaining entries of the triangular solve are rounding residue of
    the reconstruction and are dropped.
    """
    g_S = np.asarray(g_S, dtype=np.float64)
    xi = back_substitute(qr.R, project_data(qr, g_S))
    if signal_idx is None:
        keep = range(1, xi.size + 1)
    else:
        keep = [int(k) for k in signal_idx]
    return Expansion(family=family,
                     coefficients={k: float(xi[k - 1]) for k in keep},
                     role=ROLE_DATA)


def _sigma_for(family: BasisFamily, j: int) -> float:
    if family.kind == "trig":
        return 1.0 / (math.pi * (j - 0.5))
    return frac_sigma_check(j, family.mu).used


def estimate_source(data_expansion: Expansion) -> Expansion:
    """Source-side expansion: xi_j / sigma_j weights, or the termwise
    derivative for the plain Legendre family."""
    if data_expansion.role != ROLE_DATA:
        raise ValueError("source estimation starts from a data-side expansion")
    family = data_expansion.family
    if family.kind == "legendre":
        coeffs = dict(data_expansion.coefficients)
    else:
        coeffs = {j: xi / _sigma_for(family, j)
                  for j, xi in data_expansion.coefficients.items()}
    return Expansion(family=family, coefficients=coeffs, role=ROLE_SOURCE)


@dataclass(frozen=True)
class PipelineResult:
    """Everything the projection pipeline produced."""

    data_expansion: Expansion    # signal-only fit G
    source_expansion: Expansion  # estimated derivative / fractional derivative
    split: ProjectionSplit
    report: DiagnosticsReport
    g_S: np.ndarray
    g_N: np.ndarray
    full_expansion: Expansion    # unregularized fit of the raw data, all n terms


@dataclass(frozen=True)
class DiscreteResult:
    """Everything the discrete SVD pipeline produced."""

    f_hat: np.ndarray            # source estimate at the grid midpoints
    midpoints: np.ndarray
    split: ProjectionSplit
    report: DiagnosticsReport
    g_S: np.ndarray
    g_N: np.ndarray


def run_pipeline(dataset: NoisyDataset, family: BasisFamily, n: int | None = None,
                 tau: float = DEFAULT_TAU, gap_factor: float = DEFAULT_GAP_FACTOR,
                 demote=(), pad_to: int | None = None, bins: int = 10,
                 column_cap: int | None = None) -> PipelineResult:
    """Projection pipeline: design, QR, rotate, split, reconstruct, solve.

    n defaults to min(m, cap) where cap is column_cap if given, 90 for
    the fractional family, and m otherwise.
    """
    m = dataset.m
    if column_cap is None:
        cap = FRACTIONAL_COLUMN_CAP if family.kind == "fractional" else m
    else:
        cap = int(column_cap)
    limit = min(m, cap)
    if n is None:
        n = limit
    if not 1 <= n <= limit:
        raise ValueError(f"column count must satisfy 1 <= n <= min(m, cap) = {limit}")
    P = build_design(family, dataset.xs, n)
    qr = qr_mgs(P)
    cond = abs(qr.R[0, 0] / qr.R[n - 1, n - 1])
    if cond > CONDITION_WARN_RATIO:
        warnings.warn(
            f"design matrix diagonal spans a factor {cond:.2e}; coefficients past "
            f"the first columns are unreliable, lower n or the column cap",
            RuntimeWarning, stacklevel=2)
    b = scale(dataset)
    a = project_data(qr, b)
    split = split_signal(a, tau=tau, gap_factor=gap_factor, demote=demote)
    g_S, g_N = reconstruct_split(qr, split, dataset.s)
    data_expansion = solve_coefficients(qr, g_S, family, split.signal_idx)
    source_expansion = estimate_source(data_expansion)
    full_expansion = solve_coefficients(qr, dataset.g, family)
    resid = (dataset.g - g_S) / dataset.s
    report = whiteness_report(resid, pad_to=pad_to, bins=bins)
    return PipelineResult(
        data_expansion=data_expansion,
        source_expansion=source_expansion,
        split=split,
        report=report,
        g_S=g_S,
        g_N=g_N,
        full_expansion=full_expansion,
    )


def discrete_pipeline(dataset: NoisyDataset, tau: float = DEFAULT_TAU,
                      gap_factor: float = DEFAULT_GAP_FACTOR, demote=(),
                      pad_to: int | None = None, bins: int = 10) -> DiscreteResult:
    """Discrete SVD pipeline on the scaled midpoint-rule operator.

    Requires an equispaced grid; the source estimate lands on the grid
    midpoints x_j - h/2 through the analytic inverse of the cumulative
    operator.
    """
    m = dataset.m
    if m < 2:
        raise ValueError("the discrete method needs at least 2 samples")
    diffs = np.diff(dataset.xs)
    h = float(np.mean(diffs))
    if np.max(np.abs(diffs - h)) > 1e-8 * abs(h):
        raise ValueError("the discrete method needs an equispaced grid")
    L, L_inv = cumulative_op(m, h)
    M = L / dataset.s[:, None]
    svd = jacobi_svd(M)
    b = scale(dataset)
    a = svd.U.T @ b
    split = split_signal(a, tau=tau, gap_factor=gap_factor, demote=demote)
    mask = split.signal_mask()
    a_S = np.where(mask, a, 0.0)
    a_N = a - a_S
    g_S = dataset.s * (svd.U @ a_S)
    g_N = dataset.s * (svd.U @ a_N)
    f_hat = L_inv @ g_S
    resid = (dataset.g - g_S) / dataset.s
    report = whiteness_report(resid, pad_to=pad_to, bins=bins)
    return DiscreteResult(
        f_hat=f_hat,
        midpoints=dataset.xs - 0.5 * h,
        split=split,
        report=report,
        g_S=g_S,
        g_N=g_N,
    )

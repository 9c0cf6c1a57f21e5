"""Truncated spectral-projection regularization of noisy samples.

Given finitely many noisy samples of a smooth function, the pipelines
here rotate the scaled data into an orthonormal component basis, keep
the components that stand above the noise floor, verify that what is
discarded passes white-noise diagnostics, and return closed-form
expansions of the data function together with its derivative or
fractional derivative.
"""

from ._backend import active_backend, use
from .basis import (BasisFamily, SigmaCheck, SingularTriple, frac_sigma_check,
                    frac_singular_triple, gauss_legendre, jacobi_eval,
                    legendre_deriv, legendre_eval, log_gamma,
                    riemann_liouville_quad, trig_singular_triple)
from .diagnostics import (DegenerateSampleError, DiagnosticsReport,
                          chi2_gof_normal, cumulative_periodogram, ks_band,
                          periodogram, scale, ssr_bounds, whiteness_report)
from .linalg import (IterationLimitError, QRFactors, RankDeficiencyError,
                     SingularMatrixError, SVDFactors, back_substitute,
                     cumulative_op, fft_radix2, jacobi_svd, qr_mgs)
from .problems import (DEFAULT_M, DEFAULT_SEED, DEFAULT_SIGMA, NoiseSpec,
                       TestProblem, abel_problem, craig_brown, cubic_problem,
                       gaussian_noise, make_dataset, sample_grid)
from .regularize import (DEFAULT_GAP_FACTOR, DEFAULT_TAU, DiscreteResult,
                         Expansion, NoisyDataset, PipelineResult,
                         ProjectionSplit, build_design, discrete_pipeline,
                         estimate_source, project_data, reconstruct_split,
                         run_pipeline, solve_coefficients, split_signal)

__version__ = "0.1.0"

__all__ = [
    "BasisFamily", "SingularTriple", "SigmaCheck",
    "log_gamma", "legendre_eval", "legendre_deriv", "jacobi_eval",
    "gauss_legendre", "trig_singular_triple", "frac_singular_triple",
    "frac_sigma_check", "riemann_liouville_quad",
    "QRFactors", "SVDFactors", "qr_mgs", "back_substitute", "jacobi_svd",
    "cumulative_op", "fft_radix2",
    "RankDeficiencyError", "SingularMatrixError", "IterationLimitError",
    "DegenerateSampleError",
    "DiagnosticsReport", "scale", "ssr_bounds", "chi2_gof_normal",
    "periodogram", "cumulative_periodogram", "ks_band", "whiteness_report",
    "NoisyDataset", "ProjectionSplit", "Expansion", "PipelineResult",
    "DiscreteResult", "build_design", "project_data", "split_signal",
    "reconstruct_split", "solve_coefficients", "estimate_source",
    "run_pipeline", "discrete_pipeline", "DEFAULT_TAU", "DEFAULT_GAP_FACTOR",
    "TestProblem", "NoiseSpec", "craig_brown", "cubic_problem", "abel_problem",
    "sample_grid", "gaussian_noise", "make_dataset",
    "DEFAULT_M", "DEFAULT_SIGMA", "DEFAULT_SEED",
    "active_backend", "use",
]

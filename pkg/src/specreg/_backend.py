"""Kernel backend selection.

The numerically hot routines (QR, one-sided Jacobi SVD, FFT, polynomial
tables, quadrature nodes) exist twice: compiled with numba in
_kernels_numba and as plain numpy in _kernels_numpy.  Both expose the
same names and sentinel conventions, so everything above this module is
backend-agnostic.

Selection order: the SPECREG_BACKEND environment variable ("numba" or
"numpy") wins, otherwise numba is used when importable.  use() switches
at runtime, which the benchmark and the backend tests rely on.
"""

import os
import warnings

ENV_VAR = "SPECREG_BACKEND"
BACKENDS = ("numba", "numpy")

try:
    import numba  # noqa: F401
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def _resolve(requested: str) -> str:
    requested = requested.strip().lower()
    if requested and requested not in BACKENDS:
        warnings.warn(
            f"{ENV_VAR}={requested!r} is not one of {BACKENDS}; ignoring",
            stacklevel=3,
        )
        requested = ""
    if requested == "numpy":
        return "numpy"
    if requested == "numba" and not HAS_NUMBA:
        warnings.warn("numba backend requested but numba is not importable; "
                      "falling back to numpy", stacklevel=3)
        return "numpy"
    if not requested:
        return "numba" if HAS_NUMBA else "numpy"
    return "numba"


_active = _resolve(os.environ.get(ENV_VAR, ""))


def active_backend() -> str:
    """Name of the backend serving kernel calls right now."""
    return _active


def use(name: str) -> str:
    """Switch backends at runtime; returns the backend actually selected."""
    global _active
    _active = _resolve(name)
    return _active


def kernels():
    """The module holding the active kernel implementations."""
    if _active == "numba":
        from . import _kernels_numba as mod
    else:
        from . import _kernels_numpy as mod
    return mod

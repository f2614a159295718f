"""Numba dispatch switch.

Set ``FERMITANGLE_DISABLE_JIT=1`` to force the pure-numpy code paths. The
same fallback is used automatically when numba cannot be imported.
"""
import os

_DISABLED = os.environ.get("FERMITANGLE_DISABLE_JIT", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    from numba import njit, prange
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f

    prange = range

USE_NUMBA = HAS_NUMBA and not _DISABLED


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"

if HAS_NUMBA:
    import warnings

    from numba.core.errors import NumbaWarning

    # the bundled TBB is too old on some systems; numba falls back to omp/workqueue
    warnings.filterwarnings("ignore", message="The TBB threading layer", category=NumbaWarning)

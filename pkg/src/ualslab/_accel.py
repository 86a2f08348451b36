"""Optional numba acceleration.

Set ``UALSLAB_DISABLE_NUMBA=1`` to force the pure numpy kernels.  Results are
identical either way; only speed differs.
"""
import os

_OFF = os.environ.get("UALSLAB_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _OFF:
        raise ImportError("disabled by UALSLAB_DISABLE_NUMBA")
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    _njit = None
    HAVE_NUMBA = False

numba_kwargs = {"cache": True, "nogil": True}


def njit(fn):
    """Compile fn with numba when available, else return it untouched."""
    if HAVE_NUMBA:
        return _njit(**numba_kwargs)(fn)
    return fn


def backend():
    return "numba" if HAVE_NUMBA else "numpy"

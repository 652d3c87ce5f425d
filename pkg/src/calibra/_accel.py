"""Selection between numba-compiled kernels and the numpy fallbacks.

Set ``CALIBRA_NUMBA=0`` in the environment before import to force the
fallback path.  If numba cannot be imported the fallback is used silently.
"""
import os

_flag = os.environ.get("CALIBRA_NUMBA", "1").strip().lower()
_requested = _flag not in ("0", "false", "no", "off")

try:
    if not _requested:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    _njit = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _requested


def njit(func):
    """``numba.njit(cache=True)`` when numba is available, identity otherwise."""
    if _njit is None:
        return func
    return _njit(cache=True)(func)


def pick(numba_impl, numpy_impl):
    return numba_impl if USE_NUMBA else numpy_impl

"""Kernel backend selection.

``FOCKLAB_BACKEND=numpy`` forces the pure-numpy fallbacks; anything else
(default ``numba``) uses the jitted kernels when numba imports cleanly.
"""
import os

_requested = os.environ.get("FOCKLAB_BACKEND", "numba").strip().lower()

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    _numba = None

USE_NUMBA = _requested != "numpy" and _numba is not None
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if _numba is None:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return _numba.njit(*args, **kwargs)

"""Optional numba acceleration.

Set ``SLUCAS_DISABLE_NUMBA=1`` before import to run every kernel as plain
Python/numpy.  Results are identical either way; only speed differs.
"""

import os

try:
    from numba import njit
    NUMBA_INSTALLED = True
except ImportError:  # pragma: no cover
    NUMBA_INSTALLED = False

USE_NUMBA = NUMBA_INSTALLED and os.environ.get("SLUCAS_DISABLE_NUMBA", "") not in ("1", "true", "yes")


def optional_njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity otherwise.

    The undecorated function stays reachable as ``.py_func`` in both modes so
    benchmarks can time the two paths side by side.
    """
    def decorator(func):
        if USE_NUMBA:
            return njit(*args, **kwargs)(func)
        func.py_func = func
        return func
    return decorator

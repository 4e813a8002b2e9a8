"""Numba switch.

Set ``OKALAB_DISABLE_NUMBA=1`` to force the pure-numpy kernels.  The thread
count for parallel kernels follows ``OKALAB_NUM_THREADS`` when set.
"""

import os

_FLAG = os.environ.get("OKALAB_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG in ("1", "true", "yes", "on")

try:
    if DISABLED:
        raise ImportError
    import numba

    HAS_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # old TBB builds only produce a warning; try them last
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:
    numba = None
    HAS_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when numba is active, identity otherwise."""
    if HAS_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


if HAS_NUMBA:
    prange = numba.prange
else:
    prange = range


def configure_threads():
    n = os.environ.get("OKALAB_NUM_THREADS")
    if HAS_NUMBA and n:
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def backend_name():
    return "numba" if HAS_NUMBA else "numpy"

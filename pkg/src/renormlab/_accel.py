"""Numba switch.

Set ``RENORMLAB_NO_NUMBA=1`` to force the pure-numpy kernels (useful for
debugging and for the benchmark).  ``RENORMLAB_THREADS`` caps numba's
worker pool.
"""
import os

_off = os.environ.get("RENORMLAB_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

# the default layer probe warns about old TBB builds; OpenMP is enough here
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

try:
    if _off:
        raise ImportError
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False
    numba = None
    prange = range

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn


def worker_count():
    raw = os.environ.get("RENORMLAB_THREADS")
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        return None
    return max(1, n)


if HAVE_NUMBA and worker_count() is not None:
    numba.set_num_threads(min(worker_count(), numba.config.NUMBA_NUM_THREADS))

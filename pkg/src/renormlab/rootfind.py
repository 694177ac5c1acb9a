"""Bisection in scalar and vectorized form.

Both run until the bracket cannot shrink any further in float64, so the
returned points are as accurate as the function evaluation allows.
"""
import numpy as np


def bisect(g, lo, hi, tol=0.0, max_iter=200):
    """Root of g in [lo, hi] given a sign change; returns (lo, hi) bracket."""
    glo = g(lo)
    if glo == 0:
        return lo, lo
    ghi = g(hi)
    if ghi == 0:
        return hi, hi
    if (glo > 0) == (ghi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= tol:
            break
        gm = g(mid)
        if gm == 0:
            return mid, mid
        if (gm > 0) == (glo > 0):
            lo = mid
        else:
            hi = mid
    return lo, hi


def bisect_many(g, lo, hi, max_iter=64):
    """Vectorized bisection; g maps an array to an array.

    Each bracket [lo[i], hi[i]] must carry a sign change.  Returns midpoints.
    """
    lo = np.array(lo, dtype=np.float64)
    hi = np.array(hi, dtype=np.float64)
    slo = np.sign(g(lo))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        sm = np.sign(g(mid))
        same = sm == slo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
        exact = sm == 0
        lo[exact] = hi[exact] = mid[exact]
    return 0.5 * (lo + hi)

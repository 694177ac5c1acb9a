"""Outward-rounded interval arithmetic on numpy arrays.

Every operation widens its result by one ulp on each side, so the true
real-number result always lies inside the returned bounds.  Intervals are
carried as pairs of float64 arrays ``(lo, hi)``.
"""
import numpy as np

from .maps import PiecewiseLinear, Quadratic, Rescaled

_NEG = -np.inf
_POS = np.inf


def down(x):
    return np.nextafter(x, _NEG)


def up(x):
    return np.nextafter(x, _POS)


def point(x):
    x = np.asarray(x, dtype=np.float64)
    return x.copy(), x.copy()


def add(a, b):
    return down(a[0] + b[0]), up(a[1] + b[1])


def sub(a, b):
    return down(a[0] - b[1]), up(a[1] - b[0])


def mul(a, b):
    with np.errstate(invalid="ignore"):
        p = np.stack([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
    return down(p.min(axis=0)), up(p.max(axis=0))


def div_pos(a, b):
    """a / b for b strictly positive."""
    if np.any(b[0] <= 0):
        raise ZeroDivisionError("interval divisor must be positive")
    p = np.stack([a[0] / b[0], a[0] / b[1], a[1] / b[0], a[1] / b[1]])
    return down(p.min(axis=0)), up(p.max(axis=0))


def hull(*ivs):
    lo = np.minimum.reduce([iv[0] for iv in ivs])
    hi = np.maximum.reduce([iv[1] for iv in ivs])
    return lo, hi


def _const(c, like):
    c = np.broadcast_to(np.asarray(c, dtype=np.float64), np.shape(like))
    return c, c


def _quad_point(a, x):
    one = _const(1.0, x[0])
    return mul(_const(a, x[0]), mul(x, sub(one, x)))


def _pl_point(f, x):
    # x is a point interval; locate its segment
    k = np.clip(np.searchsorted(f.xs, x[0], side="right") - 1, 0, len(f.slopes) - 1)
    x0, x1 = f.xs[k], f.xs[k + 1]
    y0, y1 = f.ys[k], f.ys[k + 1]
    frac = div_pos(sub(x, (x0, x0)), sub((x1, x1), (x0, x0)))
    return add((y0, y0), mul(sub((y1, y1), (y0, y0)), frac))


def enclose(f, lo, hi):
    """Enclosure of f([lo, hi]) for arrays of intervals inside [0, 1]."""
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    if isinstance(f, Quadratic):
        # f increases on [0, 1/2] and decreases on [1/2, 1]
        el = _quad_point(f.a, point(lo))
        eh = _quad_point(f.a, point(hi))
        out_lo, out_hi = hull(el, eh)
        inside = (lo <= 0.5) & (hi >= 0.5)
        if inside.any():
            peak = _quad_point(f.a, point(np.full(lo.shape, 0.5)))
            out_hi = np.where(inside, np.maximum(out_hi, peak[1]), out_hi)
        return out_lo, out_hi
    if isinstance(f, PiecewiseLinear):
        el = _pl_point(f, point(lo))
        eh = _pl_point(f, point(hi))
        out_lo, out_hi = hull(el, eh)
        for xk, yk in zip(f.xs[1:-1], f.ys[1:-1]):
            inside = (lo <= xk) & (hi >= xk)
            out_lo = np.where(inside, np.minimum(out_lo, yk), out_lo)
            out_hi = np.where(inside, np.maximum(out_hi, yk), out_hi)
        return out_lo, out_hi
    if isinstance(f, Rescaled):
        root, u, v, n, o = f.flat
        width = sub((v, v), (u, u))
        t = (lo, hi)
        if o == 1:
            x = add(_const(u, lo), mul(t, width))
        else:
            x = sub(_const(v, lo), mul(t, width))
        x = (np.maximum(x[0], 0.0), np.minimum(x[1], 1.0))
        for _ in range(n):
            x = enclose(root, *x)
            x = (np.maximum(x[0], 0.0), np.minimum(x[1], 1.0))
        if o == 1:
            return div_pos(sub(x, _const(u, x[0])), width)
        return div_pos(sub(_const(v, x[0]), x), width)
    raise TypeError(f"unsupported map {f!r}")


def enclose_iterate(f, lo, hi, n):
    """Enclosure of f^n([lo, hi]) by composing one-step enclosures.

    For quadratic and piecewise-linear maps the intermediate bounds are
    intersected with [0, 1], which those maps send into itself.  Rescaled
    maps only clip inside their base map, where the same fact holds.
    """
    x = (np.asarray(lo, dtype=np.float64), np.asarray(hi, dtype=np.float64))
    clip = not isinstance(f, Rescaled)
    for _ in range(n):
        x = enclose(f, *x)
        if clip:
            x = (np.maximum(x[0], 0.0), np.minimum(x[1], 1.0))
    return x


def enclose_range(f, lo, hi, n=1, pieces=1024):
    """Enclosure of f^n over [lo, hi], subdividing into ``pieces`` cells."""
    edges = np.linspace(lo, hi, pieces + 1)
    edges[0], edges[-1] = lo, hi
    r = enclose_iterate(f, edges[:-1], edges[1:], n)
    return float(r[0].min()), float(r[1].max())

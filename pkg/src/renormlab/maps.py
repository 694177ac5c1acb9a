"""One-dimensional maps of [0, 1] and raw orbit iteration.

Three kinds of map are supported: the quadratic family ``a x (1 - x)``,
continuous piecewise-linear maps given by breakpoints, and affine
rescalings of an iterate restricted to a subinterval (the shape of a
renormalized map).  All maps are immutable and evaluate on scalars or
numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import mpmath
import numpy as np

from . import kernels
from .errors import InputError

DOMAIN_TOL = 1e-12
RESCALE_GRID = 4096
# quadratic iterates at least this deep are evaluated in double-double
DD_MIN_ITERATE = 8


def _check_domain(x):
    x = np.asarray(x, dtype=np.float64)
    if x.size and (np.nanmin(x) < -DOMAIN_TOL or np.nanmax(x) > 1.0 + DOMAIN_TOL or np.isnan(x).any()):
        raise InputError(f"point outside [0, 1]: {x.min() if x.size > 1 else float(x)}")
    return np.clip(x, 0.0, 1.0)


@dataclass(frozen=True)
class Quadratic:
    a: float

    def __post_init__(self):
        if not 0.0 <= self.a <= 4.0:
            raise InputError(f"quadratic parameter must lie in [0, 4], got {self.a}")
        object.__setattr__(self, "a", float(self.a))

    def _eval(self, x):
        return self.a * x * (1.0 - x)

    def _deriv(self, x):
        return self.a * (1.0 - 2.0 * x)

    def _eval_mp(self, x):
        return mpmath.mpf(self.a) * x * (1 - x)

    def _iterate(self, x, n):
        return kernels.quad_iterate(self.a, np.atleast_1d(x), n)


@dataclass(frozen=True)
class PiecewiseLinear:
    breakpoints: tuple

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.breakpoints)
        if len(pts) < 2:
            raise InputError("need at least two breakpoints")
        xs = [p[0] for p in pts]
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise InputError("breakpoints must start at x=0 and end at x=1")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise InputError("breakpoint x values must be strictly increasing")
        if any(not 0.0 <= p[1] <= 1.0 for p in pts):
            raise InputError("breakpoint y values must lie in [0, 1]")
        object.__setattr__(self, "breakpoints", pts)

    @cached_property
    def xs(self):
        return np.array([p[0] for p in self.breakpoints])

    @cached_property
    def ys(self):
        return np.array([p[1] for p in self.breakpoints])

    @cached_property
    def slopes(self):
        return np.diff(self.ys) / np.diff(self.xs)

    def _eval(self, x):
        return np.interp(x, self.xs, self.ys)

    def _deriv(self, x):
        i = np.clip(np.searchsorted(self.xs, x, side="right") - 1, 0, len(self.slopes) - 1)
        return self.slopes[i]

    def _eval_mp(self, x):
        pts = self.breakpoints
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x <= x1:
                return mpmath.mpf(y0) + (mpmath.mpf(y1) - y0) * (x - x0) / (mpmath.mpf(x1) - x0)
        return mpmath.mpf(pts[-1][1])

    def _iterate(self, x, n):
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        for _ in range(n):
            x = self._eval(x)
        return x


def tent(peak: float = 1.0) -> PiecewiseLinear:
    """Symmetric tent map with maximum ``peak`` at 1/2."""
    return PiecewiseLinear(((0.0, 0.0), (0.5, peak), (1.0, 0.0)))


@dataclass(frozen=True)
class Rescaled:
    """``H o base^iterate o H^-1`` where H maps [u, v] affinely onto [0, 1].

    ``orientation`` is +1 (H preserves order) or -1 (H reverses it).
    Construction checks on a grid that ``base^iterate`` maps [u, v] into
    itself.
    """

    base: "MapSpec"
    interval: tuple
    iterate: int = 2
    orientation: int = -1
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        u, v = (float(t) for t in self.interval)
        object.__setattr__(self, "interval", (u, v))
        if not 0.0 <= u < v <= 1.0:
            raise InputError(f"rescaling interval must satisfy 0 <= u < v <= 1, got {self.interval}")
        if self.iterate < 1:
            raise InputError("iterate must be a positive integer")
        if self.orientation not in (1, -1):
            raise InputError("orientation must be +1 or -1")
        if self.check:
            # checked in rescaled coordinates, where [u, v] becomes [0, 1]
            img = self._raw_eval(np.linspace(0.0, 1.0, RESCALE_GRID + 1))
            slack = 1e-9
            if img.min() < -slack or img.max() > 1.0 + slack:
                raise InputError(
                    f"base^{self.iterate} does not map [{u!r}, {v!r}] into itself "
                    f"(rescaled image [{img.min()!r}, {img.max()!r}])"
                )

    # the chain Rescaled(Rescaled(...)) collapses to one affine conjugacy of
    # an iterate of the innermost map, which is what gets evaluated
    @cached_property
    def flat(self):
        base = self.base
        u, v = self.interval
        n, o = self.iterate, self.orientation
        while isinstance(base, Rescaled):
            bu, bv = base.interval
            w = bv - bu
            if base.orientation == 1:
                u, v = bu + u * w, bu + v * w
            else:
                u, v = bv - v * w, bv - u * w
            n *= base.iterate
            o *= base.orientation
            base = base.base
        return base, u, v, n, o

    def to_base(self, t):
        """H^-1 in the coordinates of the innermost base map."""
        _, u, v, _, o = self.flat
        return u + t * (v - u) if o == 1 else v - t * (v - u)

    def from_base(self, x):
        _, u, v, _, o = self.flat
        return (x - u) / (v - u) if o == 1 else (v - x) / (v - u)

    def _flat_iterate(self, x):
        root, _, _, n, _ = self.flat
        return root._iterate(x, n)

    def _raw_eval(self, t):
        t = np.asarray(t, dtype=np.float64)
        root, u, v, n, o = self.flat
        if isinstance(root, Quadratic) and n >= DD_MIN_ITERATE:
            y = kernels.rescaled_quad(root.a, u, v, o, t.ravel(), n)
        else:
            y = self.from_base(self._flat_iterate(self.to_base(t.ravel())))
        return y.reshape(t.shape)

    def _eval(self, t):
        return np.clip(self._raw_eval(t), 0.0, 1.0)

    def _deriv(self, t):
        root, _, _, n, _ = self.flat
        x = np.atleast_1d(self.to_base(np.asarray(t, dtype=np.float64)))
        d = np.ones_like(x)
        for _ in range(n):
            d = d * root._deriv(x)
            x = root._eval(x)
        return d

    def _eval_mp(self, t):
        root, u, v, n, o = self.flat
        u, v = mpmath.mpf(u), mpmath.mpf(v)
        x = u + t * (v - u) if o == 1 else v - t * (v - u)
        for _ in range(n):
            x = root._eval_mp(x)
        return (x - u) / (v - u) if o == 1 else (v - x) / (v - u)

    def _iterate(self, t, n):
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        for _ in range(n):
            t = self._eval(t)
        return t


MapSpec = Union[Quadratic, PiecewiseLinear, Rescaled]


@dataclass(frozen=True)
class OrbitSegment:
    start: float
    values: np.ndarray
    map: MapSpec = field(repr=False)

    def __len__(self):
        return len(self.values)


def evaluate(f: MapSpec, x):
    """Evaluate f at a scalar or array of points in [0, 1]."""
    scalar = np.ndim(x) == 0
    y = f._eval(_check_domain(x))
    return float(y) if scalar else np.asarray(y)


def derivative(f: MapSpec, x):
    scalar = np.ndim(x) == 0
    d = f._deriv(_check_domain(x))
    return float(np.asarray(d).ravel()[0]) if scalar else np.asarray(d)


def iterate(f: MapSpec, x, n: int):
    """f^n elementwise."""
    scalar = np.ndim(x) == 0
    y = f._iterate(_check_domain(x), int(n))
    return float(y[0]) if scalar else y


def evaluate_mp(f: MapSpec, x):
    """Evaluate in mpmath at the current working precision."""
    return f._eval_mp(mpmath.mpf(x))


def orbit(f: MapSpec, x0: float, n: int) -> OrbitSegment:
    x0 = float(_check_domain(x0))
    if n < 0:
        raise InputError("orbit length must be non-negative")
    if isinstance(f, Quadratic):
        values = kernels.quad_orbit(f.a, x0, n)
    else:
        values = np.empty(n + 1)
        values[0] = x = x0
        for k in range(n):
            x = float(f._eval(np.array([x]))[0])
            values[k + 1] = x
    return OrbitSegment(start=x0, values=values, map=f)


def _grid_unimodal(values, flat_tol=1e-13):
    d = np.diff(values)
    s = np.sign(np.where(np.abs(d) > flat_tol, d, 0.0))
    s = s[s != 0]
    if len(s) == 0 or s[0] < 0 or s[-1] > 0:
        return False
    return int(np.count_nonzero(np.diff(s))) == 1


def turning_point(f: MapSpec) -> tuple[float, bool]:
    """Return ``(c, is_unimodal)``; c is the interior maximum when unimodal."""
    if isinstance(f, Quadratic):
        return 0.5, True
    if isinstance(f, PiecewiseLinear):
        s = np.sign(f.slopes)
        nz = np.nonzero(s)[0]
        if len(nz) == 0:
            return float("nan"), False
        changes = [i for i, j in zip(nz, nz[1:]) if s[i] != s[j]]
        if len(changes) == 1 and s[nz[0]] > 0:
            i = changes[0]
            # the peak sits at the first breakpoint after the last rising piece
            return float(f.xs[i + 1]), True
        return float("nan"), False
    # Rescaled
    grid = np.linspace(0.0, 1.0, RESCALE_GRID + 1)
    vals = f._eval(grid)
    if not _grid_unimodal(vals):
        return float("nan"), False
    k = int(np.argmax(vals))
    root = f.flat[0]
    c_root, ok = turning_point(root)
    if ok:
        tc = float(f.from_base(c_root))
        if 0.0 < tc < 1.0 and abs(tc - grid[k]) <= 2.0 / RESCALE_GRID:
            return tc, True
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, RESCALE_GRID)]
    for _ in range(80):
        m1, m2 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        if f._eval(np.array([m1]))[0] < f._eval(np.array([m2]))[0]:
            lo = m1
        else:
            hi = m2
    return 0.5 * (lo + hi), True


def parse_breakpoints(text: str) -> PiecewiseLinear:
    """Parse ``"0,0;0.5,1;1,0"``."""
    try:
        pts = [tuple(float(v) for v in chunk.split(",")) for chunk in text.split(";") if chunk.strip()]
    except ValueError as exc:
        raise InputError(f"cannot parse breakpoints {text!r}") from exc
    if any(len(p) != 2 for p in pts):
        raise InputError(f"cannot parse breakpoints {text!r}")
    return PiecewiseLinear(tuple(pts))


def describe(f: MapSpec) -> dict:
    if isinstance(f, Quadratic):
        return {"kind": "quadratic", "a": f.a}
    if isinstance(f, PiecewiseLinear):
        return {"kind": "piecewise_linear", "breakpoints": [list(p) for p in f.breakpoints]}
    return {
        "kind": "rescaled",
        "base": describe(f.base),
        "interval": list(f.interval),
        "iterate": f.iterate,
        "orientation": f.orientation,
    }


__all__ = [
    "Quadratic",
    "PiecewiseLinear",
    "Rescaled",
    "MapSpec",
    "OrbitSegment",
    "tent",
    "evaluate",
    "derivative",
    "iterate",
    "evaluate_mp",
    "orbit",
    "turning_point",
    "parse_breakpoints",
    "describe",
]

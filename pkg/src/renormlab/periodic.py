"""Periodic points of interval maps: localization near close returns,
root enumeration by period, and the superstable period-doubling cascade.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import gmpy2
import mpmath
import numpy as np

from .errors import BracketError, InputError, NonRecurrenceError, NumericalFailure
from .maps import MapSpec, PiecewiseLinear, Quadratic, Rescaled, derivative, iterate, orbit
from .renorm import renorm_depth
from .rootfind import bisect, bisect_many
from .serialize import csv_text, hexed
from .symbolic import lap_entropy

CLOSE_RETURN = 0.05
K_CAP = 10**6
STABILITY_TOL = 1e-9


# --------------------------------------------------------------------------
# localization at a close return


@dataclass(frozen=True)
class LocalizedPoint:
    """A periodic point of g^k, g = f^n, inside the return gap (x0, x1).

    ``p`` is the nearest float; ``p_hp`` is the high-precision point whose
    residual was verified, needed when f^(n k) is too expanding for a float
    to satisfy the tolerance.
    """

    p: float
    p_hp: mpmath.mpf
    x0: float
    x1: float
    n: int
    k: int
    residual: float
    precision: int

    @property
    def period_bound(self):
        return self.n * self.k

    def to_dict(self):
        d = {"n": self.n, "k": self.k, "precision_bits": self.precision, "p_hp": mpmath.nstr(self.p_hp, 40)}
        for key in ("p", "x0", "x1", "residual"):
            d.update(hexed(key, getattr(self, key)))
        return d


def _bits_per_step(f):
    """Upper bound on log2 of the Lipschitz constant, for sizing mp precision."""
    if isinstance(f, Quadratic):
        lip = max(f.a, 1.0)
    elif isinstance(f, PiecewiseLinear):
        lip = max(float(np.abs(f.slopes).max()), 1.0)
    else:
        root, u, v, n, _ = f.flat
        return n * _bits_per_step(root)
    return max(1, math.ceil(math.log2(lip)))


def _mp_iter(f, x, n):
    for _ in range(n):
        x = f._eval_mp(x)
    return x


def _expansion_bits(f, x0, steps):
    """Largest log2 growth of a perturbation along the float orbit of x0.

    Rounding introduced at step j is amplified by the derivative of the
    remaining iterates, so the worst suffix sum of log2 |f'| sizes the
    working precision.  A float orbit is only a pseudo-orbit, so the
    result is an estimate; the caller verifies the residual afterwards.
    """
    xs = orbit(f, x0, steps).values[:-1]
    logs = np.log2(np.maximum(np.abs(derivative(f, xs)), 2.0**-60))
    suffix = np.cumsum(logs[::-1])
    return float(max(suffix.max(), 0.0))


def _bisect_fixed_quadratic(a, lo, hi, steps, tol, bits):
    """Bisection for g(x) - x = 0 on [lo, hi] in fixed-point integers.

    x is stored as X / 2**bits; a is a float, so it is exactly M / 2**e.
    With GMP integers one step is a few big multiplications, far cheaper
    than the equivalent mpmath operations.  Requires h(lo) > 0 > h(hi).
    """
    m, den = float(a).as_integer_ratio()
    m = gmpy2.mpz(m)
    e = den.bit_length() - 1
    one = gmpy2.mpz(1) << bits
    shift = bits + e
    thresh = int(mpmath.mpf(tol) * one) >> 2

    def h(X):
        Y = X
        for _ in range(steps):
            Y = (m * Y * (one - Y)) >> shift
        return Y - X

    L = gmpy2.mpz(int(mpmath.ceil(lo * one)))
    H = gmpy2.mpz(int(mpmath.floor(hi * one)))
    if not (h(L) > 0 > h(H)):
        return None
    while H - L > 1:
        mid = (L + H) >> 1
        hm = h(mid)
        if abs(hm) < thresh:
            return mpmath.mpf(int(mid)) / int(one)
        if hm > 0:
            L = mid
        else:
            H = mid
    return None


def localize_periodic(
    f: MapSpec,
    x0: float,
    n: int,
    tol: float = 1e-9,
    close: float = CLOSE_RETURN,
    k_cap: int = K_CAP,
) -> LocalizedPoint:
    """Periodic point between x0 and its close return x1 = f^n(x0).

    With g = f^n and x0 < x1, take the smallest k with g^k(x1) < x1; then
    g^k(x0) = g^(k-1)(x1) >= x1 > x0, so g^k(x) - x changes sign on
    [x0, x1] and bisection finds a point of period dividing n k.  The mirror
    case x1 < x0 looks for g^k(x1) > x1.  Signs at the bracket ends are
    re-checked in high precision before bisecting.
    """
    if n < 1:
        raise InputError("return time must be >= 1")
    x0 = float(x0)
    bits = _bits_per_step(f)
    with mpmath.workprec(64 + bits * n):
        x1_hp = _mp_iter(f, mpmath.mpf(x0), n)
    x1 = float(x1_hp)
    gap = abs(x1 - x0)
    if gap <= tol:
        raise InputError(f"x0 = {x0!r} is already periodic at tolerance (|f^n(x0) - x0| = {gap:.3g})")
    if gap >= close:
        raise InputError(f"|f^n(x0) - x0| = {gap:.3g} is not a close return (threshold {close})")
    up = x1 > x0

    # smallest k: a float search gives a first guess (and catches orbits that
    # never come back cheaply); the decision itself is made in high precision
    y = np.array([x1])
    k_guess = 0
    while True:
        k_guess += 1
        if k_guess > k_cap:
            raise NonRecurrenceError(f"orbit of x1 never returned past x1 within {k_cap} steps", x0=x0, n=n)
        y = f._iterate(y, n)
        if (y[0] < x1) if up else (y[0] > x1):
            break
    k = None
    while k is None:
        prec = 64 + 2 * bits * n * (k_guess + 1)
        with mpmath.workprec(prec):
            x1_hp = _mp_iter(f, mpmath.mpf(x0), n)
            y = x1_hp
            for j in range(1, k_guess + 1):
                y = _mp_iter(f, y, n)
                if (y < x1_hp) if up else (y > x1_hp):
                    k = j
                    break
        if k is None:
            k_guess *= 2
            if k_guess > k_cap:
                raise NonRecurrenceError(f"orbit of x1 never returned past x1 within {k_cap} steps", x0=x0, n=n)

    steps = n * k
    prec = 64 + 2 * bits * n * (k + 1)
    lo_x, hi_x = (x0, x1) if up else (x1, x0)

    # fast path: float bisection, residual checked in high precision
    def h(x):
        return float(f._iterate(np.array([x]), steps)[0]) - x

    try:
        a, b = bisect(h, lo_x, hi_x)
        cand = 0.5 * (a + b)
    except ValueError:
        cand = None
    with mpmath.workprec(prec):
        if cand is not None and lo_x < cand < hi_x:
            r = abs(_mp_iter(f, mpmath.mpf(cand), steps) - cand)
            if r < tol:
                return LocalizedPoint(cand, mpmath.mpf(cand), x0, x1, n, k, float(r), prec)

        def h_mp(x):
            return _mp_iter(f, x, steps) - x

        x1_hp = _mp_iter(f, mpmath.mpf(x0), n)
        lo, hi = mpmath.mpf(x0), x1_hp
        if not up:
            lo, hi = hi, lo
        if isinstance(f, Quadratic):
            bits = 96 + math.ceil(_expansion_bits(f, lo_x, steps)) + 2 * steps.bit_length()
            while bits < prec:
                cand = _bisect_fixed_quadratic(f.a, lo, hi, steps, tol, bits)
                if cand is not None and lo < cand < hi:
                    r = abs(h_mp(cand))
                    if r < tol:
                        return LocalizedPoint(float(cand), cand, x0, x1, n, k, float(r), prec)
                bits *= 2
        h_lo, h_hi = h_mp(lo), h_mp(hi)
        if not (h_lo > 0 > h_hi):
            raise NumericalFailure("sign condition at the return gap failed in high precision", x0=x0, n=n, k=k)
        for _ in range(prec):
            mid = (lo + hi) / 2
            hm = h_mp(mid)
            if abs(hm) < tol / 4:
                p = mid
                break
            if hm > 0:
                lo = mid
            else:
                hi = mid
        else:
            raise NumericalFailure("bisection did not reach the residual tolerance", x0=x0, n=n, k=k)
        residual = float(abs(h_mp(p)))
    return LocalizedPoint(float(p), p, x0, x1, n, k, residual, prec)


def residual_hp(f: MapSpec, pt: LocalizedPoint) -> float:
    """Re-evaluate |g^k(p) - p| at the stored high-precision point."""
    with mpmath.workprec(pt.precision):
        return float(abs(_mp_iter(f, pt.p_hp, pt.n * pt.k) - pt.p_hp))


# --------------------------------------------------------------------------
# enumeration by period


@dataclass(frozen=True)
class PeriodicOrbitRecord:
    points: tuple
    period: int
    multiplier: float
    stability: str
    residual: float = field(default=0.0, compare=False)

    def to_dict(self):
        return {
            "period": self.period,
            "points": list(self.points),
            "points_hex": [float(p).hex() for p in self.points],
            **hexed("multiplier", self.multiplier),
            "stability": self.stability,
            "residual": self.residual,
        }


def classify_multiplier(m: float, tol: float = STABILITY_TOL) -> str:
    if abs(m) < 1.0 - tol:
        return "attracting"
    if abs(m) > 1.0 + tol:
        return "repelling"
    return "neutral"


def _divisors(n):
    return [d for d in range(1, n) if n % d == 0]


def find_periods(
    f: MapSpec,
    max_period: int = 16,
    grid: int = 2**16,
    tol: float = 1e-9,
    prim_tol: float = 1e-7,
) -> list:
    """All periodic orbits of primitive period <= max_period seen by sign changes.

    For every tau, f^tau(x) - x is sampled on a uniform grid of ``grid``
    cells; each sign change (and exact grid zero) is refined by bisection.
    Points with f^d(x) within ``prim_tol`` of x for a proper divisor d are
    dropped.  Roots of even multiplicity (tangencies) are not seen.
    """
    if not 1 <= max_period <= 24:
        raise InputError("max_period must be between 1 and 24")
    xs = np.linspace(0.0, 1.0, grid + 1)
    y = xs.copy()
    records = []
    for tau in range(1, max_period + 1):
        y = f._iterate(y, 1)
        h = y - xs
        s = np.sign(h)
        zeros = xs[s == 0]
        change = np.nonzero(s[:-1] * s[1:] < 0)[0]
        roots = []
        if len(change):
            roots.append(bisect_many(lambda x: f._iterate(x, tau) - x, xs[change], xs[change + 1]))
        roots.append(zeros)
        roots = np.sort(np.concatenate(roots))
        if roots.size == 0:
            continue
        keep = np.ones(roots.size, dtype=bool)
        for d in _divisors(tau):
            keep &= np.abs(f._iterate(roots, d) - roots) > prim_tol
        roots = roots[keep]
        used = np.zeros(roots.size, dtype=bool)
        match_tol = max(10 * tol, prim_tol)
        for i, x in enumerate(roots):
            if used[i]:
                continue
            pts = [x]
            for _ in range(tau - 1):
                pts.append(float(f._iterate(np.array([pts[-1]]), 1)[0]))
            pts = np.array(pts)
            for p in pts:
                j = np.searchsorted(roots, p)
                for jj in (j - 1, j):
                    if 0 <= jj < roots.size and abs(roots[jj] - p) <= match_tol:
                        used[jj] = True
            mult = float(np.prod(f._deriv(pts)))
            res = float(abs(f._iterate(np.array([x]), tau)[0] - x))
            order = np.argsort(pts)
            pts = tuple(float(v) for v in np.roll(pts, -int(order[0])))
            records.append(PeriodicOrbitRecord(pts, tau, mult, classify_multiplier(mult), res))
    records.sort(key=lambda r: (r.period, r.points[0]))
    return records


def period_set(records) -> set:
    return {r.period for r in records}


# --------------------------------------------------------------------------
# superstable cascade


@dataclass
class CascadeRecord:
    superstable_params: list  # (n, a_n)
    delta_estimates: list  # (n, delta_n)
    a_star_extrapolation: Optional[float]
    truncated: Optional[str] = None
    kind: str = "superstable"

    @property
    def params(self):
        return [a for _, a in self.superstable_params]

    def deltas(self) -> dict:
        return dict(self.delta_estimates)

    def to_csv(self) -> str:
        deltas = self.deltas()
        rows = [(n, a, deltas.get(n)) for n, a in self.superstable_params]
        return csv_text(["n", "a_n", "delta_n"], rows)

    def to_dict(self):
        return {
            "kind": self.kind,
            "params": [{"n": n, **hexed("a_n", a)} for n, a in self.superstable_params],
            "delta": [{"n": n, "delta_n": d} for n, d in self.delta_estimates],
            "a_star_extrapolation": self.a_star_extrapolation,
            "truncated": self.truncated,
        }


def delta_sequence(params):
    """delta_n = (a_n - a_(n-1)) / (a_(n+1) - a_n) for interior n."""
    out = []
    for n in range(1, len(params) - 1):
        out.append((n, (params[n] - params[n - 1]) / (params[n + 1] - params[n])))
    return out


def extrapolate(params, deltas):
    if len(params) < 2 or not deltas:
        return None
    d = deltas[-1][1]
    return params[-1] + (params[-1] - params[-2]) / (d - 1.0)


def _phi(n):
    def g(a):
        return float(Quadratic(a)._iterate(np.array([0.5]), 2**n)[0]) - 0.5

    return g


def _first_sign_change(g, lo, hi, steps):
    grid = np.linspace(lo, hi, steps + 1)
    prev = g(grid[0])
    for a0, a1 in zip(grid, grid[1:]):
        cur = g(a1)
        if prev == 0.0:
            return a0, a0
        if (prev > 0) != (cur > 0) or cur == 0.0:
            return a0, a1
        prev = cur
    return None


def superstable_parameters(n_max: int = 10, tol: float = 0.0) -> CascadeRecord:
    """Parameters a_n with f_a^(2^n)(1/2) = 1/2 along the main cascade.

    a_n is the first root of a -> f_a^(2^n)(1/2) - 1/2 after a_(n-1); the
    search window is placed using the gap predicted by the latest delta.
    """
    if not 0 <= n_max <= 12:
        raise InputError("n_max must be between 0 and 12")
    params = [2.0]  # f_2(1/2) = 1/2
    truncated = None
    for n in range(1, n_max + 1):
        g = _phi(n)
        prev = params[-1]
        if n == 1:
            windows = [(prev + 1e-6, 4.0, 4000)]
        else:
            gap = params[-1] - params[-2]
            ds = delta_sequence(params)
            d = ds[-1][1] if ds else 4.0
            windows = [(prev + 0.2 * gap / d, prev + 2.0 * gap / d, 64), (prev + 1e-3 * gap / d, prev + gap, 2000)]
        bracket = None
        for lo, hi, steps in windows:
            bracket = _first_sign_change(g, lo, min(hi, 4.0), steps)
            if bracket:
                break
        if bracket is None:
            truncated = f"no sign change found for level {n}"
            break
        a, b = bisect(g, bracket[0], bracket[1], tol)
        root = float(0.5 * (a + b))
        if not root > prev:
            truncated = f"level {n} root {root!r} does not exceed previous parameter"
            break
        params.append(root)
    ds = delta_sequence(params)
    rec = CascadeRecord(list(enumerate(params)), ds, extrapolate(params, ds), truncated)
    return rec


@dataclass(frozen=True)
class AStarReport:
    value: float
    lap_threshold: Optional[float]
    lap_n: int
    agree: Optional[bool]
    cascade: CascadeRecord
    depth_below: Optional[tuple] = None  # renorm_depth just below the value

    def to_dict(self):
        return {
            **hexed("a_star", self.value),
            "lap_threshold": self.lap_threshold,
            "lap_n": self.lap_n,
            "agree": self.agree,
            "depth_below": list(self.depth_below) if self.depth_below else None,
            "cascade": self.cascade.to_dict(),
        }


def lap_threshold(lo: float = 3.5, hi: float = 3.6, n: int = 1000, threshold: float = 0.01, width: float = 1e-5):
    """Bisection on the parameter where the lap-count entropy estimate crosses threshold."""

    def positive(a):
        return lap_entropy(Quadratic(a), n).value > threshold

    if positive(lo) or not positive(hi):
        raise BracketError("lap-entropy threshold not bracketed", lo=lo, hi=hi)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if positive(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def find_a_star(tol: float = 1e-7, n_max: int = 10, cross_check: bool = True, lap_n: int = 1000, agree_tol: float = 2e-4) -> AStarReport:
    """a* from the delta-extrapolated superstable cascade.

    Two cross-checks: renorm_depth at value - 10 tol must be finite (the map
    there is only finitely renormalizable), and optionally a bisection on
    the lap-entropy threshold.  Both are reported; ``agree`` is False when
    either disagrees.
    """
    if tol < 1e-7:
        raise InputError("tol must be >= 1e-7")
    cas = superstable_parameters(n_max)
    if cas.truncated:
        raise BracketError(f"cascade truncated: {cas.truncated}", levels=len(cas.superstable_params))
    value = cas.a_star_extrapolation
    depth, capped = renorm_depth(Quadratic(value - 10 * tol), 12)
    agree = not capped
    lap = None
    if cross_check:
        lap = lap_threshold(n=lap_n)
        agree = agree and abs(lap - value) <= agree_tol
    return AStarReport(value, lap, lap_n, agree, cas, (depth, capped))

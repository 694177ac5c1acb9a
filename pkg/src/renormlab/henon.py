"""The Hénon family (x, y) -> (1 - a x^2 + y, b x).

The Jacobian [[-2 a x, 1], [b, 0]] has constant determinant -b, so the
eigenvalue product along any orbit of period tau is (-b)^tau.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .errors import EscapeError, InputError
from .periodic import CascadeRecord, delta_sequence, extrapolate
from .rootfind import bisect
from .serialize import csv_text

ESCAPE_RADIUS = 100.0
CONFIRM = 100
LAG_MAX = 64
NEWTON_TOL = 1e-11
DEDUP_TOL = 1e-7
STABILITY_TOL = 1e-9


@dataclass(frozen=True)
class HenonParams:
    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise InputError("Hénon parameters must be finite")


def henon_step(params: HenonParams, point):
    """One step; overflow gives infinite coordinates (the escape signal)."""
    x, y = (np.asarray(v, dtype=np.float64) for v in point)
    with np.errstate(over="ignore", invalid="ignore"):
        nx = 1.0 - params.a * x * x + y
        ny = params.b * x
    nx = np.where(np.isfinite(nx), nx, np.inf)
    if nx.ndim == 0:
        return float(nx), float(ny)
    return nx, ny


def henon_inverse(params: HenonParams, point):
    if params.b == 0:
        raise InputError("the Hénon map is not invertible for b = 0")
    x, y = (np.asarray(v, dtype=np.float64) for v in point)
    u = y / params.b
    px, py = u, x - 1.0 + params.a * u * u
    if np.ndim(px) == 0:
        return float(px), float(py)
    return px, py


def jacobian(params: HenonParams, point) -> np.ndarray:
    x = float(point[0])
    return np.array([[-2.0 * params.a * x, 1.0], [params.b, 0.0]])


def henon_iterate(params: HenonParams, point, n: int):
    x, y = float(point[0]), float(point[1])
    for _ in range(n):
        x, y = henon_step(params, (x, y))
    return x, y


def fixed_points(params: HenonParams) -> list:
    """Closed-form fixed points: a x^2 + (1 - b) x - 1 = 0, y = b x."""
    a, b = params.a, params.b
    if a == 0:
        return [(1.0 / (1.0 - b), b / (1.0 - b))] if b != 1 else []
    disc = (1.0 - b) ** 2 + 4.0 * a
    if disc < 0:
        return []
    r = math.sqrt(disc)
    xs = sorted({((b - 1.0) + r) / (2.0 * a), ((b - 1.0) - r) / (2.0 * a)})
    return [(x, b * x) for x in xs]


def mild_dissipation(params) -> bool:
    """|b| < 1/4, the paper's sufficient condition (strict)."""
    b = params.b if isinstance(params, HenonParams) else float(params)
    return abs(b) < 0.25


# --------------------------------------------------------------------------
# periodic orbits


@dataclass(frozen=True)
class PlanarOrbitRecord:
    points: tuple
    period: int
    jacobian_product: tuple
    eigenvalues: tuple  # moduli, descending
    stability: str
    residual: float = field(default=0.0, compare=False)
    eigenvalues_complex: tuple = field(default=(), compare=False, repr=False)

    @property
    def determinant(self):
        (m00, m01), (m10, m11) = self.jacobian_product
        return m00 * m11 - m01 * m10

    def to_dict(self):
        return {
            "period": self.period,
            "points": [list(p) for p in self.points],
            "points_hex": [[float(v).hex() for v in p] for p in self.points],
            "jacobian_product": [list(r) for r in self.jacobian_product],
            "eigenvalue_moduli": list(self.eigenvalues),
            "stability": self.stability,
            "residual": self.residual,
        }


def _classify(moduli, tol=STABILITY_TOL):
    hi, lo = moduli
    if hi < 1.0 - tol:
        return "sink"
    if lo > 1.0 + tol:
        return "source"
    if hi > 1.0 + tol and lo < 1.0 - tol:
        return "saddle"
    return "neutral"


def orbit_record(params: HenonParams, z, period: int) -> PlanarOrbitRecord:
    pts = [(float(z[0]), float(z[1]))]
    M = np.eye(2)
    for _ in range(period):
        M = jacobian(params, pts[-1]) @ M
        pts.append(henon_step(params, pts[-1]))
    end = pts.pop()
    residual = math.hypot(end[0] - pts[0][0], end[1] - pts[0][1])
    ev = np.linalg.eigvals(M)
    moduli = tuple(sorted((float(abs(e)) for e in ev), reverse=True))
    # start the orbit at its lexicographically smallest point
    k = min(range(period), key=lambda i: pts[i])
    pts = pts[k:] + pts[:k]
    return PlanarOrbitRecord(
        tuple(pts),
        period,
        tuple(tuple(float(v) for v in row) for row in M),
        moduli,
        _classify(moduli),
        residual,
        tuple(complex(e) for e in ev),
    )


def seed_lattice(n: int = 64, box: float = 2.0) -> np.ndarray:
    g = np.linspace(-box, box, n)
    X, Y = np.meshgrid(g, g, indexing="ij")
    return np.column_stack([X.ravel(), Y.ravel()])


def _same_orbit(r1, r2, tol=DEDUP_TOL):
    if r1.period != r2.period:
        return False
    return all(min(math.hypot(p[0] - q[0], p[1] - q[1]) for q in r2.points) < tol for p in r1.points)


def henon_periodic_orbits(params: HenonParams, max_period: int = 8, seeds=None, tol: float = NEWTON_TOL) -> list:
    """Periodic orbits found by damped Newton on f^tau(z) - z.

    Seeds default to a 64 x 64 lattice over [-2, 2]^2.  Accepted roots are
    re-checked by plain iteration, filtered for primitive period and
    deduplicated as point sets.  Seeds that fail to converge are dropped
    silently, so the result is what was found, not a proof of absence.
    """
    if not 1 <= max_period <= 16:
        raise InputError("max_period must be between 1 and 16")
    seeds = seed_lattice() if seeds is None else np.asarray(seeds, dtype=np.float64).reshape(-1, 2)
    found = []
    for tau in range(1, max_period + 1):
        z, res = kernels.henon_newton(params.a, params.b, seeds, tau, 60, tol)
        ok = np.isfinite(res) & (res < tol)
        cands = z[ok]
        if not len(cands):
            continue
        # merge candidates that landed on the same point before the costlier checks
        cands = cands[np.lexsort((cands[:, 1], cands[:, 0]))]
        keep = [cands[0]]
        for c in cands[1:]:
            if max(abs(c[0] - keep[-1][0]), abs(c[1] - keep[-1][1])) > DEDUP_TOL:
                keep.append(c)
        level = []
        for c in keep:
            x, y = henon_iterate(params, c, tau)
            if not math.hypot(x - c[0], y - c[1]) < tol:
                continue
            primitive = True
            for d in range(1, tau):
                if tau % d == 0:
                    x, y = henon_iterate(params, c, d)
                    if math.hypot(x - c[0], y - c[1]) < DEDUP_TOL:
                        primitive = False
                        break
            if not primitive:
                continue
            rec = orbit_record(params, c, tau)
            if any(_same_orbit(rec, r) for r in level):
                continue
            level.append(rec)
        found.extend(level)
    found.sort(key=lambda r: (r.period, r.points[0]))
    return found


# --------------------------------------------------------------------------
# fate of a single orbit


@dataclass(frozen=True)
class OrbitFate:
    verdict: str  # "escapes", "periodic" or "undecided"
    step: int
    record: Optional[PlanarOrbitRecord] = None
    last: tuple = ()

    def to_dict(self):
        d = {"verdict": self.verdict, "step": self.step, "last": list(self.last)}
        if self.record is not None:
            d["orbit"] = self.record.to_dict()
        return d


def _polish(params, z, tau, tol=NEWTON_TOL):
    zz, res = kernels.henon_newton(params.a, params.b, np.array([z], dtype=np.float64), tau, 60, tol)
    return zz[0], float(res[0])


def classify_orbit_fate(
    params: HenonParams,
    start,
    n_max: int = 100_000,
    escape_radius: float = ESCAPE_RADIUS,
    tol: float = 1e-9,
    lag_max: int = LAG_MAX,
    confirm: int = CONFIRM,
) -> OrbitFate:
    """Escape, convergence to a periodic orbit, or neither within n_max steps.

    Convergence means the orbit revisits itself within ``tol`` at a fixed
    lag <= ``lag_max`` for ``confirm`` consecutive steps.  "undecided" is
    an honest third answer: bounded chaotic orbits and orbits accumulating
    on an odometer both end up there.
    """
    if escape_radius < 10:
        raise InputError("escape radius must be at least 10")
    status, step, lag, x, y = kernels.henon_fate(
        params.a, params.b, float(start[0]), float(start[1]), n_max, escape_radius, lag_max, tol, confirm
    )
    if status == 1:
        return OrbitFate("escapes", step, None, (x, y))
    if status == 2:
        z, res = _polish(params, (x, y), lag)
        if not res < NEWTON_TOL:
            z = (x, y)
        # a multiple of the period can confirm first (a negative eigenvalue
        # makes the lag-2 distance shrink faster than the lag-1 one)
        for d in range(1, lag):
            if lag % d == 0:
                px, py = henon_iterate(params, z, d)
                if math.hypot(px - z[0], py - z[1]) < tol:
                    lag = d
                    break
        return OrbitFate("periodic", step, orbit_record(params, z, lag), (x, y))
    return OrbitFate("undecided", step, None, (x, y))


# --------------------------------------------------------------------------
# attractor sampling


@dataclass(frozen=True)
class AttractorSample:
    points: np.ndarray
    bbox: tuple  # (xmin, xmax, ymin, ymax)

    @property
    def diameter(self):
        x0, x1, y0, y1 = self.bbox
        return math.hypot(x1 - x0, y1 - y0)

    def to_csv(self) -> str:
        return csv_text(["x", "y"], self.points.tolist())


def attractor_sample(params: HenonParams, start, n_transient: int = 1000, n_keep: int = 10_000, radius: float = ESCAPE_RADIUS):
    pts, esc = kernels.henon_keep(params.a, params.b, float(start[0]), float(start[1]), n_transient, n_keep, radius)
    if esc >= 0:
        raise EscapeError(f"orbit escaped at step {esc}", step=esc, start=list(map(float, start)))
    bbox = (float(pts[:, 0].min()), float(pts[:, 0].max()), float(pts[:, 1].min()), float(pts[:, 1].max()))
    return AttractorSample(pts, bbox)


# --------------------------------------------------------------------------
# period-doubling cascade


def _max_modulus(params, z, tau):
    M = np.eye(2)
    p = (float(z[0]), float(z[1]))
    for _ in range(tau):
        M = jacobian(params, p) @ M
        p = henon_step(params, p)
    ev = np.linalg.eigvals(M)
    return float(np.abs(ev).max()), M, ev


def _fixed_branch(a, b):
    # the fixed point born at the saddle-node that later flips
    x = ((b - 1.0) + math.sqrt((1.0 - b) ** 2 + 4.0 * a)) / (2.0 * a) if a != 0 else 1.0 / (1.0 - b)
    return np.array([x, b * x])


class _Tracker:
    """Continue a period-tau orbit in a, solving by Newton from the last point."""

    def __init__(self, b, tau):
        self.b = b
        self.tau = tau

    def solve(self, a, z):
        zz, res = _polish(HenonParams(a, self.b), z, self.tau)
        if not res < NEWTON_TOL:
            return None
        return zz

    def phi(self, a, z):
        return _max_modulus(HenonParams(a, self.b), z, self.tau)[0] - 1.0


def _is_new_orbit(params, z, tau_old):
    x, y = henon_iterate(params, z, tau_old)
    return math.hypot(x - z[0], y - z[1]) > 1e-6


def henon_cascade(b: float, a_range=(0.0, 1.5), n_max: int = 8, steps_per_gap: int = 40) -> CascadeRecord:
    """Flip bifurcations a_n of the period-2^n orbits at fixed b.

    a_0 comes from the closed-form fixed point.  Each later orbit is picked
    up just after the previous flip by Newton from seeds displaced along
    the flip eigenvector, continued in a, and a_n is bisected on
    max |eigenvalue| - 1.
    """
    if not 0 <= n_max <= 8:
        raise InputError("n_max must be between 0 and 8")
    lo_a, hi_a = (float(v) for v in a_range)
    b = float(b)
    params_found = []
    truncated = None

    def phi0(a):
        return _max_modulus(HenonParams(a, b), _fixed_branch(a, b), 1)[0] - 1.0

    birth0 = -((1.0 - b) ** 2) / 4.0
    start = max(lo_a, birth0 + 1e-9)
    try:
        lo, hi = bisect(phi0, start, hi_a)
    except ValueError:
        return CascadeRecord([], [], None, "fixed-point flip not bracketed in a_range", kind="flip")
    params_found.append(0.5 * (lo + hi))
    gap = params_found[0] - birth0
    a_prev = params_found[0]
    z_prev = _fixed_branch(a_prev, b)
    tau_old = 1

    for n in range(1, n_max + 1):
        tau = 2 * tau_old
        ds = delta_sequence(params_found)
        d_est = ds[-1][1] if ds else 4.0
        expect = gap / d_est
        tr = _Tracker(b, tau)
        old = _Tracker(b, tau_old)
        # pick up the newborn orbit slightly past the flip
        a_cur = a_prev + 0.02 * expect
        z_old = old.solve(a_cur, z_prev)
        z = None
        if z_old is not None:
            _, _, ev = _max_modulus(HenonParams(a_cur, b), z_old, tau_old)
            M = _max_modulus(HenonParams(a_cur, b), z_old, tau_old)[1]
            w, V = np.linalg.eig(M)
            v = np.real(V[:, int(np.argmin(np.real(w)))])
            v = v / np.linalg.norm(v)
            for s in (1e-3, 3e-3, 1e-2, 3e-2, 1e-1):
                for sign in (1.0, -1.0):
                    cand = tr.solve(a_cur, z_old + sign * s * v)
                    if cand is not None and _is_new_orbit(HenonParams(a_cur, b), cand, tau_old):
                        z = cand
                        break
                if z is not None:
                    break
        if z is None:
            truncated = f"could not pick up the period-{tau} orbit after a_{n - 1}"
            break
        if tr.phi(a_cur, z) >= 0:
            truncated = f"period-{tau} orbit is not stable just after its birth"
            break
        # march until the flip is passed
        da = expect / steps_per_gap
        a_left, z_left = a_cur, z
        lost = False
        while True:
            a_next = a_left + da
            if a_next > hi_a:
                lost = True
                truncated = f"period-{tau} flip not found below a = {hi_a}"
                break
            z_next = tr.solve(a_next, z_left)
            if z_next is None or not _is_new_orbit(HenonParams(a_next, b), z_next, tau_old):
                da *= 0.5
                if da < expect * 1e-9:
                    lost = True
                    truncated = f"lost track of the period-{tau} orbit near a = {a_left}"
                    break
                continue
            if tr.phi(a_next, z_next) > 0:
                a_right = a_next
                break
            a_left, z_left = a_next, z_next
        if lost:
            break
        # bisect on the modulus, re-solving from the nearest stable point
        for _ in range(200):
            mid = 0.5 * (a_left + a_right)
            if mid <= a_left or mid >= a_right:
                break
            zm = tr.solve(mid, z_left)
            if zm is None:
                break
            if tr.phi(mid, zm) > 0:
                a_right = mid
            else:
                a_left, z_left = mid, zm
        a_n = 0.5 * (a_left + a_right)
        gap = a_n - a_prev
        params_found.append(a_n)
        a_prev, z_prev, tau_old = a_n, z_left, tau
    ds = delta_sequence(params_found)
    return CascadeRecord(list(enumerate(params_found)), ds, extrapolate(params_found, ds), truncated, kind="flip")


def henon_period_gate(params: HenonParams, max_period: int = 8, threshold: int = 8):
    """Period set of the found orbits together with the disc-mode verdict."""
    from .renorm import period_set_validator

    recs = henon_periodic_orbits(params, max_period)
    periods = sorted({r.period for r in recs})
    return periods, period_set_validator(periods, "disc", threshold)

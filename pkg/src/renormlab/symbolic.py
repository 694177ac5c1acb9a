"""Itineraries, covering relations and entropy estimates for interval maps."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import interval as iv
from . import kernels
from .errors import InputError, NumericalFailure
from .maps import MapSpec, PiecewiseLinear, iterate, orbit, turning_point

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class Itinerary:
    symbols: tuple
    partition: tuple
    undefined_at: Optional[int] = None


def _check_disjoint(intervals, strict_gap):
    ivs = [(float(a), float(b)) for a, b in intervals]
    for a, b in ivs:
        if not (0.0 <= a <= b <= 1.0):
            raise InputError(f"interval [{a}, {b}] is not inside [0, 1]")
    order = sorted(ivs)
    for (a0, b0), (a1, b1) in zip(order, order[1:]):
        if (a1 <= b0) if strict_gap else (a1 < b0):
            raise InputError(f"intervals [{a0}, {b0}] and [{a1}, {b1}] are not disjoint")
    return tuple(ivs)


def itinerary(f: MapSpec, x0: float, partition: Sequence, n: int) -> Itinerary:
    """Code the first n points of the orbit of x0 by the partition piece they fall in.

    Coding stops when a point lands within 1e-12 of a piece boundary or
    outside every piece; ``undefined_at`` records that index.
    """
    parts = _check_disjoint(partition, strict_gap=False)
    cuts = np.array(sorted({e for p in parts for e in p if 0.0 < e < 1.0}))
    values = orbit(f, x0, max(n - 1, 0)).values[:n]
    symbols = []
    for k, x in enumerate(values):
        if len(cuts) and np.abs(cuts - x).min() <= BOUNDARY_TOL:
            return Itinerary(tuple(symbols), parts, k)
        hit = next((i for i, (a, b) in enumerate(parts) if a <= x <= b), None)
        if hit is None:
            return Itinerary(tuple(symbols), parts, k)
        symbols.append(hit)
    return Itinerary(tuple(symbols), parts, None)


# --------------------------------------------------------------------------
# covering relations


@dataclass
class CoveringGraph:
    intervals: tuple
    iterate: int
    matrix: np.ndarray
    rigor: str  # "verified" or "grid"
    decided: np.ndarray = field(default=None, repr=False)

    @property
    def verified(self) -> bool:
        return self.rigor == "verified"

    def to_dict(self) -> dict:
        return {
            "intervals": [list(p) for p in self.intervals],
            "iterate": self.iterate,
            "matrix": self.matrix.astype(int).tolist(),
            "rigor": self.rigor,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CoveringGraph":
        return cls(
            intervals=tuple(tuple(float(v) for v in p) for p in d["intervals"]),
            iterate=int(d["iterate"]),
            matrix=np.array(d["matrix"], dtype=bool),
            rigor=d["rigor"],
        )


def _witness_bounds(f, a, b, ell, level):
    """Rigorous inner bound of f^ell([a, b]) from grid argmin/argmax points."""
    grid = np.linspace(a, b, 2**level + 1)
    vals = iterate(f, grid, ell)
    pts = np.array([grid[np.argmin(vals)], grid[np.argmax(vals)]])
    lo, hi = iv.enclose_iterate(f, pts, pts, ell)
    # f^ell attains a value <= hi[0] and a value >= lo[1]; by continuity the
    # image contains everything in between
    return float(hi[0]), float(lo[1]), float(vals.min()), float(vals.max())


def covering_graph(f: MapSpec, intervals: Sequence, ell: int, max_depth: int = 20) -> CoveringGraph:
    """Covering matrix of f^ell over disjoint closed intervals.

    Entry (i, j) is True when f^ell(I_i) contains I_j.  Each entry is decided
    rigorously: True by two witness points whose enclosed images straddle
    I_j, False by an outer enclosure of the image that misses part of I_j.
    Undecided entries after ``max_depth`` subdivision levels fall back to a
    grid estimate and the graph is marked ``rigor="grid"``.
    """
    if ell < 1:
        raise InputError("iterate must be >= 1")
    ivs = _check_disjoint(intervals, strict_gap=True)
    m = len(ivs)
    matrix = np.zeros((m, m), dtype=bool)
    decided = np.zeros((m, m), dtype=bool)
    grid_est = np.zeros((m, m), dtype=bool)
    for i, (a, b) in enumerate(ivs):
        level = 6
        while True:
            in_lo, in_hi, g_lo, g_hi = _witness_bounds(f, a, b, ell, min(level, 20))
            out_lo, out_hi = iv.enclose_range(f, a, b, ell, pieces=2**level)
            for j, (c, d) in enumerate(ivs):
                if decided[i, j]:
                    continue
                grid_est[i, j] = g_lo <= c and g_hi >= d
                if in_lo <= c and in_hi >= d:
                    matrix[i, j] = decided[i, j] = True
                elif out_lo > c or out_hi < d:
                    decided[i, j] = True
            if decided[i].all() or level >= max_depth:
                break
            level += 2
    rigor = "verified" if decided.all() else "grid"
    if rigor == "grid":
        matrix = np.where(decided, matrix, grid_est)
    return CoveringGraph(ivs, int(ell), matrix, rigor, decided)


def misiurewicz_certificate(graph: CoveringGraph):
    """Indices (i, j) of two intervals each of whose images covers both, or None."""
    if not graph.verified:
        raise NumericalFailure("certificate unavailable: covering graph is not rigorously verified", rigor=graph.rigor)
    A = graph.matrix
    for i, j in itertools.combinations(range(len(A)), 2):
        if A[i, i] and A[i, j] and A[j, i] and A[j, j]:
            return i, j
    return None


def interval_pair_grid(n_pairs: int = 50, cells: int = 11, margin: float = 0.01):
    """Deterministic candidate pairs of disjoint intervals for certificate searches."""
    edges = np.linspace(0.0, 1.0, cells + 1)
    boxes = [(float(edges[k] + margin), float(edges[k + 1] - margin)) for k in range(cells)]
    pairs = list(itertools.combinations(boxes, 2))
    return pairs[:n_pairs]


@dataclass(frozen=True)
class CertificateSearch:
    found: bool
    intervals: Optional[tuple]
    iterate: Optional[int]
    pairs_tried: int
    inconclusive: int


def search_misiurewicz(f: MapSpec, pairs=None, max_iterate: int = 8) -> CertificateSearch:
    """Try every candidate pair and iterate up to ``max_iterate``.

    Failure to find a certificate is reported as such; it is never taken as
    evidence of zero entropy.
    """
    pairs = interval_pair_grid() if pairs is None else pairs
    inconclusive = 0
    for ell in range(1, max_iterate + 1):
        for pair in pairs:
            g = covering_graph(f, pair, ell)
            if not g.verified:
                inconclusive += 1
                continue
            if misiurewicz_certificate(g) is not None:
                return CertificateSearch(True, tuple(pair), ell, len(pairs), inconclusive)
    return CertificateSearch(False, None, None, len(pairs), inconclusive)


def _components(adj):
    """Strongly connected components of a small boolean adjacency matrix."""
    m = len(adj)
    reach = adj | np.eye(m, dtype=bool)
    for k in range(m):
        reach |= reach[:, k : k + 1] & reach[k : k + 1, :]
    mutual = reach & reach.T
    seen = np.zeros(m, dtype=bool)
    comps = []
    for i in range(m):
        if not seen[i]:
            members = np.nonzero(mutual[i])[0]
            seen[members] = True
            comps.append(members)
    return comps


def _perron_irreducible(B, rtol, max_iter):
    # B + I is primitive when B is irreducible: no other eigenvalue on the
    # spectral circle, so plain power iteration converges geometrically
    m = len(B)
    C = B + np.eye(m)
    v = np.ones(m) / m
    lo = hi = 1.0
    for _ in range(max_iter):
        w = C @ v
        # Collatz-Wielandt: min and max of (Cv)_i / v_i bracket the root
        r = w / v
        lo, hi = r.min(), r.max()
        if hi - lo <= rtol * hi:
            break
        v = w / w.sum()
    return 0.5 * (lo + hi) - 1.0


def spectral_radius(A, rtol: float = 1e-10, max_iter: int = 100_000) -> float:
    """Perron root of a non-negative matrix.

    The matrix is split into strongly connected components; the Perron
    root is the largest over the irreducible diagonal blocks, each found by
    power iteration.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.size == 0:
        return 0.0
    best = 0.0
    for comp in _components(A > 0):
        B = A[np.ix_(comp, comp)]
        if len(comp) == 1:
            best = max(best, float(B[0, 0]))
        else:
            best = max(best, _perron_irreducible(B, rtol, max_iter))
    return best


def graph_entropy(graph) -> float:
    """log(spectral radius) / iterate, zero when the matrix is nilpotent."""
    if isinstance(graph, CoveringGraph):
        A, ell = graph.matrix, graph.iterate
    else:
        A, ell = np.asarray(graph), 1
    rho = spectral_radius(A)
    return math.log(rho) / ell if rho > 1.0 else 0.0


def count_words(matrix, n: int) -> int:
    """Exact number of admissible words of length n (paths with n symbols)."""
    A = [[int(bool(v)) for v in row] for row in np.asarray(matrix)]
    m = len(A)
    if n <= 0:
        return 1 if n == 0 else 0
    vec = [1] * m
    for _ in range(n - 1):
        vec = [sum(A[i][j] * vec[j] for j in range(m)) for i in range(m)]
    return sum(vec)


# --------------------------------------------------------------------------
# entropy estimates


@dataclass(frozen=True)
class EntropyEstimate:
    method: str
    value: float
    n_used: int
    raw: tuple


def tail_slope(raw: Sequence, log_term: bool = True) -> float:
    """Exponential growth rate of raw[n] (n = 1, 2, ...) from the tail half.

    Least squares of log raw[n] against n and log n, so polynomial growth
    (the zero-entropy signature) is absorbed by the log n term instead of
    leaking into the rate.  ``log_term=False`` fits the plain exponential
    model.  Clipped at zero.
    """
    y = np.log(np.asarray(raw, dtype=np.float64))
    ns = np.arange(1, len(y) + 1, dtype=np.float64)
    half = len(y) // 2
    x, y = ns[half:], y[half:]
    if len(x) < 2:
        return 0.0
    cols = [x, np.ones_like(x)]
    if log_term and len(x) >= 4:
        cols.insert(1, np.log(x))
    coef = np.linalg.lstsq(np.vstack(cols).T, y, rcond=None)[0]
    return max(float(coef[0]), 0.0)


def _turning_points(f):
    if isinstance(f, PiecewiseLinear):
        s = np.sign(f.slopes)
        nz = np.nonzero(s)[0]
        return np.array([f.xs[i + 1] for i, j in zip(nz, nz[1:]) if s[i] != s[j]])
    c, ok = turning_point(f)
    if not ok:
        raise InputError("lap counting needs a unimodal or piecewise-monotone map")
    return np.array([c])


GATE_N_MAX = 400
GATE_THRESHOLD = 0.01


def lap_counts(f: MapSpec, n_max: int) -> list:
    """Number of monotone laps of f^n for n = 1..n_max.

    Each lap of f^n is tracked only through its image interval, whose
    endpoints lie on the forward orbits of 0, 1 and the turning points.
    Applying f to an image splits it once per turning point strictly
    inside it.  Laps with equal images are merged into one counter, so the
    cost per step is the number of distinct images, not the number of laps.
    Stops early once a count exceeds 2**53.
    """
    crit = _turning_points(f)
    ends = np.concatenate(([0.0], crit, [1.0]))
    vals = f._eval(ends)
    images = {}
    for k in range(len(ends) - 1):
        key = (min(vals[k], vals[k + 1]), max(vals[k], vals[k + 1]))
        images[key] = images.get(key, 0) + 1
    counts = [sum(images.values())]
    crit_f = f._eval(crit)
    while len(counts) < n_max and counts[-1] <= 2**53:
        pts = np.unique(np.array([e for key in images for e in key]))
        fx = dict(zip(pts.tolist(), f._eval(pts).tolist()))
        nxt = {}
        for (u, v), m in images.items():
            inner = [(t, ft) for t, ft in zip(crit, crit_f) if u < t < v]
            cuts = [(u, fx[u])] + inner + [(v, fx[v])]
            for (_, y0), (_, y1) in zip(cuts, cuts[1:]):
                key = (y0, y1) if y0 <= y1 else (y1, y0)
                nxt[key] = nxt.get(key, 0) + m
        images = nxt
        counts.append(sum(images.values()))
    return counts


def lap_entropy(f: MapSpec, n_max: int = 20) -> EntropyEstimate:
    raw = lap_counts(f, n_max)
    return EntropyEstimate("lap_count", tail_slope(raw), len(raw), tuple(raw))


def separation_count(f: MapSpec, eps: float, n: int, grid: int = 4097) -> int:
    """Size of a greedy (n, eps)-separated set drawn from a uniform grid.

    Two points are told apart when some iterate k <= n puts them more than
    eps apart.  The greedy count is a lower bound for the maximal size.
    """
    if eps <= 0:
        raise InputError("eps must be positive")

    xs = np.linspace(0.0, 1.0, grid)
    traj = np.empty((grid, n + 1))
    traj[:, 0] = xs
    for k in range(1, n + 1):
        traj[:, k] = iterate(f, traj[:, k - 1], 1)
    return kernels.separation(traj, eps)


def separation_entropy(f: MapSpec, eps: float, n_max: int, grid: int = 4097) -> EntropyEstimate:
    # separated-set counts saturate at the grid size rather than carrying a
    # polynomial prefactor, so the log n term would only fit the saturation
    raw = [separation_count(f, eps, n, grid) for n in range(1, n_max + 1)]
    return EntropyEstimate("separation_count", tail_slope(raw, log_term=False), n_max, tuple(raw))

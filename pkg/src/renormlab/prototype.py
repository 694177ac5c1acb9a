"""Symbolic prototype models: chains of periodic orbits built by pasting,
mixed-radix odometers, and the odometer law along the cascade.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError
from .maps import Quadratic, iterate
from .renorm import renorm_chain

KINDS = ("saddle_fixed_exchanged", "stabilizing_sink_fixed", "saddle", "sink")


@dataclass
class ChainNode:
    orbit_id: int
    period: int
    kind: str
    # a saddle of f_1 also has an unstable branch anchored at the stabilizing
    # sink; that sink has a smaller period, so it is kept off the edge list
    anchored_to: Optional[int] = None

    def to_dict(self):
        d = {"orbit_id": self.orbit_id, "period": self.period, "kind": self.kind}
        if self.anchored_to is not None:
            d["anchored_to"] = self.anchored_to
        return d


@dataclass
class ChainGraph:
    nodes: list
    edges: list  # (from_id, to_id)
    pasting_sequence: tuple
    smooth_realizable_tail: bool = field(default=True)

    def node(self, orbit_id):
        return next(n for n in self.nodes if n.orbit_id == orbit_id)

    def periods(self) -> list:
        return sorted(n.period for n in self.nodes)

    def out_degree(self, orbit_id):
        return sum(1 for a, _ in self.edges if a == orbit_id)

    def is_acyclic(self) -> bool:
        succ = {n.orbit_id: [] for n in self.nodes}
        indeg = {n.orbit_id: 0 for n in self.nodes}
        for a, b in self.edges:
            succ[a].append(b)
            indeg[b] += 1
        queue = [k for k, d in indeg.items() if d == 0]
        seen = 0
        while queue:
            k = queue.pop()
            seen += 1
            for m in succ[k]:
                indeg[m] -= 1
                if indeg[m] == 0:
                    queue.append(m)
        return seen == len(self.nodes)

    def violations(self) -> list:
        """Structural problems; an empty list means every invariant holds."""
        out = []
        if not self.is_acyclic():
            out.append("graph has a cycle")
        for n in self.nodes:
            if n.kind in ("saddle", "saddle_fixed_exchanged") and self.out_degree(n.orbit_id) < 1:
                out.append(f"saddle {n.orbit_id} has no outgoing edge")
        for a, b in self.edges:
            pa, pb = self.node(a).period, self.node(b).period
            if pb % pa or pb // pa not in (1, 2, 3):
                out.append(f"edge {a}->{b} goes from period {pa} to {pb}")
        return out

    def to_dict(self):
        return {
            "pasting_sequence": "".join(str(k) for k in self.pasting_sequence),
            "nodes": [n.to_dict() for n in self.nodes],
            "edges": [list(e) for e in self.edges],
            "periods": self.periods(),
            "smooth_realizable_tail": self.smooth_realizable_tail,
        }

    def to_dot(self) -> str:
        lines = ["digraph chain {"]
        for n in self.nodes:
            lines.append(f'  n{n.orbit_id} [label="{n.period}/{n.kind}"];')
        for a, b in self.edges:
            lines.append(f"  n{a} -> n{b};")
        for n in self.nodes:
            if n.anchored_to is not None:
                lines.append(f"  n{n.orbit_id} -> n{n.anchored_to} [style=dashed];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def parse_k(k) -> tuple:
    if isinstance(k, str):
        if any(ch not in "01" for ch in k):
            raise InputError(f"pasting sequence must be a string of 0s and 1s, got {k!r}")
        return tuple(int(ch) for ch in k)
    k = tuple(int(v) for v in k)
    if any(v not in (0, 1) for v in k):
        raise InputError("pasting sequence entries must be 0 or 1")
    return k


def build_prototype_chain(k, depth: Optional[int] = None) -> ChainGraph:
    """Chain of periodic orbits of the prototype obtained by pasting f_(k_1), ..., f_(k_d).

    Start from one sink of period 1.  Pasting f_0 into the current sink of
    period t turns it into a saddle with exchanged branches and adds a sink
    of period 2t; pasting f_1 turns it into a stabilizing sink and adds a
    saddle and a sink of period 3t.
    """
    k = parse_k(k)
    if depth is not None and depth != len(k):
        raise InputError("depth must equal the length of the pasting sequence")
    if len(k) > 40:
        raise InputError("depth is limited to 40")
    nodes = [ChainNode(0, 1, "sink")]
    edges = []
    sink = nodes[0]
    for ki in k:
        tau = sink.period
        if ki == 0:
            sink.kind = "saddle_fixed_exchanged"
            new = ChainNode(len(nodes), 2 * tau, "sink")
            nodes.append(new)
            edges.append((sink.orbit_id, new.orbit_id))
        else:
            sink.kind = "stabilizing_sink_fixed"
            saddle = ChainNode(len(nodes), 3 * tau, "saddle", anchored_to=sink.orbit_id)
            new = ChainNode(len(nodes) + 1, 3 * tau, "sink")
            nodes.extend([saddle, new])
            edges.append((saddle.orbit_id, new.orbit_id))
        sink = new
    tail = len(k) == 0 or k[-1] == 0
    return ChainGraph(nodes, edges, k, tail)


def chain_period_set(graph: ChainGraph) -> set:
    return {n.period for n in graph.nodes}


def tau_sequence(k) -> list:
    """tau_i = prod_(j <= i) (2 + k_j), starting with tau_0 = 1."""
    out = [1]
    for ki in parse_k(k):
        out.append(out[-1] * (2 + ki))
    return out


# --------------------------------------------------------------------------
# odometers


@dataclass(frozen=True)
class AdicInteger:
    radices: tuple
    digits: tuple

    def __post_init__(self):
        r = tuple(int(v) for v in self.radices)
        d = tuple(int(v) for v in self.digits)
        if len(r) != len(d):
            raise InputError("radices and digits must have the same length")
        if any(v < 2 for v in r):
            raise InputError("radices must be >= 2")
        if any(not 0 <= di < ri for di, ri in zip(d, r)):
            raise InputError(f"digits {d} out of range for radices {r}")
        object.__setattr__(self, "radices", r)
        object.__setattr__(self, "digits", d)

    @classmethod
    def zero(cls, radices):
        return cls(tuple(radices), (0,) * len(radices))

    def value(self) -> int:
        v, scale = 0, 1
        for d, r in zip(self.digits, self.radices):
            v += d * scale
            scale *= r
        return v


def adic_successor(x: AdicInteger) -> AdicInteger:
    """Add one at the first digit with carries; the last carry wraps to zero."""
    digits = list(x.digits)
    for j, r in enumerate(x.radices):
        digits[j] += 1
        if digits[j] < r:
            break
        digits[j] = 0
    return AdicInteger(x.radices, tuple(digits))


def cylinder_frequency(radices, k: int, N: int) -> float:
    """Fraction of the first N successor iterates of 0 whose first k digits vanish."""
    radices = tuple(int(r) for r in radices)
    if not 0 <= k <= len(radices):
        raise InputError("level k must be between 0 and the number of digits")
    tau = int(np.prod(radices[:k], dtype=np.int64)) if k else 1
    if N < tau:
        raise InputError(f"N = {N} is smaller than the cylinder period {tau}")
    x = AdicInteger.zero(radices)
    hits = 0
    for _ in range(N):
        if all(d == 0 for d in x.digits[:k]):
            hits += 1
        x = adic_successor(x)
    return hits / N


# --------------------------------------------------------------------------
# odometer law along the renormalization cascade


@dataclass(frozen=True)
class LevelReport:
    level: int
    period: int
    violations: int
    steps: int
    frequency: float

    @property
    def frequency_bound(self):
        return self.period / self.steps if self.steps else float("inf")

    def to_dict(self):
        return {
            "level": self.level,
            "period": self.period,
            "violations": self.violations,
            "steps": self.steps,
            "frequency": self.frequency,
            "frequency_bound": self.frequency_bound,
        }


@dataclass(frozen=True)
class OdometerReport:
    a: float
    levels: list
    translates: dict = field(repr=False)
    truncated: Optional[str] = None

    @property
    def total_violations(self):
        return sum(lv.violations for lv in self.levels)

    def to_dict(self):
        return {
            "a": self.a,
            "levels": [lv.to_dict() for lv in self.levels],
            "translates": {str(k): v for k, v in self.translates.items()},
            "truncated": self.truncated,
        }


def renormalization_intervals(a: float, k_max: int) -> list:
    """I_1 ... I_(k_max) in original coordinates from nested dichotomy certificates."""
    f = Quadratic(a)
    maps, certs = renorm_chain(f, k_max)
    out = []
    for g, cert in zip(maps, certs):
        if g is f:
            lo, hi = cert.p_prime, cert.p
        else:
            lo, hi = sorted((float(g.to_base(cert.p_prime)), float(g.to_base(cert.p))))
        out.append((lo, hi))
    return out


def cycle_translates(a: float, interval, period: int) -> list:
    """f^i(I) for 0 <= i < period, as closed intervals.

    I contains the turning point and its translates do not, so f^i on I is
    f^(i-1) (monotone) after f (unimodal): f^i(I) is the hull of the images
    of the two endpoints and the turning point.
    """
    f = Quadratic(a)
    pts = np.array([interval[0], interval[1], 0.5])
    out = [tuple(interval)]
    for i in range(1, period):
        img = iterate(f, pts, i)
        out.append((float(img.min()), float(img.max())))
    return out


def odometer_conjugacy_check(a: float, k_max: int = 4, N: int = 10_000, tol: float = 1e-12) -> OdometerReport:
    """Code the turning-point orbit by the cycle of translates at each level.

    The odometer law says the index of the translate visited advances by
    one (mod 2^k) at every step; each failure counts as a violation.
    """
    if k_max < 1:
        raise InputError("k_max must be >= 1")
    intervals = renormalization_intervals(a, k_max)
    xs = np.empty(N)
    x = np.array([0.5])
    f = Quadratic(a)
    for t in range(N):
        xs[t] = x[0]
        x = f._iterate(x, 1)
    levels = []
    translates = {}
    truncated = None
    for k, I in enumerate(intervals, start=1):
        period = 2**k
        tr = cycle_translates(a, I, period)
        translates[k] = [list(t) for t in tr]
        lo = np.array([t[0] for t in tr]) - tol
        hi = np.array([t[1] for t in tr]) + tol
        inside = (xs[:, None] >= lo[None, :]) & (xs[:, None] <= hi[None, :])
        found = inside.any(axis=1)
        steps = N
        if not found.all():
            steps = int(np.argmin(found))
            truncated = f"orbit left the tracked intervals at step {steps} (level {k})"
        code = np.argmax(inside[:steps], axis=1)
        violations = int(np.count_nonzero((code[1:] - code[:-1]) % period != 1))
        freq = float(np.count_nonzero(code == 0)) / steps if steps else float("nan")
        levels.append(LevelReport(k, period, violations, steps, freq))
    return OdometerReport(float(a), levels, translates, truncated)

"""The zero-entropy dichotomy for unimodal maps and the renormalization operator.

A unimodal map with zero entropy either sends every orbit to a fixed point
(when f(c) <= c) or admits an interval I = (p', p) around the turning point
with f(I) disjoint from I and f^2(I) inside I.  In the second case the
rescaled return map H o f^2 o H^-1 is again unimodal and the construction
can be repeated.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import interval as iv
from .errors import CertificateError, EntropyGateError, InputError, RenormlabError
from .maps import MapSpec, Rescaled, evaluate, turning_point
from .rootfind import bisect
from .serialize import hexed
from .symbolic import GATE_N_MAX, GATE_THRESHOLD, lap_entropy

FLAG_TOL = 1e-9
FIXED_GRID = 4096
FLAGS = ("disjoint", "invariant", "return_unimodal", "fc2_inside")


@dataclass(frozen=True)
class RenormCertificate:
    p_prime: float
    p: float
    c: float
    period: int
    checks: dict
    slack: float = FLAG_TOL

    @property
    def interval(self):
        return self.p_prime, self.p

    @property
    def valid(self) -> bool:
        return all(self.checks.get(k, False) for k in FLAGS) and self.p_prime < self.c < self.p

    def to_dict(self) -> dict:
        d = {"period": self.period, "checks": dict(self.checks), "slack": self.slack}
        d.update(hexed("p_prime", self.p_prime))
        d.update(hexed("p", self.p))
        d.update(hexed("c", self.c))
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RenormCertificate":
        def num(key):
            return float.fromhex(d[key + "_hex"]) if key + "_hex" in d else float(d[key])

        return cls(num("p_prime"), num("p"), num("c"), int(d["period"]), dict(d["checks"]), float(d.get("slack", FLAG_TOL)))


@dataclass(frozen=True)
class ConvergesToFixed:
    fixed_point: float

    def to_dict(self):
        return {"variant": "converges_to_fixed", **hexed("fixed_point", self.fixed_point)}


@dataclass(frozen=True)
class Renormalizable:
    certificate: RenormCertificate

    def to_dict(self):
        return {"variant": "renormalizable", "certificate": self.certificate.to_dict()}


DichotomyResult = Union[ConvergesToFixed, Renormalizable]


def entropy_gate(f: MapSpec, n_max: int = GATE_N_MAX, threshold: float = GATE_THRESHOLD):
    """Raise EntropyGateError unless the lap-count entropy estimate is below threshold."""
    est = lap_entropy(f, n_max)
    if not est.value < threshold:
        raise EntropyGateError(
            f"lap entropy {est.value:.4g} is not below {threshold}; map is not in the zero-entropy regime",
            entropy=est.value,
            n_max=n_max,
        )
    return est


def _scalar(f, x):
    return float(f._eval(np.array([x]))[0])


def _largest_fixed_below(f, c, tol):
    # f(0) >= 0 and f(c) <= c, so the last grid sign change of f(x) - x on
    # [0, c] brackets the largest fixed point there
    xs = np.linspace(0.0, c, FIXED_GRID + 1)
    g = f._eval(xs) - xs
    if g[-1] >= 0.0:
        # f(c) = c up to rounding
        return float(c)
    k = int(np.nonzero(g >= 0)[0].max())
    if g[k] == 0.0:
        return float(xs[k])
    lo, hi = bisect(lambda x: _scalar(f, x) - x, float(xs[k]), float(xs[k + 1]), tol)
    return 0.5 * (lo + hi)


def _check_flags(f, p_prime, p, c):
    """Evaluate the four certificate flags; returns (checks, slack).

    f(p) = p makes f(I) and I touch at p, so the closed-interval tests are
    decided up to a tolerance: FLAG_TOL, or the width of the enclosure of
    f^2 at the endpoints if larger.  That width is the rounding slack of the
    interval arithmetic, which grows with the depth of a rescaled map.
    """
    pts = np.array([p_prime, c, p])
    e1 = iv.enclose_iterate(f, pts, pts, 1)
    e2 = iv.enclose_iterate(f, pts, pts, 2)
    slack = max(FLAG_TOL, float((e1[1] - e1[0]).max()), float((e2[1] - e2[0]).max()))
    checks = {}
    # f(I) sits on the far side of p: only its lower end can meet I
    f_lo, _ = iv.enclose_range(f, p_prime, p, 1)
    checks["disjoint"] = bool(f_lo >= p - slack)
    g_lo, g_hi = iv.enclose_range(f, p_prime, p, 2)
    checks["invariant"] = bool(g_lo >= p_prime - slack and g_hi <= p + slack)
    checks["fc2_inside"] = bool(e2[0][1] >= p_prime - slack and e2[1][1] <= p + slack)
    # f is unimodal with turning point c in I, and f(I) lies in [c, 1]
    # where f is monotone, so f^2 on I is unimodal.  A grid scan of the
    # rescaled return map would be swamped by rounding once its height is
    # tiny, which happens just past every superstable parameter.
    checks["return_unimodal"] = bool(p_prime < c < p and f_lo >= c)
    return checks, slack


def zero_entropy_dichotomy(f: MapSpec, tol: float = 0.0, gate: bool = True, c: Optional[float] = None) -> DichotomyResult:
    """Decide which side of the dichotomy a zero-entropy unimodal map is on.

    With f(c) <= c the largest fixed point in [0, c] attracts everything.
    Otherwise the certificate interval is (p', p): p is the fixed point on
    the decreasing branch and p' the point of the increasing branch with
    f(p') = p (or 0 when f(0) >= p).  Bisection leaves p' on the side where
    f(p') >= p, so I is approximated from inside.

    ``c`` may be passed when the turning point is already known (as it is
    for a renormalized map); otherwise it is located and unimodality is
    checked.  f(c) within rounding of c counts as f(c) <= c.
    """
    if c is None:
        c, ok = turning_point(f)
        if not ok:
            raise InputError("map is not unimodal")
    if gate:
        entropy_gate(f)
    fc = evaluate(f, c)
    e_lo, e_hi = iv.enclose(f, np.array([c]), np.array([c]))
    if fc <= c + float(e_hi[0] - e_lo[0]):
        return ConvergesToFixed(_largest_fixed_below(f, c, tol))
    p_lo, p_hi = bisect(lambda x: _scalar(f, x) - x, c, 1.0, tol)
    p = p_lo
    if _scalar(f, 0.0) >= p:
        p_prime = 0.0
    else:
        _, p_prime = bisect(lambda x: _scalar(f, x) - p, 0.0, c, tol)
    if not p_prime < c < p:
        # f(c) exceeds c by less than the flat top of f can resolve
        raise CertificateError(
            "certificate interval does not resolve the turning point at float precision",
            flag="resolution",
            p_prime=p_prime,
            p=p,
        )
    checks, slack = _check_flags(f, p_prime, p, c)
    cert = RenormCertificate(p_prime, p, c, 2, checks, slack)
    for name in FLAGS:
        if not checks[name]:
            raise CertificateError(
                f"certificate flag '{name}' failed; map is not in the zero-entropy regime",
                flag=name,
                p_prime=p_prime,
                p=p,
            )
    return Renormalizable(cert)


def renorm_operator(f: MapSpec, cert: RenormCertificate) -> Rescaled:
    """R(f) = H o f^2 o H^-1 with H reversing orientation from I onto [0, 1]."""
    if not cert.valid:
        bad = [k for k in FLAGS if not cert.checks.get(k, False)]
        raise CertificateError("invalid certificate", failed=bad)
    try:
        return Rescaled(f, (cert.p_prime, cert.p), 2, -1)
    except InputError as exc:
        # the certificate held within its slack, but the rescaled map is
        # already below rounding level
        raise CertificateError(f"renormalized map lost to rounding: {exc}", flag="resolution") from exc


def next_turning_point(cert: RenormCertificate) -> float:
    """Turning point H(c) of the renormalized map."""
    return (cert.p - cert.c) / (cert.p - cert.p_prime)


def renorm_depth(f: MapSpec, max_depth: int = 12, tol: float = 0.0):
    """Count renormalizations until the converging-to-fixed case appears.

    Returns ``(depth, capped)``.  Only the original map passes the entropy
    gate: renormalizing doubles entropy, so zero entropy is inherited.
    """
    g = f
    c = None
    depth = 0
    while depth < max_depth:
        try:
            res = zero_entropy_dichotomy(g, tol, gate=(depth == 0), c=c)
        except RenormlabError as exc:
            if hasattr(exc, "info"):
                exc.info["depth"] = depth
            exc.args = (f"{exc.args[0]} (at depth {depth})",) + exc.args[1:]
            raise
        if isinstance(res, ConvergesToFixed):
            return depth, False
        g = renorm_operator(g, res.certificate)
        c = next_turning_point(res.certificate)
        depth += 1
    return depth, True


def renorm_chain(f: MapSpec, levels: int, tol: float = 0.0):
    """Certificates and renormalized maps for ``levels`` steps (for odometer checks)."""
    maps, certs = [f], []
    c = None
    for k in range(levels):
        res = zero_entropy_dichotomy(maps[-1], tol, gate=(k == 0), c=c)
        if isinstance(res, ConvergesToFixed):
            raise InputError(f"map is only {k} times renormalizable, {levels} levels requested")
        certs.append(res.certificate)
        maps.append(renorm_operator(maps[-1], res.certificate))
        c = next_turning_point(res.certificate)
    return maps, certs


# --------------------------------------------------------------------------
# period sets


@dataclass(frozen=True)
class PeriodVerdict:
    valid: bool
    mode: str
    finite: tuple
    tails: dict  # odd part m -> (k_min, k_max): m * 2**k for k_min <= k <= k_max
    reason: Optional[str] = None

    def reconstruct(self) -> set:
        out = set(self.finite)
        for m, (k0, k1) in self.tails.items():
            out.update(m * 2**k for k in range(k0, k1 + 1))
        return out

    def to_dict(self):
        return {
            "valid": self.valid,
            "mode": self.mode,
            "finite": list(self.finite),
            "tails": {str(m): list(r) for m, r in self.tails.items()},
            "reason": self.reason,
        }


def _odd_part(n):
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    return n, k


def period_set_validator(periods, mode: str = "interval_zero_entropy", threshold: int = 8) -> PeriodVerdict:
    """Check a period set against the zero-entropy shapes.

    interval mode: every period is a power of two.
    disc mode: periods above ``threshold`` with the same odd part m are
    m * 2**k for a gap-free run of exponents; the rest form the finite part.
    """
    ps = sorted({int(p) for p in periods})
    if not ps:
        raise InputError("period set is empty")
    if ps[0] < 1:
        raise InputError("periods must be positive integers")
    if mode in ("interval", "interval_zero_entropy"):
        bad = [p for p in ps if p & (p - 1)]
        reason = f"not powers of two: {bad}" if bad else None
        return PeriodVerdict(not bad, "interval_zero_entropy", tuple(ps), {}, reason)
    if mode not in ("disc", "disc_zero_entropy"):
        raise InputError(f"unknown mode {mode!r}")
    finite = [p for p in ps if p <= threshold]
    groups = {}
    for p in ps:
        if p > threshold:
            m, k = _odd_part(p)
            groups.setdefault(m, []).append(k)
    tails, reason = {}, None
    for m in sorted(groups):
        ks = sorted(groups[m])
        if ks != list(range(ks[0], ks[-1] + 1)):
            missing = sorted(set(range(ks[0], ks[-1] + 1)) - set(ks))
            reason = f"odd part {m}: exponents {missing} missing from the doubling run"
            break
        tails[m] = (ks[0], ks[-1])
    return PeriodVerdict(reason is None, "disc_zero_entropy", tuple(finite), tails, reason)

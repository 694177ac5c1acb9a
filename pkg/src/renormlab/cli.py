"""Command-line interface.

Results go to stdout (or ``--out``) as JSON, or CSV where a table makes
sense.  Exit status is 0 on success, 2 for bad input and 3 when a
computation could not reach a trustworthy answer; in the last two cases a
single JSON line describing the problem is written to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import henon as hn
from . import kernels
from . import maps as mp
from . import periodic as po
from . import prototype as pt
from . import renorm as rn
from . import symbolic as sy
from .errors import InputError, NumericalFailure, RenormlabError
from .serialize import csv_text, dumps, hexed, ppm_bytes

# every library operation and the one subcommand that exposes it
OP_TO_SUBCOMMAND = {
    "evaluate": "eval",
    "orbit": "orbit",
    "turning_point": "turning-point",
    "itinerary": "itinerary",
    "covering_graph": "covering",
    "misiurewicz_certificate": "misiurewicz",
    "graph_entropy": "graph-entropy",
    "lap_entropy": "entropy",
    "separation_count": "separation",
    "zero_entropy_dichotomy": "dichotomy",
    "renorm_operator": "renormalize",
    "renorm_depth": "renorm-depth",
    "period_set_validator": "validate-periods",
    "localize_periodic": "localize",
    "find_periods": "periods",
    "superstable_parameters": "cascade",
    "find_a_star": "a-star",
    "henon_step": "henon step",
    "classify_orbit_fate": "henon orbit",
    "henon_periodic_orbits": "henon periods",
    "henon_cascade": "henon cascade",
    "mild_dissipation": "henon gate",
    "attractor_sample": "henon attractor",
    "build_prototype_chain": "prototype chain",
    "chain_period_set": "prototype periods",
    "adic_successor": "odometer step",
    "cylinder_frequency": "odometer freq",
    "odometer_conjugacy_check": "odometer conjugacy",
    "bifurcation": "bifurcation",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _diagnose("input_error", message, 2)


def _diagnose(kind, message, code, **info):
    sys.stderr.write(json.dumps({"error": kind, "message": message, **info}, default=str, sort_keys=True) + "\n")
    raise SystemExit(code)


# --------------------------------------------------------------------------
# argument helpers


def _floats(text, n=None):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from exc
    if n is not None and len(vals) != n:
        raise InputError(f"expected {n} numbers, got {text!r}")
    return vals


def _intervals(text):
    out = [tuple(_floats(chunk, 2)) for chunk in text.split(";") if chunk.strip()]
    if not out:
        raise InputError("no intervals given")
    return out


def _ints(text):
    try:
        return [int(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _add_map(p):
    g = p.add_argument_group("map")
    g.add_argument("--a", type=float, default=None, help="quadratic parameter (x -> a x (1 - x))")
    g.add_argument("--breakpoints", default=None, help='piecewise-linear map, e.g. "0,0;0.5,1;1,0"')
    g.add_argument("--tent", type=float, default=None, metavar="PEAK", help="symmetric tent map with this peak value")


def _map(args, default_a=None):
    given = [v is not None for v in (args.a, args.breakpoints, args.tent)]
    if sum(given) > 1:
        raise InputError("give only one of --a, --breakpoints, --tent")
    if args.breakpoints is not None:
        return mp.parse_breakpoints(args.breakpoints)
    if args.tent is not None:
        return mp.tent(args.tent)
    a = args.a if args.a is not None else default_a
    if a is None:
        raise InputError("a map is required: --a, --breakpoints or --tent")
    return mp.Quadratic(a)


def _emit(args, obj=None, table=None, raw=None):
    """Write JSON (default), CSV (when a table exists and --format csv) or raw bytes."""
    if raw is not None:
        data = raw
    elif args.format == "csv":
        if table is None:
            raise InputError(f"{args.cmd_name} has no CSV form; use --format json")
        data = table.encode()
    else:
        data = dumps(obj).encode()
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


# --------------------------------------------------------------------------
# handlers


def cmd_eval(args):
    f = _map(args)
    xs = _floats(args.x)
    ys = [mp.evaluate(f, x) for x in xs]
    _emit(args, {"map": mp.describe(f), "x": xs, "y": ys, "y_hex": [float(y).hex() for y in ys]},
          csv_text(["x", "y"], zip(xs, ys)))


def cmd_orbit(args):
    f = _map(args)
    seg = mp.orbit(f, args.x0, args.n)
    vals = seg.values.tolist()
    _emit(args, {"map": mp.describe(f), "x0": seg.start, "values": vals, "values_hex": [v.hex() for v in vals]},
          csv_text(["k", "x"], enumerate(vals)))


def cmd_turning_point(args):
    f = _map(args)
    c, ok = mp.turning_point(f)
    _emit(args, {"map": mp.describe(f), "unimodal": ok, **hexed("c", c)})


def cmd_itinerary(args):
    f = _map(args)
    it = sy.itinerary(f, args.x0, _intervals(args.partition), args.n)
    _emit(args, {"symbols": list(it.symbols), "partition": [list(p) for p in it.partition], "undefined_at": it.undefined_at})


def cmd_covering(args):
    f = _map(args)
    g = sy.covering_graph(f, _intervals(args.intervals), args.ell, args.max_depth)
    _emit(args, {"map": mp.describe(f), **g.to_dict()})


def cmd_misiurewicz(args):
    f = _map(args)
    if args.intervals:
        g = sy.covering_graph(f, _intervals(args.intervals), args.ell)
        pair = sy.misiurewicz_certificate(g)
        h = sy.graph_entropy(g)
        _emit(args, {"map": mp.describe(f), "graph": g.to_dict(), "certificate": list(pair) if pair else None,
                     "entropy_lower_bound": h if pair else None})
        return
    res = sy.search_misiurewicz(f, sy.interval_pair_grid(args.pairs), args.max_ell)
    _emit(args, {
        "map": mp.describe(f),
        "found": res.found,
        "intervals": [list(p) for p in res.intervals] if res.found else None,
        "iterate": res.iterate,
        "pairs_tried": res.pairs_tried,
        "inconclusive": res.inconclusive,
    })


def cmd_graph_entropy(args):
    if args.matrix is not None:
        rows = [r for r in args.matrix.split(";") if r.strip()]
        A = np.array([_ints(r) for r in rows], dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InputError("matrix must be square")
        if np.any(A < 0):
            raise InputError("matrix entries must be non-negative")
        h = sy.graph_entropy(A) / args.ell
        _emit(args, {"matrix": A.astype(int).tolist(), "iterate": args.ell, "entropy": h})
        return
    if args.intervals is None:
        raise InputError("give --matrix, or a map with --intervals")
    g = sy.covering_graph(_map(args), _intervals(args.intervals), args.ell)
    _emit(args, {"graph": g.to_dict(), "entropy": sy.graph_entropy(g)})


def cmd_entropy(args):
    f = _map(args)
    if args.method == "lap":
        est = sy.lap_entropy(f, args.n_max)
    else:
        est = sy.separation_entropy(f, args.eps, args.n_max, args.grid)
    _emit(args, {"map": mp.describe(f), "method": est.method, "value": est.value, "n_used": est.n_used,
                 "raw": list(est.raw)},
          csv_text(["n", "count"], enumerate(est.raw, start=1)))


def cmd_separation(args):
    f = _map(args)
    n = sy.separation_count(f, args.eps, args.n, args.grid)
    _emit(args, {"map": mp.describe(f), "eps": args.eps, "n": args.n, "grid": args.grid, "count": n})


def cmd_dichotomy(args):
    f = _map(args)
    res = rn.zero_entropy_dichotomy(f)
    _emit(args, {"map": mp.describe(f), **res.to_dict()})


def cmd_renormalize(args):
    f = _map(args)
    res = rn.zero_entropy_dichotomy(f)
    if not isinstance(res, rn.Renormalizable):
        raise NumericalFailure("map is not renormalizable: all orbits converge to a fixed point",
                               fixed_point=res.fixed_point)
    g = rn.renorm_operator(f, res.certificate)
    c, ok = mp.turning_point(g)
    ts = np.linspace(0.0, 1.0, args.samples)
    vals = mp.evaluate(g, ts)
    _emit(args, {"map": mp.describe(g), "certificate": res.certificate.to_dict(), "unimodal": ok, **hexed("c", c),
                 "samples": {"t": ts.tolist(), "value": vals.tolist()}},
          csv_text(["t", "value"], zip(ts.tolist(), vals.tolist())))


def cmd_renorm_depth(args):
    f = _map(args)
    depth, capped = rn.renorm_depth(f, args.max_depth)
    _emit(args, {"map": mp.describe(f), "depth": depth, "capped": capped, "max_depth": args.max_depth})


def cmd_validate_periods(args):
    v = rn.period_set_validator(_ints(args.periods), args.mode, args.threshold)
    _emit(args, v.to_dict())


def cmd_localize(args):
    f = _map(args)
    x0, n = args.x0, args.n
    if x0 is None:
        # draw starting points until one returns close within max_n steps
        rng = np.random.default_rng(args.seed)
        for _ in range(100_000):
            cand = float(rng.uniform(0.0, 1.0))
            vals = mp.orbit(f, cand, args.max_n).values
            close = np.nonzero((np.abs(vals[1:] - cand) < args.close) & (np.abs(vals[1:] - cand) > 1e-6))[0]
            if len(close):
                x0, n = cand, int(close[0]) + 1
                break
        else:
            raise NumericalFailure("no close return found from random starting points", seed=args.seed)
    elif n is None:
        raise InputError("--n is required with --x0")
    pt_ = po.localize_periodic(f, x0, n, args.tol, args.close)
    _emit(args, {"map": mp.describe(f), **pt_.to_dict()})


def cmd_periods(args):
    f = _map(args)
    recs = po.find_periods(f, args.max_period, args.grid)
    _emit(args, {"map": mp.describe(f), "periods": sorted(po.period_set(recs)), "orbits": [r.to_dict() for r in recs]},
          csv_text(["period", "x", "multiplier", "stability"],
                   [(r.period, r.points[0], r.multiplier, r.stability) for r in recs]))


def cmd_cascade(args):
    rec = po.superstable_parameters(args.levels)
    _emit(args, rec.to_dict(), rec.to_csv())
    if rec.truncated:
        raise NumericalFailure(f"cascade truncated: {rec.truncated}")


def cmd_a_star(args):
    rep = po.find_a_star(args.tol, args.levels, cross_check=not args.no_cross_check, lap_n=args.lap_n)
    _emit(args, rep.to_dict())


def _henon(args):
    return hn.HenonParams(args.a, args.b)


def cmd_henon_step(args):
    P = _henon(args)
    x, y = _floats(args.point, 2)
    pts = [(x, y)]
    for _ in range(args.n):
        pts.append(hn.henon_step(P, pts[-1]))
    _emit(args, {"a": P.a, "b": P.b, "points": [list(p) for p in pts]}, csv_text(["x", "y"], pts))


def cmd_henon_orbit(args):
    P = _henon(args)
    fate = hn.classify_orbit_fate(P, _floats(args.start, 2), args.n_max, args.radius)
    _emit(args, {"a": P.a, "b": P.b, **fate.to_dict()})


def cmd_henon_periods(args):
    P = _henon(args)
    recs = hn.henon_periodic_orbits(P, args.max_period, hn.seed_lattice(args.seeds, args.box))
    _emit(args, {"a": P.a, "b": P.b, "periods": sorted({r.period for r in recs}), "orbits": [r.to_dict() for r in recs]},
          csv_text(["period", "x", "y", "stability"], [(r.period, *r.points[0], r.stability) for r in recs]))


def cmd_henon_cascade(args):
    rec = hn.henon_cascade(args.b, _floats(args.a_range, 2), args.levels)
    out = rec.to_dict()
    out["b"] = args.b
    out["mild_dissipation"] = hn.mild_dissipation(args.b)
    if not out["mild_dissipation"]:
        sys.stderr.write(json.dumps({"warning": "|b| >= 1/4: outside the mild-dissipation regime", "b": args.b}) + "\n")
    _emit(args, out, rec.to_csv())
    if rec.truncated:
        raise NumericalFailure(f"cascade truncated: {rec.truncated}")


def cmd_henon_gate(args):
    _emit(args, {"b": args.b, "mild_dissipation": hn.mild_dissipation(args.b)})


def cmd_henon_attractor(args):
    P = _henon(args)
    s = hn.attractor_sample(P, _floats(args.start, 2), args.transient, args.keep)
    _emit(args, {"a": P.a, "b": P.b, "bbox": list(s.bbox), "diameter": s.diameter, "points": s.points.tolist()},
          s.to_csv())


def cmd_prototype_chain(args):
    g = pt.build_prototype_chain(args.k)
    if args.format == "dot":
        _emit(args, raw=g.to_dot().encode())
    else:
        _emit(args, g.to_dict())


def cmd_prototype_periods(args):
    g = pt.build_prototype_chain(args.k)
    ps = sorted(pt.chain_period_set(g))
    v = rn.period_set_validator(ps, "disc", args.threshold)
    _emit(args, {"k": args.k, "periods": ps, "validator": v.to_dict()})


def cmd_odometer_step(args):
    x = pt.AdicInteger(tuple(_ints(args.radices)), tuple(_ints(args.digits)))
    states = [x]
    for _ in range(args.n):
        states.append(pt.adic_successor(states[-1]))
    _emit(args, {"radices": list(x.radices), "states": [list(s.digits) for s in states]})


def cmd_odometer_freq(args):
    radices = _ints(args.radices)
    tau = int(np.prod(radices[: args.k])) if args.k else 1
    freq = pt.cylinder_frequency(radices, args.k, args.N)
    _emit(args, {"radices": radices, "k": args.k, "N": args.N, "frequency": freq, "target": 1.0 / tau,
                 "bound": tau / args.N})


def cmd_odometer_conjugacy(args):
    a = args.a
    if a is None:
        a = po.superstable_parameters(args.superstable).params[args.superstable]
    rep = pt.odometer_conjugacy_check(a, args.k_max, args.N)
    _emit(args, rep.to_dict())
    if rep.truncated:
        raise NumericalFailure(rep.truncated)


def cmd_bifurcation(args):
    if not args.a_max > args.a_min:
        raise InputError("--a-max must exceed --a-min")
    if not (0 <= args.a_min and args.a_max <= 4):
        raise InputError("parameter range must lie inside [0, 4]")
    if args.width < 1 or args.height < 2:
        raise InputError("image must be at least 1 x 2 pixels")
    a_vals = np.linspace(args.a_min, args.a_max, args.width)
    mask = kernels.bifurcation(a_vals, args.height, args.transient, args.plot, args.x0)
    _emit(args, raw=ppm_bytes(mask.astype(bool)))


# --------------------------------------------------------------------------
# parser


class _Formatter(argparse.ArgumentDefaultsHelpFormatter):
    """Show the default of every option, including those without help text."""

    def _format_action(self, action):
        if action.option_strings and not action.help and action.default is not argparse.SUPPRESS:
            action.help = "(default: %(default)s)"
        return super()._format_action(action)


def build_parser():
    fmt = _Formatter

    def common(formats=("json", "csv")):
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--out", default=None, help="output file; stdout when omitted")
        c.add_argument("--format", choices=list(formats), default="json", help="output format")
        c.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
        return c

    p = _Parser(prog="renormlab", description="Renormalization and entropy toolkit for interval and Hénon maps.",
                formatter_class=fmt)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, handler, help_, parent=sub, formats=("json", "csv")):
        sp = parent.add_parser(name, help=help_, description=help_, parents=[common(formats)], formatter_class=fmt)
        sp.set_defaults(handler=handler, cmd_name=name)
        return sp

    sp = add("eval", cmd_eval, "evaluate a map at points")
    _add_map(sp)
    sp.add_argument("--x", required=True, help="comma-separated points in [0, 1]")

    sp = add("orbit", cmd_orbit, "orbit segment x0, f(x0), ..., f^n(x0)")
    _add_map(sp)
    sp.add_argument("--x0", type=float, required=True)
    sp.add_argument("--n", type=int, default=20)

    sp = add("turning-point", cmd_turning_point, "turning point and unimodality flag")
    _add_map(sp)

    sp = add("itinerary", cmd_itinerary, "symbolic itinerary over a partition")
    _add_map(sp)
    sp.add_argument("--x0", type=float, required=True)
    sp.add_argument("--partition", default="0,0.5;0.5,1", help="intervals lo,hi separated by ';'")
    sp.add_argument("--n", type=int, default=20)

    sp = add("covering", cmd_covering, "covering matrix of f^ell over disjoint intervals")
    _add_map(sp)
    sp.add_argument("--intervals", required=True, help='e.g. "0.2,0.45;0.55,0.8"')
    sp.add_argument("--ell", type=int, default=1)
    sp.add_argument("--max-depth", type=int, default=20)

    sp = add("misiurewicz", cmd_misiurewicz, "positive-entropy certificate (given intervals or grid search)")
    _add_map(sp)
    sp.add_argument("--intervals", default=None, help="check these intervals instead of searching")
    sp.add_argument("--ell", type=int, default=2)
    sp.add_argument("--pairs", type=int, default=50, help="number of grid pairs to search")
    sp.add_argument("--max-ell", type=int, default=8)

    sp = add("graph-entropy", cmd_graph_entropy, "log spectral radius of a covering matrix divided by ell")
    _add_map(sp)
    sp.add_argument("--intervals", default=None, help="build the covering graph of the map over these intervals")
    sp.add_argument("--matrix", default=None, help='use this matrix instead, rows separated by ";", e.g. "1,1;1,0"')
    sp.add_argument("--ell", type=int, default=1)

    sp = add("entropy", cmd_entropy, "entropy estimate from lap counts or separated sets")
    _add_map(sp)
    sp.add_argument("--method", choices=["lap", "separation"], default="lap")
    sp.add_argument("--n-max", type=int, default=20)
    sp.add_argument("--eps", type=float, default=0.25)
    sp.add_argument("--grid", type=int, default=4097)

    sp = add("separation", cmd_separation, "greedy (n, eps)-separated set size")
    _add_map(sp)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--grid", type=int, default=4097)

    sp = add("dichotomy", cmd_dichotomy, "zero-entropy dichotomy for a unimodal map")
    _add_map(sp)

    sp = add("renormalize", cmd_renormalize, "apply the renormalization operator once")
    _add_map(sp)
    sp.add_argument("--samples", type=int, default=257, help="points at which to tabulate R(f)")

    sp = add("renorm-depth", cmd_renorm_depth, "number of successive renormalizations")
    _add_map(sp)
    sp.add_argument("--max-depth", type=int, default=12)

    sp = add("validate-periods", cmd_validate_periods, "check a period set against zero-entropy shapes")
    sp.add_argument("--periods", required=True, help="comma-separated periods")
    sp.add_argument("--mode", choices=["interval", "disc"], default="interval")
    sp.add_argument("--threshold", type=int, default=8)

    sp = add("localize", cmd_localize, "periodic point inside a close return")
    _add_map(sp)
    sp.add_argument("--x0", type=float, default=None, help="start point (random from --seed when omitted)")
    sp.add_argument("--n", type=int, default=None, help="return time")
    sp.add_argument("--max-n", type=int, default=20, help="longest return time tried for random starts")
    sp.add_argument("--close", type=float, default=po.CLOSE_RETURN)
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("periods", cmd_periods, "periodic orbits up to a maximal period")
    _add_map(sp)
    sp.add_argument("--max-period", type=int, default=16)
    sp.add_argument("--grid", type=int, default=2**16)

    sp = add("cascade", cmd_cascade, "superstable parameters of the quadratic family")
    sp.add_argument("--family", choices=["quadratic"], default="quadratic")
    sp.add_argument("--levels", type=int, default=10)

    sp = add("a-star", cmd_a_star, "accumulation point of the period-doubling cascade")
    sp.add_argument("--tol", type=float, default=1e-7)
    sp.add_argument("--levels", type=int, default=10)
    sp.add_argument("--lap-n", type=int, default=1000, help="lap-count depth for the cross-check")
    sp.add_argument("--no-cross-check", action="store_true", help="skip the lap-entropy bisection")

    hp = sub.add_parser("henon", help="Hénon family (x, y) -> (1 - a x^2 + y, b x)")
    hsub = hp.add_subparsers(dest="henon_cmd", required=True, parser_class=_Parser)

    def henon_args(sp, a=1.4):
        sp.add_argument("--a", type=float, default=a)
        sp.add_argument("--b", type=float, default=0.3)

    sp = add("step", cmd_henon_step, "iterate the Hénon map n times", hsub)
    henon_args(sp)
    sp.add_argument("--point", default="0,0")
    sp.add_argument("--n", type=int, default=1)

    sp = add("orbit", cmd_henon_orbit, "escape / periodic / undecided verdict for one orbit", hsub)
    henon_args(sp)
    sp.add_argument("--start", default="0.35,0.35")
    sp.add_argument("--n-max", type=int, default=100_000)
    sp.add_argument("--radius", type=float, default=hn.ESCAPE_RADIUS)

    sp = add("periods", cmd_henon_periods, "periodic orbits by Newton from a seed lattice", hsub)
    henon_args(sp)
    sp.add_argument("--max-period", type=int, default=8)
    sp.add_argument("--seeds", type=int, default=64, help="lattice points per side")
    sp.add_argument("--box", type=float, default=2.0, help="lattice covers [-box, box]^2")

    sp = add("cascade", cmd_henon_cascade, "flip bifurcations of the period-2^n orbits at fixed b", hsub)
    sp.add_argument("--b", type=float, default=0.3)
    sp.add_argument("--a-range", default="0,1.5")
    sp.add_argument("--levels", type=int, default=8)

    sp = add("gate", cmd_henon_gate, "mild-dissipation predicate |b| < 1/4", hsub)
    sp.add_argument("--b", type=float, required=True)

    sp = add("attractor", cmd_henon_attractor, "sample an orbit after a transient", hsub)
    henon_args(sp)
    sp.add_argument("--start", default="0.35,0.35")
    sp.add_argument("--transient", type=int, default=1000)
    sp.add_argument("--keep", type=int, default=10_000)

    pp = sub.add_parser("prototype", help="symbolic prototype models")
    psub = pp.add_subparsers(dest="proto_cmd", required=True, parser_class=_Parser)
    sp = add("chain", cmd_prototype_chain, "chain graph of a pasting sequence", psub, formats=("json", "dot"))
    sp.add_argument("--k", required=True, help="pasting sequence of 0s and 1s, e.g. 001")
    sp = add("periods", cmd_prototype_periods, "period set of a prototype chain", psub)
    sp.add_argument("--k", required=True)
    sp.add_argument("--threshold", type=int, default=1, help="disc-mode validator threshold")

    op = sub.add_parser("odometer", help="mixed-radix odometers")
    osub = op.add_subparsers(dest="odo_cmd", required=True, parser_class=_Parser)
    sp = add("step", cmd_odometer_step, "successor iterates of an adic integer", osub)
    sp.add_argument("--radices", required=True)
    sp.add_argument("--digits", required=True)
    sp.add_argument("--n", type=int, default=1)
    sp = add("freq", cmd_odometer_freq, "visit frequency of the level-k cylinder", osub)
    sp.add_argument("--radices", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp = add("conjugacy", cmd_odometer_conjugacy, "odometer law for the turning-point orbit", osub)
    sp.add_argument("--a", type=float, default=None, help="parameter (default: superstable a_n)")
    sp.add_argument("--superstable", type=int, default=5, help="n for the default a_n")
    sp.add_argument("--k-max", type=int, default=4)
    sp.add_argument("--N", type=int, default=10_000)

    sp = add("bifurcation", cmd_bifurcation, "bifurcation diagram of the quadratic family as a P6 PPM")
    sp.add_argument("--a-min", type=float, default=2.9)
    sp.add_argument("--a-max", type=float, default=4.0)
    sp.add_argument("--width", type=int, default=800)
    sp.add_argument("--height", type=int, default=600)
    sp.add_argument("--transient", type=int, default=1000)
    sp.add_argument("--plot", type=int, default=400, help="points plotted per column")
    sp.add_argument("--x0", type=float, default=0.5)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.handler(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except InputError as exc:
        try:
            _diagnose("input_error", str(exc), 2)
        except SystemExit as e:
            return int(e.code)
    except NumericalFailure as exc:
        try:
            _diagnose("numerical_failure", str(exc), 3, type=type(exc).__name__, **exc.info)
        except SystemExit as e:
            return int(e.code)
    except RenormlabError as exc:
        try:
            _diagnose("numerical_failure", str(exc), 3, type=type(exc).__name__)
        except SystemExit as e:
            return int(e.code)
    return 0


if __name__ == "__main__":
    sys.exit(main())

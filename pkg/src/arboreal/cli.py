"""Batch command-line front end.  Every command reads a job config (file
and/or flags; flags win), runs one pipeline, and emits a deterministic JSON
report with a provenance block.

Exit codes: 0 completed run (negative mathematical findings included),
1 invalid input, 2 budget exhaustion (partial report still emitted).
"""

import argparse
import json
import os
import sys

from . import __version__
from .errors import (DegreeBudgetExceeded, NeedsExtension, NotCubicError,
                     ParseError, PreconditionError, TimeBudgetExceeded,
                     TooLarge, UndefinedError)
from .maps import CubicMap, as_map, normalize_cubic
from .polynomials import UniPoly
from .rationals import fmt_rational, parse_rational
from .serialize import dumps, jsonable
from .util import TimeBudget

DEFAULT_BUDGET_SECONDS = 60.0
DEFAULT_DEGREE_CAP = 243
DEFAULT_PRIME_LO = 1000
DEFAULT_PRIME_HI = 100_000

CONFIG_KEYS = ("map", "beta", "basepoints", "levels", "depth", "n",
               "prime_lo", "prime_hi", "seed", "budget_seconds", "eps",
               "point", "c", "d", "bound", "gamma", "mode")


def _load_config(args):
    cfg = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read config file: {exc}", token=args.config)
        unknown = set(cfg) - set(CONFIG_KEYS)
        if unknown:
            raise ParseError(f"unknown config keys: {sorted(unknown)}",
                             token=next(iter(sorted(unknown))))
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if "budget_seconds" not in cfg:
        env = os.environ.get("ARBOREAL_BUDGET_SECONDS")
        cfg["budget_seconds"] = float(env) if env else DEFAULT_BUDGET_SECONDS
    cfg.setdefault("seed", 0)
    return cfg


def _parse_map(spec):
    """Accept "x^3-12*x+2", {"a": "p/q", "b": "p/q"}, or a degree-descending
    coefficient list."""
    if isinstance(spec, dict):
        if not {"a", "b"} <= set(spec):
            raise ParseError("map object needs keys 'a' and 'b'", token=str(spec))
        return CubicMap(parse_rational(str(spec["a"])),
                        parse_rational(str(spec["b"])))
    if isinstance(spec, list):
        coeffs = [parse_rational(str(c)) for c in spec]
        return as_map(UniPoly(list(reversed(coeffs))))
    if isinstance(spec, str):
        return as_map(UniPoly.parse(spec))
    raise ParseError(f"cannot interpret map spec {spec!r}", token=str(spec))


def _require_cubic(m, beta):
    """Coerce to normal form, transporting beta through the conjugation."""
    if isinstance(m, CubicMap):
        return m, beta, None
    g = m.poly()
    if g.degree != 3:
        raise NotCubicError(
            f"this command needs a cubic map (got degree {g.degree})")
    norm = normalize_cubic(g[3], g[2], g[1], g[0])
    new_beta = norm.lam * beta + norm.mu if beta is not None else None
    conj = {"lambda": fmt_rational(norm.lam), "mu": fmt_rational(norm.mu),
            "normal_form": str(norm.map.poly()),
            "note": "input conjugated to normal form; beta transported "
                    "through sigma(x) = lambda*x + mu"}
    return norm.map, new_beta, conj


def _provenance(command, cfg):
    safe = {}
    for k, v in cfg.items():
        safe[k] = v if isinstance(v, (str, int, float, bool, list, dict)) else str(v)
    return {"tool": "arboreal", "version": __version__, "command": command,
            "seed": int(cfg.get("seed", 0)), "config": safe}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_analyze(cfg):
    from .galois import finite_index_report
    m = _parse_map(cfg["map"])
    beta = parse_rational(str(cfg.get("beta", "1")))
    m, beta, conj = _require_cubic(m, beta)
    levels = int(cfg.get("levels", 2))
    budget = TimeBudget(float(cfg["budget_seconds"]))
    rep = finite_index_report(m, beta, levels, budget=budget).as_dict()
    if conj:
        rep["conjugation"] = conj
    return rep


_cmd_certify = _cmd_analyze  # same engine; certify emphasizes the levels


def _cmd_primes(cfg):
    from .ramification import cross_condition_witnesses, find_condition_R_primes
    m = _parse_map(cfg["map"])
    beta = parse_rational(str(cfg.get("beta", "1")))
    m, beta, conj = _require_cubic(m, beta)
    n = int(cfg.get("n", 1))
    budget = TimeBudget(float(cfg["budget_seconds"]))
    out = {"map": {"a": fmt_rational(m.a), "b": fmt_rational(m.b),
                   "poly": str(m.poly())},
           "n": n}
    if cfg.get("basepoints"):
        alphas = _parse_points(cfg["basepoints"])
        results = cross_condition_witnesses(m, alphas, n, budget)
        out["basepoints"] = [fmt_rational(a) for a in alphas]
        out["witnesses"] = [
            {"alpha": fmt_rational(r.alpha), "prime": r.prime,
             "found": r.found, "reason": r.reason,
             "condition_R": jsonable(r.r_report) if r.r_report else None,
             "condition_U": [{"alpha": fmt_rational(a2),
                              "report": jsonable(rep)}
                             for a2, rep in r.u_reports]}
            for r in results]
    else:
        out["beta"] = fmt_rational(beta)
        ws = find_condition_R_primes(m, beta, n, budget)
        out["witnesses"] = [{"prime": w.prime, "n": w.n,
                             "condition_R": jsonable(w.report)} for w in ws]
    if conj:
        out["conjugation"] = conj
    return out


def _parse_points(spec):
    if isinstance(spec, str):
        parts = [s for s in spec.split(",") if s.strip()]
    else:
        parts = list(spec)
    return [parse_rational(str(s)) for s in parts]


def _tree_dict(shape):
    return {
        "beta": fmt_rational(shape.beta),
        "depth": shape.depth,
        "level_sizes": list(shape.level_sizes),
        "vertices": [
            {"id": v.vid, "level": v.level, "parent": v.parent,
             "mark": v.mark, "conjugacy_tag": list(v.tag),
             "value": fmt_rational(v.value) if v.value is not None else None}
            for v in shape.vertices],
        "factor_levels": [
            [{"poly": str(lf.poly), "children_per_vertex": lf.children_per_vertex,
              "critical_hit": lf.critical_hit, "parent_factor": lf.parent_factor}
             for lf in level]
            for level in shape.factor_levels],
        "text": render_tree_text(shape),
    }


def render_tree_text(shape):
    """Indented plain-text rendering (values for rational vertices, conjugacy
    tags otherwise)."""
    lines = []

    def label(v):
        base = fmt_rational(v.value) if v.value is not None else \
            f"<{shape.factor_levels[v.tag[0]][v.tag[1]].poly}>"
        if v.mark is not None:
            base += " *"
        return base

    def walk(vid, indent):
        v = shape.vertex(vid)
        lines.append("  " * indent + label(v))
        for c in v.children:
            walk(c, indent + 1)

    walk(shape.root, 0)
    return "\n".join(lines)


def _cmd_tree(cfg):
    from .trees import (index_trajectory, is_odd_map, plus_minus_pairs,
                        rooted_aut_order, stunted_tree)
    from .galois import eventual_stability_evidence
    m = _parse_map(cfg["map"])
    beta = parse_rational(str(cfg.get("beta", "0")))
    depth = int(cfg.get("depth", 2))
    shape = stunted_tree(m, beta, depth)
    out = _tree_dict(shape)
    out["map"] = str(m.poly())
    out["rooted_aut_order"] = str(rooted_aut_order(shape))
    ev = eventual_stability_evidence(m, beta, depth, "stunted")
    out["strict_factor_counts"] = list(ev.counts)
    out["tree_stability_note"] = ev.note or "counts bounded in the window"
    mode = cfg.get("mode", "stunted")
    out["index_trajectory"] = jsonable(index_trajectory(m, beta, depth, mode))
    if is_odd_map(m):
        out["odd_symmetry"] = plus_minus_pairs([shape])
    return out


def _cmd_multitree(cfg):
    from .trees import build_multitree
    m = _parse_map(cfg["map"])
    pts = _parse_points(cfg.get("basepoints") or cfg.get("beta") or "")
    if not pts:
        raise ParseError("multitree needs basepoints", token="basepoints")
    depth = int(cfg.get("depth", 2))
    bound = int(cfg.get("bound", 8))
    mt = build_multitree(m, pts, depth, bound)
    return {
        "map": str(m.poly()),
        "basepoints": [fmt_rational(b) for b in mt.basepoints],
        "classes": [[fmt_rational(b) for b in cls]
                    for cls in mt.partition.classes],
        "representatives": [fmt_rational(r)
                            for r in mt.partition.representatives],
        "partition_conclusive": mt.partition.conclusive,
        "partition_notes": list(mt.partition.notes),
        "components": [
            {"representative": fmt_rational(c.representative),
             "marks": [{"beta": fmt_rational(b), "level": lvl}
                       for b, lvl in c.marks],
             "aut_order_fixing_marks": str(c.aut_order),
             "tree": _tree_dict(c.shape)}
            for c in mt.components],
        "aut_order_root_fixing": str(mt.aut_order_root_fixing),
        "h_alternative": str(mt.h_alt),
        "aut_order_alternative": str(mt.aut_order_alt),
        "semantics_note": (
            "root-fixing semantics: every basepoint is a root, so |H| = 1; "
            "the alternative order allows permuting components with "
            "isomorphic marked shapes"),
        "flags": jsonable(mt.flags),
    }


def _cmd_sample(cfg):
    from .galois import frobenius_sample, reference_cycle_distribution
    from .errors import TooLarge as _TL
    m = _parse_map(cfg["map"])
    beta = parse_rational(str(cfg.get("beta", "1")))
    n = int(cfg.get("n", 1))
    lo = int(cfg.get("prime_lo", DEFAULT_PRIME_LO))
    hi = int(cfg.get("prime_hi", DEFAULT_PRIME_HI))
    dist = frobenius_sample(m, beta, n, lo, hi)
    out = {"map": str(m.poly()), "beta": fmt_rational(beta), "n": n,
           "prime_lo": lo, "prime_hi": hi,
           "distribution": dist.as_dict(),
           "proportions": {"+".join(map(str, k)): v
                           for k, v in sorted(dist.proportions().items())}}
    try:
        ref = reference_cycle_distribution(m.degree, n)
        out["reference"] = ref.as_dict()
        out["tv_distance_to_reference"] = dist.tv_distance(ref)
    except _TL:
        out["reference"] = None
    return out


def _cmd_heights(cfg):
    from .heights import canonical_height, transform_bound, weil_height
    m = _parse_map(cfg["map"])
    pt = parse_rational(str(cfg.get("point", cfg.get("beta", "1"))))
    eps = float(cfg.get("eps", 1e-9))
    tb = transform_bound(m)
    hv = canonical_height(m, pt, eps)
    return {"map": str(m.poly()), "point": fmt_rational(pt),
            "weil_height": weil_height(pt),
            "transform_bound": {"c0": tb.c0,
                                "escape_threshold": tb.escape_threshold},
            "canonical_height": {"value": hv.value,
                                 "error_bound": hv.error_bound,
                                 "preperiodic": hv.preperiodic},
            "eps": eps}


def _cmd_gcd_series(cfg):
    from .heights import gcd_height_series, prime_support_sum
    m = _parse_map(cfg["map"])
    m, _, conj = _require_cubic(m, None)
    c = parse_rational(str(cfg.get("c", "1")))
    d = parse_rational(str(cfg.get("d", "1")))
    N = int(cfg.get("levels", cfg.get("n", 3)))
    budget = TimeBudget(float(cfg["budget_seconds"]))
    series = gcd_height_series(m, c, d, N, budget)
    out = {
        "map": {"a": fmt_rational(m.a), "b": fmt_rational(m.b),
                "poly": str(m.poly())},
        "c": fmt_rational(c), "d": fmt_rational(d),
        "canonical_height_a": series.comparison_base,
        "series": [{"n": e.n, "sum": e.finite_part, "comparison": e.ratio,
                    "undefined": e.undefined} for e in series.entries],
        "flags": jsonable(series.flags),
        "note": ("the conjectural gcd bound is reported for comparison only, "
                 "never asserted"),
    }
    if cfg.get("gamma") is not None:
        gamma = parse_rational(str(cfg["gamma"]))
        beta = parse_rational(str(cfg.get("beta", "0")))
        n = int(cfg.get("n", N))
        out["prime_support"] = {
            "gamma": fmt_rational(gamma), "beta": fmt_rational(beta), "n": n,
            "sum": prime_support_sum(m, gamma, beta, n, budget=budget)}
    if conj:
        out["conjugation"] = conj
    return out


COMMANDS = {
    "analyze": _cmd_analyze,
    "certify": _cmd_certify,
    "primes": _cmd_primes,
    "tree": _cmd_tree,
    "multitree": _cmd_multitree,
    "sample": _cmd_sample,
    "heights": _cmd_heights,
    "gcd-series": _cmd_gcd_series,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="arboreal",
        description="Exact desk-scale certificates for iterated-preimage "
                    "Galois towers of cubic maps over Q.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON job config; flags override it")
        sp.add_argument("--map", help='polynomial, e.g. "x^3-12*x+2"')
        sp.add_argument("--beta")
        sp.add_argument("--basepoints", help="comma-separated rationals")
        sp.add_argument("--levels", type=int)
        sp.add_argument("--depth", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--prime-lo", dest="prime_lo", type=int)
        sp.add_argument("--prime-hi", dest="prime_hi", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--budget-seconds", dest="budget_seconds", type=float)
        sp.add_argument("--eps", type=float)
        sp.add_argument("--point")
        sp.add_argument("--c")
        sp.add_argument("--d")
        sp.add_argument("--gamma")
        sp.add_argument("--bound", type=int)
        sp.add_argument("--mode", choices=["full", "stunted"])
        sp.add_argument("--out", help="write the report here instead of stdout")
    return ap


def run(command, cfg):
    """Dispatch; returns (exit_code, report dict)."""
    report = None
    code = 0
    try:
        report = COMMANDS[command](cfg)
    except (TimeBudgetExceeded, DegreeBudgetExceeded) as exc:
        code = 2
        report = {"error": str(exc), "partial": jsonable(getattr(exc, "partial", None))}
    except (ParseError, NotCubicError, NeedsExtension, PreconditionError,
            UndefinedError, TooLarge, ValueError) as exc:
        code = 1
        report = {"error": str(exc)}
        if isinstance(exc, ParseError) and exc.token is not None:
            report["token"] = exc.token
        if isinstance(exc, NeedsExtension) and exc.minimal_poly is not None:
            report["minimal_poly"] = str(exc.minimal_poly)
    report["provenance"] = _provenance(command, cfg)
    return code, report


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _load_config(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    code, report = run(args.command, cfg)
    text = dumps(report)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.  Every command prints one report carrying a version
header and the resolved configuration, and exits 0 iff its checks pass."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .polar import cached

SCHEMA_VERSION = 1
TIMING_KEYS = {"elapsed_s"}


class CliError(Exception):
    pass


# -- serialisation -------------------------------------------------------------


def to_jsonable(obj, timings: bool = False):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, timings) for k, v in obj.items() if timings or k not in TIMING_KEYS}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v, timings) for v in items]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict(), timings)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def _text(report: dict) -> str:
    lines = [f"polarcert {report['version']}  command: {report['command']}  ok: {report['ok']}"]
    for k, v in report["result"].items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
            if len(v) > 160:
                v = v[:157] + "..."
        lines.append(f"  {k}: {v}")
    return "\n".join(lines)


# -- commands ------------------------------------------------------------------


def _space(a):
    return cached(a.family, a.d, a.q)


def cmd_space(a):
    S = _space(a)
    res = {
        "space": S.name,
        "points": S.n,
        "rank": S.rank,
        "field_order": S.q,
        "ovoid_number": S.ovoid_number,
        "points_per_generator": S.points_per_generator,
        "generators": len(S.generators),
        "table_point_count": S.table_point_count(),
    }
    return res["points"] == res["table_point_count"], res


def cmd_srg(a):
    from .srg import params_for_space, params_from_graph

    S = _space(a)
    table = params_for_space(S)
    measured = params_from_graph(S)
    res = {"space": S.name, "table": table.as_dict(), "measured": measured.as_dict()}
    res.update(n=measured.n, k=measured.k, lam=measured.lam, mu=measured.mu, eigenvalues=[measured.posev, measured.negev])
    ok = table.core() == measured.core() and all(measured.identities().values())
    return ok, res


def cmd_intriguing(a):
    from .intriguing import classify, generator_vector, std_ovoid, std_ovoid_m, std_tight_i, std_tightset

    S = _space(a)
    x = a.point
    checks = {
        "std_ovoid": (classify(std_ovoid(S, x)), "weighted-ovoid", std_ovoid_m(S)),
        "std_tightset": (classify(std_tightset(S, x)), "weighted-tight", std_tight_i(S)),
        "generator": (classify(generator_vector(S, S.generators[0])), "weighted-tight", 1),
    }
    res = {"space": S.name, "point": S.label(x)}
    ok = True
    for name, (c, kind, val) in checks.items():
        good = c.kind == kind and c.value == val
        ok &= good
        res[name] = {"classification": str(c), "expected": f"{kind}({val})", "ok": good}
    return ok, res


def cmd_group(a):
    if a.action == "appendix":
        from .certify.h54 import appendix_group, appendix_space, aligned_orbits

        S = appendix_space()
        U = appendix_group(S)
        orbits = aligned_orbits(S, U)
        res = {"order": U.order, "closed": U.verify_closure(), "orbits": len(orbits), "orbit_sizes": [len(o) for o in orbits]}
        return res["order"] == 144 and res["closed"] and res["orbits"] == 34, res
    from .group import point_stabiliser_transitivity

    S = _space(a)
    orbit = point_stabiliser_transitivity(S, 0, samples=a.samples, seed=a.seed)
    k = S.adj[0].bit_count()
    res = {"space": S.name, "point": S.label(0), "orbit_of_collinear_point": len(orbit), "collinear_points": k}
    return len(orbit) == k, res


def cmd_search(a):
    from . import search

    if a.action == "job":
        if not a.checkpoint:
            raise CliError("search job needs --checkpoint")
        st = search.checkpointed_search(a.family, a.d, a.q, a.checkpoint, a.budget_nodes)
        return st["result"] != "incomplete", st
    S = _space(a)
    m = 1 if a.action == "ovoid" else a.m
    r = search.find_movoid(S, m, max_nodes=a.budget_nodes, timeout=a.timeout, parallel=a.threads)
    res = {"space": S.name, "m": m, **r.to_dict()}
    if r.witness:
        res["witness_points"] = search.witness_lines(S, r.witness)
    return r.status != "timeout", res


def cmd_certify(a):
    if a.action == "h54":
        from .certify.h54 import h54_certificate

        rep = h54_certificate()
        return rep.ok, rep.to_dict()
    if a.action == "orbit-system":
        from .certify.h54 import (
            H54Config,
            appendix_group,
            appendix_space,
            derive_configuration,
            o_set_functionals,
            aligned_orbits,
            solve_orbit_system,
        )
        from .certify import appendix as A

        S = appendix_space()
        U = appendix_group(S)
        cfg = H54Config(S, U, aligned_orbits(S, U), list(A.WEIGHTS))
        derive_configuration(cfg)
        rep = solve_orbit_system(cfg, functionals=o_set_functionals(cfg))
        d = rep.to_dict()
        ok = rep.integer_infeasible and rep.unconstrained_feasible and rep.family_rank == rep.invariant_dimension
        return ok, d
    if a.action == "q9":
        from .certify.q9 import q9_choices, q9_report

        res = q9_report(a.q, a.seed)
        if a.choices:
            res["choices"] = q9_choices(a.choices, a.q, a.seed or 0)
        ok = res["ok"] and all(c["ok"] for c in res.get("choices", []))
        return ok, res
    if a.action == "bounds":
        from .certify.bounds import bounds, monotone

        rep = bounds(a.family, a.qmax, a.dmax)
        res = rep.to_dict()
        res["monotone_in_q"] = monotone(a.family)
        return res["monotone_in_q"], res
    if a.action == "threelines":
        from .certify.threelines import verify_threelines

        rep = verify_threelines(a.q, samples=a.samples, seed=a.seed or 0)
        return rep.ok, rep.to_dict()
    raise CliError(f"unknown certify action {a.action}")


def cmd_regress(a):
    from .acceptance import run_all

    numbers = [int(x) for x in a.criteria.split(",")] if a.criteria else None
    results = run_all(numbers)
    for r in results:
        print(r.line(), file=sys.stderr)
    res = {"criteria": [r.to_dict() for r in results]}
    ok = all(r.ok for r in results)
    if a.skip_long:
        res["h54_exhaustive"] = "skipped"
    else:
        from .search import find_ovoid

        r = find_ovoid(cached("hermitian", 6, 2), parallel=a.threads)
        res["h54_exhaustive"] = r.to_dict()
        print(f"H(5,4) exhaustive ovoid search: {r.status} ({r.nodes} nodes)", file=sys.stderr)
        ok = ok and r.status == "unsat"
    return ok, res


COMMANDS = {
    "space": cmd_space,
    "srg": cmd_srg,
    "intriguing": cmd_intriguing,
    "group": cmd_group,
    "search": cmd_search,
    "certify": cmd_certify,
    "regress": cmd_regress,
}


# -- parser --------------------------------------------------------------------


def _space_args(p, family="hermitian", d=4, q=2):
    p.add_argument("--family", default=family, help="W, H, Q, Qplus, Qminus or the full family name")
    p.add_argument("--d", type=int, default=d, help="vector space dimension")
    p.add_argument("--q", type=int, default=q, help="q as in the family name (H uses GF(q^2))")


def build_parser() -> argparse.ArgumentParser:
    def globals_(parser, default):
        # accepted before or after the subcommand; the subparser copy only overrides when given
        parser.add_argument("--format", choices=("json", "text"), default=default or "json")
        parser.add_argument("--out", default=default, help="write the report to this file as well as stdout")
        parser.add_argument("--threads", type=int, default=default or 1, help="worker processes for searches")
        parser.add_argument("--timings", action="store_true", default=default or False,
                            help="keep wall-clock fields (reports are then not byte-stable)")

    common = argparse.ArgumentParser(add_help=False)
    globals_(common, argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="polarcert", description=__doc__)
    p.add_argument("--version", action="version", version=f"polarcert {__version__}")
    globals_(p, None)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    s = sub.add_parser("space", help="summary of a polar space")
    _space_args(s)

    s = sub.add_parser("srg", help="collinearity graph parameters")
    s.add_argument("action", choices=("verify",))
    _space_args(s)

    s = sub.add_parser("intriguing", help="classify the standard intriguing sets of a space")
    _space_args(s)
    s.add_argument("--point", type=int, default=0)

    s = sub.add_parser("group", help="group computations")
    s.add_argument("action", choices=("appendix", "transitivity"))
    _space_args(s)
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--seed", type=int, default=1)

    s = sub.add_parser("search", help="exhaustive ovoid / m-ovoid search")
    s.add_argument("action", choices=("ovoid", "movoid", "job"))
    _space_args(s)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--budget-nodes", type=int, default=None)
    s.add_argument("--timeout", type=float, default=None, help="seconds")
    s.add_argument("--checkpoint", help="JSON progress file for 'job'")

    s = sub.add_parser("certify", help="certificates")
    s.add_argument("action", choices=("h54", "orbit-system", "q9", "bounds", "threelines"))
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--choices", type=int, default=0, help="q9: extra random configurations")
    s.add_argument("--family", default="hermitian", choices=("hermitian", "hyperbolic", "parabolic"))
    s.add_argument("--qmax", type=int, default=5)
    s.add_argument("--dmax", type=int, default=None)
    s.add_argument("--samples", type=int, default=1000, help="threelines: random triples when q > 2")

    s = sub.add_parser("regress", help="run the acceptance suite")
    s.add_argument("--skip-long", action="store_true", help="skip the exhaustive H(5,4) search")
    s.add_argument("--criteria", help="comma separated subset, e.g. 1,6,7")
    return p


def run(argv=None) -> tuple[int, dict]:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in vars(args).items() if k not in ("out", "format")}
    try:
        ok, result = COMMANDS[args.command](args)
        error = None
    except Exception as exc:  # noqa: BLE001 - reported in the structured output
        ok, result, error = False, {}, f"{type(exc).__name__}: {exc}"
    report = {
        "schema": SCHEMA_VERSION,
        "artifact": "polarcert",
        "version": __version__,
        "command": args.command,
        "config": config,
        "ok": bool(ok),
        "result": to_jsonable(result, args.timings),
    }
    if error:
        report["error"] = error
    text = json.dumps(report, indent=1, sort_keys=True) if args.format == "json" else _text(report)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return (0 if ok else 1), report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())

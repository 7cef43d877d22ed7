"""Command-line front end.

Every command prints a JSON RunReport (or a flat text rendering with
``--format text``). Exit codes: 0 for pass or evidence-only, 1 for a failed
verification or a domain error, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import catalog, fixedpoint, sequences, topology
from .core import (
    INF,
    ExtendedNaturals,
    FiniteDomain,
    SamplePlan,
    Space,
    as_fraction,
    check_axioms,
    classify,
    load_space_file,
    minimal_coefficient,
    to_jsonable,
)
from .errors import BadParams, QpblError
from .reproduce import REGISTRY, reproduce

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------


def _params(items) -> dict:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {item!r}")
        out[key] = value
    return out


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QPBL_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"QPBL_SEED must be an integer, got {env!r}") from None


def _space(args, positional: str | None = None) -> Space:
    ident = positional or args.space
    path = args.space_file
    if ident and Path(ident).suffix == ".json" and path is None:
        path, ident = ident, None
    if path:
        return load_space_file(path)
    if not ident:
        raise UsageError("give --space <id> or --space-file <path>")
    return catalog.make_space(ident, **_params(args.param))


def parse_point(space: Space, text: str):
    """Decimal literal on intervals, label on finite domains, integer or inf on extended naturals."""
    dom = space.domain
    if isinstance(dom, FiniteDomain):
        for p in dom.points:
            if str(p) == text:
                return p
        raise UsageError(f"{text!r} is not a point label of {space.name}")
    if isinstance(dom, ExtendedNaturals):
        if text.lower() == INF:
            return INF
        try:
            return int(text)
        except ValueError:
            raise UsageError(f"{text!r} is not a positive integer or inf") from None
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{text!r} is not a decimal literal") from None


def _number(space: Space, text: str):
    """Radii and tolerances: exact on exact spaces, float otherwise."""
    try:
        value = as_fraction(text)
    except BadParams:
        raise UsageError(f"{text!r} is not a number") from None
    return value if space.exact else float(value)


def _sequence(space: Space, text: str, horizon: int) -> sequences.SequenceSpec:
    kind, *rest = text.split(":")
    if kind == "const" and len(rest) == 1:
        return sequences.constant(parse_point(space, rest[0]), horizon)
    if kind == "recip" and not rest:
        return sequences.reciprocal(horizon)
    if kind == "alt" and len(rest) == 2:
        return sequences.alternating(parse_point(space, rest[0]), parse_point(space, rest[1]), horizon)
    if kind == "orbit" and len(rest) == 2:
        return fixedpoint.orbit(catalog.make_mapping(rest[0]), parse_point(space, rest[1]), horizon)
    raise UsageError(f"unknown sequence {text!r}; use const:<p>, recip, alt:<p>:<q> or orbit:<map>:<x0>")


def _evidence_status(passed: bool, evidence: str) -> str:
    if not passed:
        return "fail"
    return "pass" if evidence == "exhaustive" else "evidence-only"


# ---------------------------------------------------------------------------
# Commands. Each returns (status, payload).
# ---------------------------------------------------------------------------


def cmd_verify(args, plan):
    space = _space(args)
    s = as_fraction(args.s) if args.s and space.exact else (float(args.s) if args.s else None)
    reports = check_axioms(space, s, plan)
    passed = all(r.passed for r in reports)
    payload = {"space": space.describe(), "s": space.coefficient_s if s is None else s,
               "reports": [r.to_dict() for r in reports]}
    return _evidence_status(passed, reports[0].evidence), payload


def cmd_min_s(args, plan):
    space = _space(args)
    est = minimal_coefficient(space, plan)
    payload = {"space": space.name, "claimed_s": space.coefficient_s, **est.to_dict()}
    return _evidence_status(True, est.evidence), payload


def cmd_classify(args, plan):
    space = _space(args)
    c = classify(space, plan)
    evidence = c.reports["QPbl1"].evidence
    return _evidence_status(True, evidence), {"space": space.name, **c.to_dict()}


def cmd_ball(args, plan):
    space = _space(args)
    center = parse_point(space, args.center)
    b = topology.ball(space, center, _number(space, args.eps))
    payload = {"space": space.name, "center": center, "radius": b.radius, "bound": b.bound}
    if b.explicit_set is not None:
        payload["members"] = sorted(b.explicit_set, key=lambda p: str(p))
    if args.point:
        payload["membership"] = [{"point": y, "member": b.membership(y)}
                                 for y in (parse_point(space, t) for t in args.point)]
    if args.inner:
        inner = topology.inner_delta_details(space, center, b.radius, parse_point(space, args.inner), plan)
        payload["inner"] = inner.to_dict()
    return "pass", payload


def cmd_topology(args, plan):
    space = _space(args, args.target)
    top = topology.enumerate_topology(space)
    return "pass", {"space": space.name, "valid": top.is_valid(), **top.to_dict()}


def cmd_separation(args, plan):
    space = _space(args, args.target)
    top = topology.enumerate_topology(space)
    return "pass", {"space": space.name, **topology.separation_class(top).to_dict()}


def cmd_seq_profile(args, plan):
    space = _space(args)
    seq = _sequence(space, args.seq, args.horizon)
    tol = float(args.tol)
    payload = {"space": space.name, "sequence": seq.name, "horizon": seq.horizon,
               "cauchy": sequences.cauchy_profile(space, seq, tol).to_dict()}
    if args.target is not None:
        payload["limit"] = sequences.limit_profile(space, seq, parse_point(space, args.target), tol).to_dict()
    return "evidence-only", payload


def cmd_fix_solve(args, plan):
    space = _space(args) if (args.space or args.space_file) else catalog.default_host(args.map)
    mapping = catalog.make_mapping(args.map)
    x0 = parse_point(space, args.x0)
    tol = None if args.tol is None else _number(space, args.tol)
    kw = {"tol": tol, "max_iter": args.max_iter, "plan": plan}
    theorem = args.theorem
    if theorem == "phi":
        cert = fixedpoint.phi_contraction_solve(space, mapping, fixedpoint.parse_scalar(_need(args.phi, "--phi")),
                                                x0, **kw)
    elif theorem == "lambda":
        cert = fixedpoint.lambda_contraction_solve(space, mapping, as_fraction(_need(args.lam, "--lambda")), x0, **kw)
    elif theorem == "phi-psi":
        cert = fixedpoint.phi_psi_solve(space, mapping, fixedpoint.parse_scalar(_need(args.phi, "--phi")),
                                        fixedpoint.parse_scalar(_need(args.psi, "--psi")), x0, **kw)
    elif theorem == "expansive":
        a = [float(as_fraction(_need(getattr(args, f"a{i}"), f"--a{i}"))) for i in range(1, 5)]
        cert = fixedpoint.expansive_solve(space, mapping, fixedpoint.ExpansiveParams(*a), x0, **kw)
    else:
        cert = fixedpoint.expansive_solve(space, mapping, x0=x0, K=as_fraction(_need(args.K, "--K")), **kw)
    evidence = cert.hypothesis_report[0].evidence if cert.hypothesis_report else "exhaustive"
    return _evidence_status(True, evidence), {"space": space.name, "map": mapping.name, **cert.to_dict()}


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this theorem")
    return value


def cmd_catalog_list(args, plan):
    return "pass", {"entries": [{"id": e.id, "kind": e.kind, "summary": e.summary, "source": e.source}
                                for e in catalog.entries()]}


def cmd_catalog_show(args, plan):
    e = catalog.lookup(args.id)
    payload = {"id": e.id, "kind": e.kind, "summary": e.summary, "source": e.source}
    if e.kind == "space":
        space = catalog.make_space(e.id)
        payload.update(space.describe())
    return "pass", payload


def cmd_reproduce(args, plan):
    if args.all == bool(args.example):
        raise UsageError("give one example id or --all")
    ids = list(REGISTRY) if args.all else [args.example]
    results = [reproduce(i, plan) for i in ids]
    passed = all(r["passed"] for r in results)
    payload = results[0] if not args.all else {"examples": results, "count": len(results)}
    return ("pass" if passed else "fail"), payload


# ---------------------------------------------------------------------------
# Parser and runner
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="sampling seed (falls back to QPBL_SEED, then 0)")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--space", default=None, help="catalog id")
    p.add_argument("--space-file", default=None, help="finite space in JSON")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE", help="catalog parameter")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="qpbl", description="Quasi-partial b-metric-like spaces: checks, topology, fixed points.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", parents=[common], help="check QPbl1-QPbl4")
    p.add_argument("--s", default=None, help="coefficient (default: the space's claimed s)")
    p.set_defaults(func=cmd_verify)

    sub.add_parser("min-s", parents=[common], help="minimal coefficient").set_defaults(func=cmd_min_s)
    sub.add_parser("classify", parents=[common], help="family membership").set_defaults(func=cmd_classify)

    p = sub.add_parser("ball", parents=[common], help="ball membership and inner radius")
    p.add_argument("--center", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--point", action="append", default=[])
    p.add_argument("--inner", default=None, help="point y for an inner radius")
    p.set_defaults(func=cmd_ball)

    for name, func in (("topology", cmd_topology), ("separation", cmd_separation)):
        p = sub.add_parser(name, parents=[common], help=f"{name} of a finite space")
        p.add_argument("target", nargs="?", default=None, help="catalog id or space file")
        p.set_defaults(func=func)

    seq = sub.add_parser("seq", help="sequence diagnostics").add_subparsers(dest="sub", required=True,
                                                                             parser_class=_Parser)
    p = seq.add_parser("profile", parents=[common])
    p.add_argument("--seq", required=True)
    p.add_argument("--target", default=None)
    p.add_argument("--tol", default="1e-6")
    p.add_argument("--horizon", type=int, default=10_000)
    p.set_defaults(func=cmd_seq_profile)

    fix = sub.add_parser("fix", help="fixed-point solvers").add_subparsers(dest="sub", required=True,
                                                                          parser_class=_Parser)
    p = fix.add_parser("solve", parents=[common])
    p.add_argument("--theorem", required=True, choices=["phi", "lambda", "phi-psi", "expansive", "expansive-k"])
    p.add_argument("--map", required=True)
    p.add_argument("--x0", required=True)
    p.add_argument("--phi")
    p.add_argument("--psi")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--K")
    for i in range(1, 5):
        p.add_argument(f"--a{i}")
    p.add_argument("--tol", default=None)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.set_defaults(func=cmd_fix_solve)

    cat = sub.add_parser("catalog", help="built-in spaces and maps").add_subparsers(dest="sub", required=True,
                                                                                   parser_class=_Parser)
    cat.add_parser("list", parents=[common]).set_defaults(func=cmd_catalog_list)
    p = cat.add_parser("show", parents=[common])
    p.add_argument("id")
    p.set_defaults(func=cmd_catalog_show)

    p = sub.add_parser("reproduce", parents=[common], help="replay worked examples")
    p.add_argument("example", nargs="?", default=None)
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_reproduce)
    return parser


def _text(report: dict) -> str:
    lines = [f"command: {report['command']}", f"status: {report['status']}"]

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, v in enumerate(value):
                walk(f"{prefix}[{i}]", v)
        else:
            lines.append(f"{prefix}: {json.dumps(value)}")

    walk("", report["payload"])
    return "\n".join(lines) + "\n"


def _execute(argv):
    start = time.perf_counter()
    args = None
    try:
        args = build_parser().parse_args(argv)
        command = " ".join(filter(None, [args.command, getattr(args, "sub", None)]))
        plan = SamplePlan(seed=_seed(args))
        status, payload = args.func(args, plan)
        code = 0 if status in {"pass", "evidence-only"} else 1
    except UsageError as exc:
        report = {"schema_version": SCHEMA_VERSION, "command": None, "status": "fail",
                  "payload": {"error": "usage", "message": str(exc)}, "elapsed_ms": 0}
        return 2, report, args
    except QpblError as exc:
        status, code = "fail", 1
        payload = {"error": exc.code, "message": str(exc), "details": exc.details}
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "status": status,
        "payload": to_jsonable(payload),
        "elapsed_ms": int((time.perf_counter() - start) * 1000),
    }
    return code, report, args


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    """Execute one command; returns (exit code, report)."""
    code, report, _ = _execute(argv)
    return code, report


def main(argv: list[str] | None = None) -> int:
    code, report, args = _execute(argv)
    if code == 2:
        sys.stderr.write(f"usage error: {report['payload']['message']}\n")
        return code
    text = _text(report) if args.format == "text" else json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code

if __name__ == "__main__":
    sys.exit(main())

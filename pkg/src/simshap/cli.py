"""Command-line interface.

Features are shown 1-based (``1: 0/1``); model files use 0-based positions.
Exit codes: 0 success, 2 user/validation error, 3 internal-consistency failure.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import warnings

from .audit import audit_sweep, relevancy_mismatch, similarity_transform
from .charfn import CharFn
from .errors import InternalConsistencyError, UserError
from .io import dumps_model, parse_instance, parse_model, value_to_json
from .rational import format_rational, parse_rational
from .shapley import exact_shap, sample_shap
from .xplain import NormSpec, enumerate_explanations, find_adversarial, find_axp

EXIT_USER = 2
EXIT_INTERNAL = 3


def _features(subset) -> list:
    return [i + 1 for i in sorted(subset)]


def _fmt_set(subset) -> str:
    return "{" + ",".join(str(i) for i in _features(subset)) + "}"


def _fmt_family(family) -> str:
    return "{" + ", ".join(_fmt_set(s) for s in family) + "}"


def _parse_csv_point(text: str) -> list:
    return json.loads(f"[{text}]")


def _charfn(args) -> CharFn:
    if args.charfn == "b":
        if args.baseline is None:
            raise UserError("--charfn b requires --baseline")
        return CharFn.with_baseline(_parse_csv_point(args.baseline))
    return CharFn(args.charfn)


def _load_problem(args):
    model = parse_model(args.model)
    return parse_instance(args.instance, model)


def _emit(args, doc: dict, lines: list[str]):
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def cmd_score(args) -> int:
    problem = _load_problem(args)
    cf = _charfn(args)
    if args.approx is not None:
        estimate = sample_shap(cf, problem, args.approx, args.seed)
        rows = [(i + 1, f"{s:.6f}") for i, s in enumerate(estimate)]
        mode = "approx"
    else:
        scores = exact_shap(cf, problem)
        rows = [(i + 1, format_rational(s, args.decimal)) for i, s in enumerate(scores)]
        mode = "exact"
    _emit(args, {"charfn": cf.label, "mode": mode, "scores": {str(i): s for i, s in rows}},
          [f"charfn: {cf.label} ({mode})"] + [f"{i}: {s}" for i, s in rows])
    return 0


def cmd_explain(args) -> int:
    problem = _load_problem(args)
    if args.one_axp:
        axp = find_axp(problem)
        _emit(args, {"axp": _features(axp)}, [f"AXp: {_fmt_set(axp)}"])
        return 0
    expl = enumerate_explanations(problem)
    if args.relevancy:
        return _relevancy(args, expl)
    _emit(args, {"axps": [_features(s) for s in expl.axps], "cxps": [_features(s) for s in expl.cxps],
                 "relevant": _features(expl.relevant), "irrelevant": _features(expl.irrelevant)},
          [f"AXps: {_fmt_family(expl.axps)}", f"CXps: {_fmt_family(expl.cxps)}",
           f"relevant: {_fmt_set(expl.relevant)}", f"irrelevant: {_fmt_set(expl.irrelevant)}"])
    return 0


def _relevancy(args, expl) -> int:
    _emit(args, {"relevant": _features(expl.relevant), "irrelevant": _features(expl.irrelevant)},
          [f"relevant: {_fmt_set(expl.relevant)}", f"irrelevant: {_fmt_set(expl.irrelevant)}"])
    return 0


def cmd_relevancy(args) -> int:
    return _relevancy(args, enumerate_explanations(_load_problem(args)))


def cmd_adversarial(args) -> int:
    problem = _load_problem(args)
    norm = NormSpec(args.p, parse_rational(args.eps))
    fixed = None
    if args.fix:
        fixed = {int(tok) - 1 for tok in args.fix.split(",") if tok.strip()}
    x = find_adversarial(problem, norm, fixed)
    point = None if x is None else [value_to_json(v) for v in x]
    _emit(args, {"adversarial": point},
          ["adversarial: none" if x is None else f"adversarial: {json.dumps(point)}"])
    return 0


def cmd_audit(args) -> int:
    model = parse_model(args.model)
    cf = _charfn(args)
    delta = parse_rational(args.delta) if args.delta is not None else 0
    if args.sweep:
        points = None
    else:
        if args.instance is None:
            raise UserError("audit needs an instance file or --sweep")
        problem = parse_instance(args.instance, model)
        points, delta = [problem.point], problem.delta
    rows = audit_sweep(model, cf, delta, points)
    lines, docs = ["instance\tmismatch\twitnesses"], []
    for row in rows:
        witnesses = [f"{i + 1}>{j + 1}" for i, j, _, _ in row.report.witnesses]
        lines.append(f"{json.dumps([value_to_json(v) for v in row.point])}\t"
                     f"{int(row.report.mismatch)}\t{','.join(witnesses) or '-'}")
        docs.append({"instance": [value_to_json(v) for v in row.point], "mismatch": row.report.mismatch,
                     "witnesses": [[i + 1, j + 1] for i, j, _, _ in row.report.witnesses],
                     "scores": [format_rational(s) for s in row.scores]})
    total = sum(r.report.mismatch for r in rows)
    lines.append(f"mismatches: {total} of {len(rows)} instances")
    _emit(args, {"charfn": cf.label, "rows": docs, "mismatches": total, "instances": len(rows)}, lines)
    return 0


def cmd_transform(args) -> int:
    problem = _load_problem(args)
    text = dumps_model(similarity_transform(problem))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    ok = run_selftest(args.models, args.seed, out=sys.stdout)
    return 0 if ok else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simshap", description="Exact similarity-based SHAP scores "
                                     "and formal explanations for small discrete models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_args(p, instance_required=True):
        p.add_argument("model", help="model JSON file")
        if instance_required:
            p.add_argument("instance", help="instance JSON file ({point, delta})")
        else:
            p.add_argument("instance", nargs="?", help="instance JSON file")
        p.add_argument("--format", choices=("table", "json"), default="table")

    def charfn_args(p):
        p.add_argument("--charfn", choices=("e", "s", "a", "c", "n", "b"), default="e")
        p.add_argument("--baseline", help="baseline point for --charfn b, e.g. 0,0")

    p = sub.add_parser("score", help="Shapley scores under a characteristic function")
    problem_args(p)
    charfn_args(p)
    p.add_argument("--approx", type=int, metavar="N", help="estimate from N sampled permutations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--decimal", action="store_true", help="print decimals instead of p/q")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("explain", help="abductive and contrastive explanations")
    problem_args(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true", help="all AXps and CXps (default)")
    group.add_argument("--one-axp", action="store_true")
    group.add_argument("--relevancy", action="store_true")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("relevancy", help="relevant and irrelevant features")
    problem_args(p)
    p.set_defaults(func=cmd_relevancy)

    p = sub.add_parser("adversarial", help="search for a norm-bounded adversarial example")
    problem_args(p)
    p.add_argument("--p", default="0", choices=("0", "1", "2", "inf"))
    p.add_argument("--eps", required=True, help="radius, as an exact rational")
    p.add_argument("--fix", help="comma-separated 1-based features held at the instance value")
    p.set_defaults(func=cmd_adversarial)

    p = sub.add_parser("audit", help="relevancy-mismatch audit")
    problem_args(p, instance_required=False)
    charfn_args(p)
    p.add_argument("--sweep", action="store_true", help="use every point of the feature space as instance")
    p.add_argument("--delta", help="similarity threshold for --sweep")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("transform", help="write the similarity-predicate model")
    problem_args(p)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("selftest", help="differential check of the engine against brute-force oracles")
    p.add_argument("--models", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "approx", None) is not None and args.approx < 1:
        parser.error("--approx needs at least one permutation")
    if getattr(args, "decimal", False) and getattr(args, "approx", None) is not None:
        parser.error("--decimal applies to exact scores only")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args)
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UserError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER


if __name__ == "__main__":
    sys.exit(main())

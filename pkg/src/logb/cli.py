"""Command-line front end.

Exit codes: 0 on success (also when the smoothness criterion fails; the JSON
carries the verdict), 1 for a failed fixture, an invalid chart or a non-strict
exactification, 2 for bad input.  Errors go to stderr as
``{"error": {"kind": ..., "detail": ...}}``.
"""

import argparse
import json
import sys

from .chart import BoundaryChart, closure_binomial, free_chart, specialize_base, validate_chart
from .derham import differential_invariants, graded_affine_derham, p1_log_cech, restriction_rank_check
from .errors import LogbError, MalformedInput
from .exactify import base_change_fixture, diagonal_exactification, strictness_report
from .fixtures import run_fixtures
from .smooth import fiber_product_chart, sglatt_comparison, smoothness_verdict


def _load_chart(path, residue_char=None) -> BoundaryChart:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedInput(f"{path}: a chart must be a JSON object")
    c = BoundaryChart.from_json(data)
    if residue_char is not None:
        if residue_char < 0:
            raise MalformedInput("--residue-char must be nonnegative")
        c = c.with_residue_char(residue_char)
    return c


def _int_vector(text, what):
    try:
        v = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{what} must be a JSON integer array, got {text!r}") from exc
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise MalformedInput(f"{what} must be a JSON integer array, got {text!r}")
    return v


def cmd_validate(args):
    d = validate_chart(_load_chart(args.chart, args.residue_char))
    return d.to_json(), 0 if d.valid else 1


def cmd_smooth(args):
    c = _load_chart(args.chart, args.residue_char)
    return smoothness_verdict(c, args.assert_condition_ii).to_json(), 0


def cmd_product(args):
    c1 = _load_chart(args.chart, args.residue_char)
    c2 = _load_chart(args.chart2, args.residue_char)
    out = fiber_product_chart(c1, c2).to_json()
    cmp = sglatt_comparison(c1, c2)
    out["lattice_comparison"] = {
        "kernel_b": cmp.kernel_b.to_json(), "cokernel_b": cmp.cokernel_b.to_json(),
        "kernel_a": cmp.kernel_a.to_json(), "cokernel_a": cmp.cokernel_a.to_json(),
        "agree": cmp.agree,
    }
    return out, 0


def cmd_exactify(args):
    c = _load_chart(args.chart, args.residue_char)
    e = diagonal_exactification(c)
    strict = strictness_report(e, c)
    out = e.to_json(strict=strict.pullback_iso)
    out["strictness"] = strict.details
    out["base_change"] = base_change_fixture(c).to_json()
    return out, 0 if strict.pullback_iso else 1


def cmd_closure(args):
    if args.rho is not None:
        c = free_chart(_int_vector(args.rho, "--rho"))
    elif args.chart is not None:
        c = _load_chart(args.chart, args.residue_char)
    else:
        raise MalformedInput("closure needs --rho or a chart file")
    cl = closure_binomial(c)
    out = cl.to_json()
    out["special_fiber"] = specialize_base(cl.presentation).to_json()
    return out, 0


def cmd_derham(args):
    c = _load_chart(args.chart, args.residue_char)
    inv = differential_invariants(c)
    out = {"differentials": inv.to_json(), "restriction_check": restriction_rank_check(c)}
    if args.weight is not None:
        w = _int_vector(args.weight, "--weight")
        out["weight"] = w
        out["dims"] = list(graded_affine_derham(c, w))
    return out, 0


def cmd_p1cech(args):
    if args.weight_bound < 0:
        raise MalformedInput("--weight-bound must be nonnegative")
    return p1_log_cech(args.weight_bound).to_json(), 0


def cmd_fixtures(args):
    results = run_fixtures()
    ok = all(r.passed for r in results)
    out = {
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
        "cases": [r.to_json() for r in results],
    }
    return out, 0 if ok else 1


def _table(out) -> str:
    if "cases" in out:
        rows = [(c["id"], "PASS" if c["pass"] else "FAIL") for c in out["cases"]]
        w = max(len(r[0]) for r in rows)
        lines = [f"{'case'.ljust(w)}  result", f"{'-' * w}  ------"]
        lines += [f"{i.ljust(w)}  {s}" for i, s in rows]
        lines.append(f"{out['passed']} passed, {out['failed']} failed")
        return "\n".join(lines)
    w = max((len(k) for k in out), default=0)
    return "\n".join(f"{k.ljust(w)}  {json.dumps(v, separators=(',', ':'))}" for k, v in out.items())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--residue-char", type=int, default=None, help="override the chart's residue characteristic")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", default=None, help="also write the report to this file")

    p = argparse.ArgumentParser(prog="logb", description="Charts of log schemes with boundary.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="structural checks on a chart")
    s.add_argument("chart")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("smooth", parents=[common], help="smoothness criterion")
    s.add_argument("chart")
    s.add_argument("--assert-condition-ii", action="store_true",
                   help="take the scheme-level condition as given for non-monomial charts")
    s.set_defaults(func=cmd_smooth)

    s = sub.add_parser("product", parents=[common], help="fiber product of two charts")
    s.add_argument("chart")
    s.add_argument("chart2")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("exactify", parents=[common], help="exactify the diagonal of a chart")
    s.add_argument("chart")
    s.set_defaults(func=cmd_exactify)

    s = sub.add_parser("closure", parents=[common], help="closure equation over the base")
    s.add_argument("chart", nargs="?")
    s.add_argument("--rho", default=None, help='image of q as a JSON array, e.g. "[-2,1]"')
    s.set_defaults(func=cmd_closure)

    s = sub.add_parser("derham", parents=[common], help="log differentials and graded de Rham cohomology")
    s.add_argument("chart")
    s.add_argument("--weight", default=None, help="weight in P as a JSON array")
    s.set_defaults(func=cmd_derham)

    s = sub.add_parser("p1cech", parents=[common], help="log de Rham cohomology of P^1 by Cech complexes")
    s.add_argument("--weight-bound", type=int, default=5)
    s.set_defaults(func=cmd_p1cech)

    s = sub.add_parser("fixtures", parents=[common], help="run the embedded regression cases")
    s.set_defaults(func=cmd_fixtures)
    return p


def _error(kind, detail):
    print(json.dumps({"error": {"kind": kind, "detail": detail}}), file=sys.stderr)
    return 2


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        out, code = args.func(args)
    except LogbError as exc:
        return _error(exc.kind, str(exc))
    text = _table(out) if args.format == "table" else json.dumps(out, indent=2)
    print(text)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            return _error("malformed-input", f"cannot write {args.out}: {exc.strerror}")
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    pvmaster eval --theorem 1 --f exp --alpha 0 --beta 1 --theta 1 --n 0 [--check]
    pvmaster verify --suite smoke --out report.json
    pvmaster table --format md --out tables.md
    pvmaster identities
    pvmaster audit

Exit codes: 0 success, 1 verification failures, 2 usage or validation error.
Numbers are printed with 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import audit, kernels
from .identities import run_identity_suite
from .quadrature import pv_integrate
from .suites import SUITES, get_suite
from .theorems import FORMULAS, evaluate
from .verification import SuiteValidationError, build_params, emit_table, report_json, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _num(x) -> str:
    return format(float(x), ".17g")


def _fparam(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected k=v, got {text!r}")
    try:
        return key, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value of {key} is not a number: {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pvmaster", description="Closed-form principal-value integrals and their verification.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate one closed form")
    which = e.add_mutually_exclusive_group(required=True)
    which.add_argument("--theorem", type=int, choices=range(1, 7))
    which.add_argument("--kernel", choices=kernels.KERNEL_KINDS)
    which.add_argument("--table1-row", type=int, choices=range(1, 5))
    which.add_argument("--table2-row", type=int, choices=range(1, 7))
    which.add_argument("--generator", help="gen61 .. gen76")
    which.add_argument("--example", type=int, choices=range(1, 4))
    which.add_argument("--remark", action="store_true", help="the single-cosine remark identity")
    e.add_argument("--f", help="catalog function name")
    e.add_argument("--fparam", type=_fparam, action="append", default=[], help="function parameter k=v")
    e.add_argument("--coeff", type=float, action="append", default=[], help="series coefficient M_k (t1 rows)")
    e.add_argument("--alpha", type=float, default=0.0)
    e.add_argument("--beta", type=float, default=1.0)
    e.add_argument("--theta", type=float, action="append", required=True)
    e.add_argument("--n", type=int, default=0)
    e.add_argument("--m", type=float)
    e.add_argument("--b", type=float, default=1.0, help="b parameter of ex2")
    e.add_argument("--mode", choices=("printed", "audited"), default="audited")
    e.add_argument("--check", action="store_true", help="also print the oracle value and the difference")

    v = sub.add_parser("verify", help="run a suite and write its report")
    v.add_argument("--suite", required=True, help=f"built-in name ({', '.join(sorted(SUITES))}) or JSON file")
    v.add_argument("--out", help="report path (stdout when absent)")
    v.add_argument("--mode", choices=("printed", "audited"))
    v.add_argument("--tol-abs", type=float)
    v.add_argument("--tol-rel", type=float)

    t = sub.add_parser("table", help="run the full suite and write the integral table")
    t.add_argument("--format", choices=("csv", "json", "md"), default="md")
    t.add_argument("--out")
    t.add_argument("--suite", default="full")

    sub.add_parser("identities", help="run the pole-family identity checks")

    a = sub.add_parser("audit", help="print the sign-audit table")
    a.add_argument("--formula", action="append", help="restrict to these formula ids")
    a.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _write(text: str, out: str | None) -> None:
    """Write ``text`` to ``out`` atomically, or to stdout."""
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _eval_descriptor(args, theta: float) -> dict:
    def f_spec():
        if not args.f:
            raise UsageError("--f is required for this formula")
        return {"name": args.f, "params": dict(args.fparam)}

    common = {"theta": theta, "n": args.n}
    if args.m is not None:
        common["m"] = args.m
    if args.theorem:
        return {"kind": "theorem", "id": args.theorem, "f": f_spec(), "alpha": args.alpha, "beta": args.beta, **common}
    if args.kernel:
        return {"kind": "kernel", "id": args.kernel, **common}
    if args.table1_row:
        if not args.coeff:
            raise UsageError("--coeff is required for t1 rows")
        return {"kind": "table1", "id": args.table1_row, "M": args.coeff, "alpha": args.alpha, **common}
    if args.table2_row:
        return {"kind": "table2", "id": args.table2_row, "f": f_spec(), "alpha": args.alpha, "beta": args.beta, "theta": theta}
    if args.generator:
        return {"kind": "generator", "id": args.generator, "alpha": args.alpha, "beta": args.beta, **common}
    if args.example:
        return {"kind": "example", "id": args.example, "theta": theta, "b": args.b}
    return {"kind": "remark", "f": f_spec(), "beta": args.beta, "theta": theta}


def _cmd_eval(args) -> int:
    lines = []
    for theta in args.theta:
        desc = _eval_descriptor(args, theta)
        params = build_params(desc)
        boundary = params.validate()
        value = evaluate(params, args.mode).value
        if not args.check:
            lines.append(_num(value))
            continue
        fid = params.formula_id
        res = pv_integrate(FORMULAS[fid].integrand(params), audit.oracle_config(audit.formula_kind(fid), boundary))
        lines.append(f"{_num(value)} oracle={_num(res.value)} diff={_num(abs(value - res.value))}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _load_suite(name: str) -> dict:
    if name in SUITES:
        return get_suite(name)
    path = Path(name)
    if not path.is_file():
        raise UsageError(f"unknown suite {name!r}: not a built-in name and not a file")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"suite file {name} is not valid JSON: {exc}") from None


def _failures(report: dict) -> int:
    return report["summary"]["fail"] + report["summary"]["unaudited"]


def _cmd_verify(args) -> int:
    suite = dict(_load_suite(args.suite))
    if args.mode:
        suite["mode"] = args.mode
    if args.tol_abs is not None or args.tol_rel is not None:
        tol = dict(suite.get("tol") or {})
        if args.tol_abs is not None:
            tol["abs"] = args.tol_abs
        if args.tol_rel is not None:
            tol["rel"] = args.tol_rel
        suite["tol"] = tol
    report = run_suite(suite)
    _write(report_json(report), args.out)
    s = report["summary"]
    sys.stderr.write(" ".join(f"{k}={s[k]}" for k in ("pass", "fail", "unaudited", "boundary")) + "\n")
    return EXIT_FAIL if _failures(report) else EXIT_OK


def _cmd_table(args) -> int:
    report = run_suite(_load_suite(args.suite))
    _write(emit_table(report, args.format), args.out)
    return EXIT_FAIL if _failures(report) else EXIT_OK


def _cmd_identities(args) -> int:
    checks = run_identity_suite()
    for c in checks:
        status = "pass" if c.passed else "fail"
        print(f"{c.name:8s} {status}  samples={c.samples}  worst={c.worst_residual:.3e}  {c.description}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def _cmd_audit(args) -> int:
    fids = args.formula or audit.all_formula_ids()
    unknown = sorted(set(fids) - set(FORMULAS))
    if unknown:
        raise UsageError(f"unknown formula ids: {', '.join(unknown)}")
    entries = audit.ensure_audits(fids)
    if args.format == "json":
        _write(json.dumps([e.to_dict() for e in entries], indent=2, sort_keys=True) + "\n", None)
    else:
        for e in entries:
            state = "consistent" if e.consistent else "inconsistent"
            print(f"{e.formula_id:6s} sigma={e.sigma:+d} {state:12s} witnesses={e.witnesses:2d} variant={e.variant}")
    return EXIT_OK if all(e.consistent for e in entries) else EXIT_FAIL


COMMANDS = {"eval": _cmd_eval, "verify": _cmd_verify, "table": _cmd_table, "identities": _cmd_identities, "audit": _cmd_audit}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SuiteValidationError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"{parser.format_usage()}pvmaster: error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())

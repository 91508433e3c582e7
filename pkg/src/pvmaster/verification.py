"""Case verification, suite runs, reports and table emission.

A suite is a JSON-shaped mapping::

    {"mode": "audited", "tol": {"abs": 1e-6, "rel": 1e-4},
     "cases": [{"kind": "theorem", "id": 1, "f": {"name": "exp", "params": {}},
                "alpha": 0, "beta": 1, "theta": [0.5, 1.3], "n": 0}, ...]}

``theta`` may be a number or a list; lists expand into one case per value.
Kinds are theorem, kernel, table1, table2, generator, example and remark.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import audit
from .analytic import (
    AnalyticFunction,
    CoefficientMismatchError,
    CombinationParams,
    DomainError,
    SeriesFunction,
    taylor_coeffs,
)
from .kernels import FamilyOrder, kernel_value
from .quadrature import pv_integrate
from .theorems import (
    FORMULAS,
    ExampleParams,
    GeneratorParams,
    KernelParams,
    Remark1Params,
    Table1Params,
    Table2Params,
    TheoremParams,
    evaluate,
)

THEOREM_KERNEL = {1: "cos_odd", 2: "xsin_odd", 3: "sin_even", 4: "cos_even", 5: "sin_mixed", 6: "cos_mixed"}
STATUSES = ("pass", "fail", "unaudited", "boundary")
SERIES_TOL = 1e-6


class SeriesConvergenceError(RuntimeError):
    pass


class SuiteValidationError(ValueError):
    def __init__(self, problems):
        super().__init__("invalid suite:\n" + "\n".join(problems))
        self.problems = problems


# -- series oracle -----------------------------------------------------------------


def series_oracle(p: TheoremParams, K: int = 200) -> float:
    """Term-by-term Taylor expansion summed against the audited kernels.

    Returns 2 sum_k c_k beta^k kernel(k theta), the k = 0 term kept for the
    cosine kernels and dropped for the sine kernels.
    """
    if p.validate():
        raise DomainError("the series does not converge absolutely on the boundary circle")
    f, a, b, th = p.f, p.comb.alpha, p.comb.beta, p.comb.theta
    kind = THEOREM_KERNEL[p.theorem]
    if b == 0 or (th == 0 and kind.startswith("cos")):
        return 0.0
    try:
        c = taylor_coeffs(f, a, abs(b), K)
    except CoefficientMismatchError as exc:
        raise SeriesConvergenceError(f"Taylor coefficients not resolved with K={K}: {exc}") from exc
    d = (c * b ** np.arange(K + 1)).real
    thresh = 1e-15 * max(1.0, float(np.sum(np.abs(d))))
    big = np.nonzero(np.abs(d) >= thresh)[0]
    if big.size == 0:
        return 0.0
    last = int(big[-1])
    if last >= K:
        raise SeriesConvergenceError(f"Taylor terms still above {thresh:.1e} at K={K}")
    start = 1 if kind.startswith("sin") or kind == "xsin_odd" else 0
    ks = np.arange(start, last + 1)
    kern = np.atleast_1d(kernel_value(kind, ks * th, p.order))
    return float(2 * math.fsum(d[ks] * kern))


def _series_params(params):
    """The theorem form of ``params`` when the series oracle applies to it."""
    if isinstance(params, TheoremParams):
        return params
    if isinstance(params, Table2Params):
        return params.theorem_params()
    if isinstance(params, GeneratorParams) and params.gen != "gen76":
        if params.gen in ("gen61", "gen63") and params.m != int(params.m):
            return None
        return params.theorem_params()
    return None


# -- records -------------------------------------------------------------------------


@dataclass
class VerificationRecord:
    case_id: str
    kind: str
    formula_id: str
    params: dict
    mode: str
    closed_printed: float
    closed_audited: float | None
    sign_factor: int | None
    correction: str | None
    imag_residual: float
    oracle_raw: dict
    oracle_series: float | None
    abs_diff: float
    rel_diff: float
    tolerance: float
    status: str
    note: str = ""

    def to_dict(self):
        return asdict(self)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _short(x) -> str:
    return repr(float(x))


def _case_id(kind: str, fid: str, desc: dict) -> str:
    parts = [fid]
    f = desc.get("f")
    if f:
        fp = ",".join(f"{k}={_short(v)}" for k, v in sorted((f.get("params") or {}).items()))
        parts.append(f"f={f['name']}" + (f"[{fp}]" if fp else ""))
    if "M" in desc:
        parts.append("M=" + ",".join(_short(v) for v in desc["M"]))
    for key in ("alpha", "beta", "b", "m", "n", "theta"):
        if key in desc and desc[key] is not None:
            parts.append(f"{key}={_short(desc[key]) if key != 'n' else int(desc[key])}")
    return "|".join(parts)


def _function(spec, center: float = 0.0) -> AnalyticFunction:
    if not isinstance(spec, dict) or "name" not in spec:
        raise ValueError("f must be an object with a name")
    return AnalyticFunction.make(spec["name"], spec.get("params") or {}, center)


def build_params(desc: dict):
    """Turn one expanded case descriptor (scalar theta) into a params object."""
    kind = desc.get("kind")
    th = float(desc["theta"])
    n = desc.get("n", 0)
    m = desc.get("m")
    if kind == "kernel":
        return KernelParams(str(desc["id"]), th, FamilyOrder(int(n), None if m is None else int(m)))
    if kind in ("theorem", "table2"):
        alpha = float(desc.get("alpha", 0.0))
        f = _function(desc["f"], alpha)
        comb = CombinationParams(alpha, float(desc.get("beta", 1.0)), th)
        boundary = bool(desc.get("boundary", False))
        if kind == "table2":
            return Table2Params(int(desc["id"]), f, comb, boundary)
        return TheoremParams(int(desc["id"]), f, comb, FamilyOrder(int(n), None if m is None else int(m)), boundary)
    if kind == "table1":
        g = SeriesFunction(tuple(desc["M"]), float(desc.get("alpha", 0.0)))
        return Table1Params(int(desc["id"]), g, th, FamilyOrder(int(n), None if m is None else int(m)))
    if kind == "generator":
        gid = str(desc["id"])
        gid = gid if gid.startswith("gen") else f"gen{gid}"
        return GeneratorParams(
            gid, th, int(n), float(desc.get("alpha", 0.0)), float(desc.get("beta", 1.0)), float(m if m is not None else 1.0)
        )
    if kind == "example":
        return ExampleParams(int(desc["id"]), th, float(desc.get("b", 1.0)))
    if kind == "remark":
        return Remark1Params(_function(desc["f"]), float(desc.get("beta", 1.0)), th, bool(desc.get("boundary", False)))
    raise ValueError(f"unknown case kind {kind!r}")


def expand_cases(suite: dict) -> list[dict]:
    """Validate a suite and expand theta lists; raises SuiteValidationError."""
    if not isinstance(suite, dict) or not isinstance(suite.get("cases", []), list):
        raise SuiteValidationError(["suite must be an object with a 'cases' list"])
    if suite.get("mode", "audited") not in ("printed", "audited"):
        raise SuiteValidationError([f"unknown mode {suite.get('mode')!r}"])
    problems, out = [], []
    for i, case in enumerate(suite.get("cases", [])):
        try:
            if not isinstance(case, dict):
                raise ValueError("case must be an object")
            thetas = case.get("theta")
            if thetas is None:
                raise ValueError("missing theta")
            for th in thetas if isinstance(thetas, list) else [thetas]:
                desc = dict(case, theta=float(th))
                params = build_params(desc)
                params.validate()
                fid = params.formula_id
                desc["case_id"] = _case_id(desc["kind"], fid, desc)
                out.append(desc)
        except Exception as exc:  # report every malformed case before running anything
            problems.append(f"case {i}: {type(exc).__name__}: {exc}")
    if problems:
        raise SuiteValidationError(problems)
    ids = [d["case_id"] for d in out]
    if len(set(ids)) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise SuiteValidationError([f"duplicate case {d}" for d in dup])
    return sorted(out, key=lambda d: d["case_id"])


def verify_case(params, mode: str = "audited", cfg=None, tol: dict | None = None, case_id: str | None = None, desc: dict | None = None) -> VerificationRecord:
    """Compare closed forms with the raw oracle (and the series oracle when it applies)."""
    boundary = bool(params.validate())
    fid = params.formula_id
    kind = audit.formula_kind(fid)
    tol = tol or {}
    printed = evaluate(params, "printed")
    closed_audited = sign = correction = None
    note = ""
    status = None
    imag = printed.imag_residual
    if mode == "audited":
        try:
            a = evaluate(params, "audited")
            closed_audited, sign, correction, imag = a.value, a.sign_factor, a.correction, a.imag_residual
        except audit.UnauditedError as exc:
            status, note = "unaudited", str(exc)
    cfg = cfg or audit.oracle_config(kind, boundary)
    res = pv_integrate(FORMULAS[fid].integrand(params), cfg)
    series = None
    sp = _series_params(params)
    if sp is not None and not boundary:
        try:
            series = series_oracle(sp)
        except (SeriesConvergenceError, DomainError) as exc:
            note = f"series oracle unavailable: {exc}"
    allowed = audit.tolerance(kind, res.value, res.error_estimate, boundary)
    if not boundary and tol:
        allowed = max(float(tol.get("abs", 0.0)), float(tol.get("rel", 0.0)) * abs(res.value), 3 * res.error_estimate)
    used = closed_audited if closed_audited is not None else printed.value
    diff = abs(used - res.value)
    available = [printed.value] + ([closed_audited] if closed_audited is not None else [])
    ok = min(abs(v - res.value) for v in available) <= allowed
    if series is not None and closed_audited is not None and abs(closed_audited - series) > SERIES_TOL:
        ok = False
        note = f"series oracle disagrees by {abs(closed_audited - series):.3e}"
    if status is None:
        status = ("boundary" if boundary else "pass") if ok else "fail"
    oracle = {
        "value": res.value,
        "error_estimate": res.error_estimate,
        "evals": res.evals,
        "converged": res.converged,
    }
    return VerificationRecord(
        case_id or fid,
        desc.get("kind", "") if desc else type(params).__name__,
        fid,
        {k: v for k, v in (desc or {}).items() if k not in ("case_id",)},
        mode,
        printed.value,
        closed_audited,
        sign,
        correction,
        imag,
        oracle,
        series,
        diff,
        diff / max(abs(res.value), 1e-300),
        allowed,
        status,
        note,
    )


def _run_desc(args):
    desc, mode, tol, entries = args
    if entries:
        audit.install_audit_table(entries)
    params = build_params(desc)
    return verify_case(params, mode, tol=tol, case_id=desc["case_id"], desc=desc).to_dict()


def run_suite(suite: dict, cfg=None, jobs: int | None = None) -> dict:
    """Run every case of ``suite``; the report is deterministic apart from 'timestamp'."""
    descs = expand_cases(suite)
    mode = suite.get("mode", "audited")
    tol = suite.get("tol") or {}
    fids = {build_params(d).formula_id for d in descs}
    needed = set()
    if descs:
        needed |= {"eq19", "eq20", "eq21", "eq22", "eq23", "eq25"}
    if mode == "audited":
        needed |= fids
    jobs = audit.default_jobs() if jobs is None else jobs
    entries = audit.ensure_audits(needed, jobs) if needed else []
    work = [(d, mode, tol, entries) for d in descs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_desc, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        records = [_run_desc((d, mode, tol, None)) for d in descs]
    records.sort(key=lambda r: r["case_id"])
    summary = {s: sum(r["status"] == s for r in records) for s in STATUSES}
    return {
        "mode": mode,
        "audit": [e.to_dict() for e in entries],
        "cases": records,
        "summary": summary,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }


def report_json(report: dict, include_timestamp: bool = True) -> str:
    body = dict(report)
    if not include_timestamp:
        body.pop("timestamp", None)
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


# -- tables --------------------------------------------------------------------------

TABLE_COLUMNS = ("case_id", "integrand", "parameters", "closed_form", "value", "oracle", "diff", "status")


def _param_text(rec: dict) -> str:
    p = rec["params"]
    parts = []
    if p.get("f"):
        fp = ",".join(f"{k}={_short(v)}" for k, v in sorted((p["f"].get("params") or {}).items()))
        parts.append(f"f={p['f']['name']}" + (f"[{fp}]" if fp else ""))
    if "M" in p:
        parts.append("M=(" + ",".join(_short(v) for v in p["M"]) + ")")
    for key in ("alpha", "beta", "b", "theta", "n", "m"):
        if p.get(key) is not None:
            parts.append(f"{key}={_short(p[key]) if key != 'n' else int(p[key])}")
    return " ".join(parts)


def _closed_text(rec: dict) -> str:
    if rec["mode"] == "printed" or rec["closed_audited"] is None:
        return f"{rec['formula_id']} printed"
    text = f"{rec['formula_id']} audited sigma={rec['sign_factor']:+d}"
    if rec["correction"]:
        text += f"; {rec['correction']}"
    return text


def table_rows(report: dict) -> list[dict]:
    rows = []
    for rec in sorted(report["cases"], key=lambda r: r["case_id"]):
        value = rec["closed_audited"] if rec["closed_audited"] is not None else rec["closed_printed"]
        rows.append(
            {
                "case_id": rec["case_id"],
                "integrand": FORMULAS[rec["formula_id"]].description,
                "parameters": _param_text(rec),
                "closed_form": _closed_text(rec),
                "value": _fmt(value),
                "oracle": _fmt(rec["oracle_raw"]["value"]),
                "diff": format(rec["abs_diff"], ".3e"),
                "status": rec["status"],
            }
        )
    return rows


def emit_table(report: dict, fmt: str) -> str:
    """Render one row per verified identity as csv, json or md."""
    rows = table_rows(report)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=TABLE_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "json":
        return json.dumps({"audit": report.get("audit", []), "cases": rows}, indent=2, sort_keys=True) + "\n"
    if fmt == "md":
        esc = lambda s: str(s).replace("|", "\\|")
        lines = ["| " + " | ".join(TABLE_COLUMNS) + " |", "|" + "---|" * len(TABLE_COLUMNS)]
        lines += ["| " + " | ".join(esc(r[c]) for c in TABLE_COLUMNS) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")

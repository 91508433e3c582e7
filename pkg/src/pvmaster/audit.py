"""Empirical sign audit of the printed closed forms.

For each formula the candidates (printed, +1), (each correction, +1),
(printed, -1), (each correction, -1) are tried in that order against the
raw quadrature oracle on a witness grid.  The first candidate that matches
every witness is adopted.  An entry is consistent when that candidate
matches everywhere and, on every witness whose value is clearly nonzero,
beats the opposite sign by at least ten oracle error estimates.
Audited evaluation of an inconsistent formula raises :class:`UnauditedError`.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .analytic import AnalyticFunction, CombinationParams, SeriesFunction
from .kernels import KERNEL_FORMULA, FamilyOrder
from .quadrature import QuadConfig, pv_integrate

THETAS = (0.5, 1.0, 1.7)


class UnauditedError(RuntimeError):
    pass


@dataclass(frozen=True)
class SignAuditEntry:
    formula_id: str
    sigma: int
    correction: str | None
    witnesses: int
    informative: int
    consistent: bool
    max_residual: float

    @property
    def variant(self) -> str:
        return self.correction or "printed"

    def to_dict(self):
        return asdict(self)


def tolerance(kind: str, oracle_value: float, oracle_error: float, boundary: bool = False) -> float:
    """Acceptance tolerance shared by the audit and the verifier."""
    if boundary:
        return max(1e-3, 3 * oracle_error)
    if kind == "kernel":
        return max(1e-8, 3 * oracle_error)
    return max(1e-6, 1e-4 * abs(oracle_value), 3 * oracle_error)


def oracle_config(kind: str, boundary: bool = False) -> QuadConfig:
    if boundary:
        return QuadConfig(panel_tol=1e-9, target_tol=1e-3)
    if kind == "kernel":
        return QuadConfig()
    return QuadConfig(target_tol=1e-6)


def formula_kind(fid: str) -> str:
    return "kernel" if fid.startswith("eq") else "identity"


# -- witness grids --------------------------------------------------------------------


def _f(name, alpha=0.0, **params):
    return AnalyticFunction.make(name, params, alpha)


_F_PAIRS = ((_f("power", m=1.0), 0.0, 1.0), (_f("exp", 0.3), 0.3, 0.5))
_SERIES = SeriesFunction((0.3, 1.0, -0.5, 0.25))


def witness_grid(fid: str) -> list:
    from . import theorems as T

    if fid not in T.FORMULAS:
        raise KeyError(f"unknown formula id {fid!r}")
    out = []
    if fid in KERNEL_FORMULA.values():
        kind = next(k for k, v in KERNEL_FORMULA.items() if v == fid)
        ns = (1, 2) if kind in ("sin_even", "cos_even") else (0, 1, 2)
        ms = (1, 2) if kind.endswith("mixed") else (None,)
        for n in ns:
            for m in ms:
                for th in THETAS:
                    out.append(T.KernelParams(kind, th, FamilyOrder(n, m)))
    elif fid.startswith("thm"):
        t = int(fid[3:])
        ns = (1, 2) if t in (3, 4) else (0, 1, 2)
        ms = (1, 2) if t in (5, 6) else (None,)
        for f, a, b in _F_PAIRS:
            for n in ns:
                for m in ms:
                    for th in THETAS:
                        out.append(T.TheoremParams(t, f, CombinationParams(a, b, th), FamilyOrder(n, m)))
    elif fid.startswith("t1r"):
        r = int(fid[3:])
        ns = (1, 2) if r == 3 else (0, 1, 2)
        ms = (1, 2) if r == 4 else (None,)
        for n in ns:
            for m in ms:
                for th in THETAS:
                    out.append(T.Table1Params(r, _SERIES, th, FamilyOrder(n, m)))
    elif fid.startswith("t2r"):
        r = int(fid[3:])
        pairs = ((_f("power", m=1.0), 0.0, 1.0), (_f("exp"), 0.0, 1.0)) if r in (1, 2) else _F_PAIRS
        for f, a, b in pairs:
            for th in THETAS:
                out.append(T.Table2Params(r, f, CombinationParams(a, b, th)))
    elif fid == "rem1":
        for f, b in ((_f("power", m=1.0), 1.0), (_f("exp"), 0.5)):
            for phi in THETAS:
                out.append(T.Remark1Params(f, b, phi))
    elif fid in ("gen61", "gen63"):
        ns = (0, 1, 2) if fid == "gen61" else (1, 2)
        for n in ns:
            for m in (1.0, 1.5):
                for th in THETAS:
                    out.append(T.GeneratorParams(fid, th, n, m=m))
    elif fid.startswith("gen"):
        ns = (1, 2) if fid == "gen70" else (0, 1)
        if fid == "gen76":
            pairs = ((0.0, 1.0),)
        elif fid == "gen74":
            pairs = ((0.0, 0.5), (0.3, 0.6))
        else:
            pairs = ((0.0, 1.0), (0.3, 0.5))
        for a, b in pairs:
            for n in ns:
                for th in THETAS:
                    out.append(T.GeneratorParams(fid, th, n, a, b))
    elif fid == "ex1":
        out = [T.ExampleParams(1, th) for th in (0.5, 0.8, 1.0, 1.3, 1.7)]
    elif fid == "ex2":
        out = [T.ExampleParams(2, th, b) for b in (0.5, 1.0) for th in (0.5, 1.0, 2.0)]
    elif fid == "ex3":
        out = [T.ExampleParams(3, th) for th in (0.5, 1.0, 1.3, 1.7, 3.0)]
    return out


def all_formula_ids() -> list[str]:
    from .theorems import FORMULAS

    return sorted(FORMULAS)


# -- the audit ------------------------------------------------------------------------


def _witness_data(params):
    from .theorems import FORMULAS, variant_values

    fid = params.formula_id
    boundary = bool(params.validate())
    kind = formula_kind(fid)
    res = pv_integrate(FORMULAS[fid].integrand(params), oracle_config(kind, boundary))
    tol = tolerance(kind, res.value, res.error_estimate, boundary)
    return variant_values(params), res.value, res.error_estimate, tol


def sign_audit(formula_id: str, witnesses: list | None = None) -> SignAuditEntry:
    """Choose the variant and sign of ``formula_id`` that the oracle supports."""
    grid = witness_grid(formula_id) if witnesses is None else list(witnesses)
    if len(grid) < 5:
        raise ValueError("a sign audit needs at least 5 witness cases")
    data = [_witness_data(p) for p in grid]
    names = list(data[0][0])
    corrections = [n for n in names if n != "printed"]
    candidates = [("printed", 1)] + [(c, 1) for c in corrections] + [("printed", -1)] + [(c, -1) for c in corrections]

    def residuals(name, sigma):
        return [abs(sigma * vals[name].real - o) for vals, o, _, _ in data]

    chosen, best = None, None
    for name, sigma in candidates:
        r = residuals(name, sigma)
        if all(ri <= tol for ri, (_, _, _, tol) in zip(r, data)):
            chosen = (name, sigma)
            break
        total = sum(r)
        if best is None or total < best[0]:
            best = (total, (name, sigma))
    consistent = chosen is not None
    name, sigma = chosen if consistent else best[1]
    r = residuals(name, sigma)
    informative = 0
    for (vals, o, err, tol), ri in zip(data, r):
        v = vals[name].real
        if abs(v) > 10 * tol:
            informative += 1
            margin = abs(-sigma * v - o) - ri
            if margin < 10 * max(err, 1e-15):
                consistent = False
    if informative == 0:
        consistent = False
    return SignAuditEntry(
        formula_id, sigma, None if name == "printed" else name, len(grid), informative, consistent, max(r)
    )


_TABLE: dict[str, SignAuditEntry] = {}


def audit_entry(formula_id: str) -> SignAuditEntry:
    """Cached audit entry, computed on first use."""
    if formula_id not in _TABLE:
        _TABLE[formula_id] = sign_audit(formula_id)
    return _TABLE[formula_id]


def audited_choice(formula_id: str) -> tuple[str, int]:
    entry = audit_entry(formula_id)
    if not entry.consistent:
        raise UnauditedError(f"unaudited: the sign audit of {formula_id} is inconsistent")
    return entry.variant, entry.sigma


def install_audit_table(entries) -> None:
    for e in entries:
        _TABLE[e.formula_id] = e


def audit_table() -> list[SignAuditEntry]:
    return [_TABLE[k] for k in sorted(_TABLE)]


def default_jobs() -> int:
    env = os.environ.get("PVMASTER_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def ensure_audits(formula_ids, jobs: int | None = None) -> list[SignAuditEntry]:
    """Compute any missing entries, in parallel when more than one job is allowed."""
    missing = sorted(set(formula_ids) - set(_TABLE))
    jobs = default_jobs() if jobs is None else jobs
    if missing and jobs > 1 and len(missing) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(missing))) as pool:
            install_audit_table(pool.map(sign_audit, missing))
    else:
        for fid in missing:
            audit_entry(fid)
    return [_TABLE[f] for f in sorted(set(formula_ids))]

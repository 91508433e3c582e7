"""Acceptance criteria 1 to 9, one test each; every test prints a pass/fail line."""

import cmath
import math
import time

import numpy as np
import pytest

from conftest import comb, order
from pvmaster import audit, kernels as K
from pvmaster.analytic import catalog_function, constant
from pvmaster.cli import run
from pvmaster.identities import run_identity_suite
from pvmaster.quadrature import PVIntegrand, pv_integrate
from pvmaster.suites import get_suite
from pvmaster.theorems import ExampleParams, TheoremParams, example_value, integrand_for, table2_value, theorem_value
from pvmaster.verification import SERIES_TOL, run_suite


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def theorem_grid_report():
    start = time.perf_counter()
    rep = run_suite(get_suite("theorems"))
    rep["elapsed"] = time.perf_counter() - start
    return rep


def test_criterion_1_identity_suite(capsys):
    start = time.perf_counter()
    checks = [c for c in run_identity_suite(points=200, max_order=6) if c.name != "laplace"]
    elapsed = time.perf_counter() - start
    worst = max(c.worst_residual for c in checks)
    ok = all(c.passed for c in checks) and elapsed < 5.0
    report(capsys, 1, ok, f"eq4/eq17/eq18/eq12 worst relative residual {worst:.2e}, {elapsed:.2f} s")


def test_criterion_2_laplace_triple(capsys):
    worst = 0.0
    for n in range(7):
        for x in (2 * n + 2, 2 * n + 5, 50):
            closed = K.laplace_sinh(n, x, "closed")
            for form in ("sum", "recursive"):
                worst = max(worst, abs(K.laplace_sinh(n, x, form) - closed) / abs(closed))
    report(capsys, 2, worst <= 1e-12, f"worst relative gap {worst:.2e}")


def test_criterion_3_oracle_calibration(capsys):
    worst_ratio = 0.0
    for kind in K.BASE_FACTS:
        for a in (1, 2, 3):
            for th in (0.5, 1.0, 2.0):
                res = pv_integrate(K.base_fact_integrand(kind, a, th))
                worst_ratio = max(worst_ratio, abs(res.value - K.base_fact(kind, a, th)) / max(1e-8, 3 * res.error_estimate))
    simple = pv_integrate(PVIntegrand(lambda x: 1 / (1 - np.asarray(x) ** 2), poles=(1.0,), decay_exponent=2))
    ok = worst_ratio <= 1 and abs(simple.value) <= 1e-10
    report(capsys, 3, ok, f"base facts within {worst_ratio:.2f} of the tolerance; PV int 1/(1-x^2) = {simple.value:.1e}")


def test_criterion_4_kernels(capsys):
    start = time.perf_counter()
    worst, count = 0.0, 0
    for kind in K.KERNEL_KINDS:
        ns = (1, 2) if kind in ("sin_even", "cos_even") else (0, 1, 2)
        ms = (1, 2) if kind.endswith("mixed") else (None,)
        for n in ns:
            for m in ms:
                for th in (0.5, 1.0, 2.0):
                    o = order(n, m)
                    res = pv_integrate(K.kernel_integrand(kind, th, o))
                    worst = max(worst, abs(K.kernel_value(kind, th, o) - res.value))
                    count += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 60
    report(capsys, 4, ok, f"{count} kernel cases, worst |closed - oracle| {worst:.2e}, {elapsed:.1f} s")


def test_criterion_5_theorem_grid(capsys, theorem_grid_report):
    cases = theorem_grid_report["cases"]
    raw_bad = [c for c in cases if c["abs_diff"] > c["tolerance"]]
    series_gap = max(abs(c["closed_audited"] - c["oracle_series"]) for c in cases)
    missing = sum(c["oracle_series"] is None for c in cases)
    elapsed = theorem_grid_report["elapsed"]
    ok = not raw_bad and missing == 0 and series_gap <= SERIES_TOL and elapsed < 300
    ok = ok and all(c["status"] == "pass" for c in cases)
    report(
        capsys,
        5,
        ok,
        f"{len(cases)} cases, {len(raw_bad)} outside the quadrature tolerance, series gap {series_gap:.2e}, {elapsed:.0f} s",
    )


def test_criterion_6_sign_audit(capsys):
    entries = {fid: audit.audit_entry(fid) for fid in ("thm1", "thm3", "thm4", "thm6", "thm2", "eq20", "eq22")}
    plus = all(entries[f].consistent and entries[f].sigma == 1 for f in ("thm1", "thm3", "thm4", "thm6"))
    fixed = all(entries[f].consistent for f in ("thm2", "eq20", "eq22"))
    z = catalog_function("power", {"m": 1})
    post = []
    for n in (0, 1, 2):
        for th in (0.5, 1.0, 1.7):
            p = TheoremParams(2, z, comb(theta=th), order(n))
            res = pv_integrate(integrand_for(p), audit.oracle_config("identity"))
            post.append(abs(theorem_value(p).value - res.value) <= audit.tolerance("identity", res.value, res.error_estimate))
            o = order(n + 1)
            kres = pv_integrate(K.kernel_integrand("cos_even", th, o))
            post.append(abs(K.kernel_value("cos_even", th, o) - kres.value) <= 1e-8)
    ok = plus and fixed and all(post)
    signs = ", ".join(f"{f} {e.sigma:+d}" for f, e in entries.items())
    report(capsys, 6, ok, f"{signs}; eq22 variant: {entries['eq22'].variant}")


def test_criterion_7_anchors(capsys):
    z = catalog_function("power", {"m": 1})
    a1 = abs(theorem_value(TheoremParams(1, z, comb(), order(0))).value - math.pi * math.sin(1))
    a2 = abs(table2_value(2, z, comb()).value + math.pi * math.cos(1))
    ex1 = example_value(1, 1.0).value
    E = cmath.exp(cmath.exp(cmath.exp(1j)))
    target = math.pi / 2 * (2 * E.real - 2 * math.e)
    quad = pv_integrate(integrand_for(ExampleParams(1, 1.0)), audit.oracle_config("identity")).value
    a3 = abs(ex1 - target)
    a4 = abs(ex1 - quad)
    ok = a1 <= 1e-12 and a2 <= 1e-12 and a3 <= 1e-12 and a4 <= 1e-4
    report(
        capsys,
        7,
        ok,
        f"thm1 gap {a1:.1e}; t2r2 gap {a2:.1e}; ex1 = {ex1:.10f} vs (pi/2)(2 Re e^(e^(e^i)) - 2e) = {target:.10f} "
        f"(gap {a3:.1e}) and quadrature {quad:.10f} (gap {a4:.1e})",
    )


def test_criterion_8_degenerate(capsys, theorem_grid_report):
    worst_null = 0.0
    for t in (1, 4, 6):
        o = order(1 if t == 4 else 0, 1 if t == 6 else None)
        for name in ("exp", "sinh", "cos_exp", "exp_exp"):
            p = TheoremParams(t, catalog_function(name), comb(theta=0.0), o)
            worst_null = max(worst_null, abs(theorem_value(p).value))
    worst_const = 0.0
    for t in range(1, 7):
        for n in ((1, 2) if t in (3, 4) else (0, 1, 2)):
            o = order(n, 1 if t >= 5 else None)
            for th in (0.5, 1.3):
                worst_const = max(worst_const, abs(theorem_value(TheoremParams(t, constant(2.5), comb(theta=th), o)).value))
    worst_imag = max(c["imag_residual"] for c in theorem_grid_report["cases"])
    ok = worst_null <= 1e-14 and worst_const <= 1e-14 and worst_imag <= 1e-10
    report(capsys, 8, ok, f"theta=0 null {worst_null:.1e}; constant f {worst_const:.1e}; imag residual {worst_imag:.1e}")


def test_criterion_9_table_emission(capsys, tmp_path):
    a, b = tmp_path / "a.md", tmp_path / "b.md"
    codes = (run(["table", "--format", "md", "--out", str(a)]), run(["table", "--format", "md", "--out", str(b)]))
    rows = a.read_text().splitlines()[2:]
    statuses = [r.rstrip(" |").rsplit("| ", 1)[-1] for r in rows]
    ids = {r.split(" | ")[0] for r in rows}
    same = a.read_bytes() == b.read_bytes()
    ok = codes == (0, 0) and len(ids) >= 40 and "fail" not in statuses and same
    report(capsys, 9, ok, f"{len(ids)} distinct rows, {statuses.count('fail')} fail, byte-stable: {same}")

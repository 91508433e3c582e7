import pytest

from pvmaster import audit
from pvmaster.theorems import FORMULAS


@pytest.mark.parametrize("fid", ["thm1", "thm3", "thm4", "thm6"])
def test_positive_sign(fid):
    e = audit.audit_entry(fid)
    assert e.consistent and e.sigma == 1


def test_thm2_and_eq20_negative():
    for fid in ("thm2", "eq20"):
        e = audit.audit_entry(fid)
        assert e.consistent and e.sigma == -1 and e.correction is None


def test_eq22_argument_fix():
    e = audit.audit_entry("eq22")
    assert e.consistent and e.sigma == 1 and "theta(2n-2k)" in e.correction


def test_mixed_normalization_fix():
    for fid in ("eq23", "eq25", "thm5", "thm6"):
        assert "(2m)!" in audit.audit_entry(fid).correction


def test_every_formula_has_a_witness_grid():
    for fid in FORMULAS:
        assert len(audit.witness_grid(fid)) >= 5


def test_stable_under_doubled_grid():
    grid = audit.witness_grid("thm1")
    doubled = grid + [type(p)(p.theorem, p.f, type(p.comb)(p.comb.alpha, p.comb.beta, p.comb.theta * 1.1), p.order) for p in grid]
    a, b = audit.sign_audit("thm1", grid), audit.sign_audit("thm1", doubled)
    assert (a.sigma, a.correction) == (b.sigma, b.correction)
    assert b.consistent


def test_too_few_witnesses():
    with pytest.raises(ValueError):
        audit.sign_audit("thm1", audit.witness_grid("thm1")[:3])


def test_unknown_formula():
    with pytest.raises(KeyError):
        audit.witness_grid("thm9")


def test_tolerance_rules():
    assert audit.tolerance("kernel", 5.0, 0.0) == 1e-8
    assert audit.tolerance("identity", 100.0, 0.0) == pytest.approx(1e-2)
    assert audit.tolerance("identity", 0.0, 1e-5) == pytest.approx(3e-5)
    assert audit.tolerance("identity", 0.0, 0.0, boundary=True) == 1e-3


def test_ensure_audits_returns_sorted():
    entries = audit.ensure_audits(["thm2", "thm1"], jobs=1)
    assert [e.formula_id for e in entries] == ["thm1", "thm2"]
    assert entries[0].to_dict()["formula_id"] == "thm1"

import pytest

from pvmaster.identities import run_identity_suite
from pvmaster.suites import SUITES, get_suite
from pvmaster.verification import expand_cases


def test_builtin_suites_validate():
    for name in SUITES:
        assert expand_cases(get_suite(name))


def test_suite_sizes():
    assert len(expand_cases(get_suite("smoke"))) == 12
    assert len(expand_cases(get_suite("full"))) >= 40
    assert len(expand_cases(get_suite("theorems"))) == 1144


def test_unknown_suite():
    with pytest.raises(KeyError):
        get_suite("medium")


def test_identity_suite_small():
    checks = run_identity_suite(points=20, max_order=3, seed=1)
    assert [c.name for c in checks] == ["eq4", "eq17", "eq18", "eq12", "laplace"]
    assert all(c.passed for c in checks)
    assert checks[0].to_dict()["passed"] is True

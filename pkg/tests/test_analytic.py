import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pvmaster import analytic as A
from pvmaster.analytic import CombinationParams, DomainError, SeriesFunction, catalog_function


def test_catalog_values():
    z = 0.3 + 0.2j
    assert A.eval(catalog_function("exp"), z) == pytest.approx(cmath.exp(z), abs=1e-15)
    assert A.eval(catalog_function("cos_exp"), z) == pytest.approx(cmath.cos(cmath.exp(z)), abs=1e-15)
    assert A.eval(catalog_function("log1p"), z) == pytest.approx(cmath.log(1 + z), abs=1e-15)
    assert A.eval(catalog_function("exp_exp"), z) == pytest.approx(cmath.exp(cmath.exp(z)), abs=1e-14)
    assert A.eval(catalog_function("power", {"m": 3}), z) == pytest.approx(z**3, abs=1e-15)


def test_unknown_function_rejected():
    with pytest.raises(ValueError):
        catalog_function("gamma")


def test_log_radius_and_domain():
    f = catalog_function("log1p")
    assert f.radius_at(0.0) == pytest.approx(1.0)
    assert f.radius_at(0.3) == pytest.approx(1.3)
    with pytest.raises(DomainError):
        A.eval(f, -1.5)


def test_noninteger_power_needs_positive_center():
    with pytest.raises(DomainError):
        catalog_function("power", {"m": 1.5}, 0.0)
    f = catalog_function("power", {"m": 1.5}, 1.0)
    assert f.warnings


def test_taylor_exp_exact():
    c = A.taylor_coeffs(catalog_function("exp"), 0.0, 1.0, 20)
    expected = [1 / math.factorial(k) for k in range(21)]
    assert np.allclose(c.real, expected, rtol=0, atol=1e-15)


def test_taylor_circle_only_function():
    c = A.taylor_coeffs(catalog_function("cos_exp"), 0.0, 1.0, 3)
    # cos(e^z) = cos 1 - sin 1 z - (sin 1 + cos 1) z^2 / 2 + ...
    assert c[0].real == pytest.approx(math.cos(1), abs=1e-14)
    assert c[1].real == pytest.approx(-math.sin(1), abs=1e-14)
    assert c[2].real == pytest.approx(-(math.sin(1) + math.cos(1)) / 2, abs=1e-14)


def test_taylor_large_order_does_not_overflow():
    c = A.taylor_coeffs(catalog_function("exp"), 0.0, 1.0, 250)
    assert np.all(np.isfinite(c))


def test_taylor_circle_reaching_singularity():
    with pytest.raises(DomainError):
        A.taylor_coeffs(catalog_function("log1p"), 0.0, 1.0, 10)


def test_combinations_real_and_odd_vanish_at_zero():
    f = catalog_function("exp")
    p = CombinationParams(0.3, 0.5, 1.0)
    x = np.linspace(0, 5, 11)
    even = A.even_combination(f, p, x)
    odd = A.odd_combination(f, p, x)
    assert even.dtype == float and odd.dtype == float
    assert odd[0] == pytest.approx(0.0, abs=1e-15)
    w = 0.3 + 0.5 * np.exp(1j * x)
    assert np.allclose(even, 2 * np.exp(w).real, atol=1e-14)


def test_constant_annihilated_by_odd_combination():
    x = np.linspace(0.1, 3, 7)
    assert np.all(A.odd_combination(A.constant(2.0), CombinationParams(0, 1, 1), x) == 0)


def test_series_combination_matches_definition():
    g = SeriesFunction((0.3, 1.0, -0.5))
    x = np.array([0.5, 1.0])
    direct = (g(-1j * 0.7 * x) + g(1j * 0.7 * x)) / 2
    assert np.allclose(A.series_combination(g, 0.7, x, "even"), direct.real, atol=1e-15)


def test_boundary_check():
    p = CombinationParams(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        p.check(catalog_function("log1p"))
    assert p.check(catalog_function("log1p"), allow_boundary=True) is True


def test_boundary_angles_log():
    assert A.boundary_angles(catalog_function("log1p"), 0.0, 1.0) == pytest.approx((math.pi,))


@settings(max_examples=40, deadline=None)
@given(
    name=st.sampled_from(["exp", "sinh", "cos_exp", "exp_exp"]),
    alpha=st.floats(-0.5, 0.5),
    beta=st.floats(0.1, 1.5),
    theta=st.floats(0.1, 3.0),
    x=st.floats(0.0, 20.0),
)
def test_even_combination_is_twice_real_part(name, alpha, beta, theta, x):
    f = catalog_function(name)
    value = A.even_combination(f, CombinationParams(alpha, beta, theta), x)
    w = alpha + beta * cmath.exp(1j * theta * x)
    assert value == pytest.approx(2 * complex(f(w)).real, rel=1e-12, abs=1e-12)

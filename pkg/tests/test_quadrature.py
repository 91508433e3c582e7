import math

import numpy as np
import pytest

from pvmaster import kernels as K
from pvmaster.quadrature import (
    PVIntegrand,
    QuadConfig,
    QuadratureParameterError,
    accelerate,
    integrate_panel,
    pv_integrate,
)


def test_integrate_panel_polynomial():
    val, err, ok = integrate_panel(lambda x: x**3, 0.0, 2.0)
    assert ok and val == pytest.approx(4.0, abs=1e-14)


def test_integrate_panel_peaked():
    val, err, ok = integrate_panel(lambda x: 1 / (1e-4 + x * x), -1.0, 1.0, tol=1e-10)
    assert ok
    assert val == pytest.approx(2 * 100 * math.atan(100), rel=1e-10)


def test_accelerate_alternating_series():
    partial = np.cumsum([(-1) ** k / (k + 1) for k in range(40)])
    limit, corr = accelerate(partial, 8)
    assert limit == pytest.approx(math.log(2), abs=1e-9)
    with pytest.raises(QuadratureParameterError):
        accelerate(partial[:3], 8)


def test_dirichlet_integral():
    g = PVIntegrand(lambda x: np.sinc(np.asarray(x) / math.pi), decay_exponent=1, oscillation_rate=1.0)
    res = pv_integrate(g)
    assert res.value == pytest.approx(math.pi / 2, abs=1e-9)


def test_simple_pole_zero():
    g = PVIntegrand(lambda x: 1 / (1 - np.asarray(x) ** 2), poles=(1.0,), decay_exponent=2)
    res = pv_integrate(g)
    assert abs(res.value) <= 1e-10
    assert res.converged


@pytest.mark.parametrize("kind", K.BASE_FACTS)
@pytest.mark.parametrize("a", [1, 2])
def test_base_facts(kind, a):
    res = pv_integrate(K.base_fact_integrand(kind, a, 1.0))
    assert abs(res.value - K.base_fact(kind, a, 1.0)) <= max(1e-8, 3 * res.error_estimate)


def test_result_diagnostics():
    res = pv_integrate(K.base_fact_integrand("cos_over_a2mx2", 1, 1.0))
    assert set(res.diagnostics) >= {"finite", "near_pole", "tail"}
    assert res.evals > 0


def test_integrand_validation():
    with pytest.raises(QuadratureParameterError):
        PVIntegrand(lambda x: x, poles=(1.0, 1.2))
    with pytest.raises(QuadratureParameterError):
        PVIntegrand(lambda x: x, poles=(-1.0,))
    with pytest.raises(QuadratureParameterError):
        PVIntegrand(lambda x: x, decay_exponent=0)


def test_config_validation():
    with pytest.raises(QuadratureParameterError):
        QuadConfig(epsilon0=0.3)
    with pytest.raises(QuadratureParameterError):
        QuadConfig(tail_blocks=4, acceleration_depth=8)


def test_eval_budget_reported():
    res = pv_integrate(K.base_fact_integrand("cos_over_a2mx2", 1, 1.0), QuadConfig(hard_limit_evals=2000))
    assert not res.converged

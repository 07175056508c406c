import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from cesaro.core import WeightFunction
from cesaro.errors import NonConvergenceError, ParameterError
from cesaro.oracle import (
    GAUSS_WEIGHTS,
    KRONROD_NODES,
    KRONROD_WEIGHTS,
    check_hypotheses,
    gauss_kronrod,
    integrate,
    weighted_limit,
)
from cesaro.specfun import tail_limit_constant

PS = (0.5, 1.0, 2.0)
QS = (0.5, 1.0, 2.0, 5.0)


def test_rule_constants():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    gauss_nodes = KRONROD_NODES[GAUSS_WEIGHTS != 0]
    assert np.allclose(np.sort(gauss_nodes), np.polynomial.legendre.leggauss(7)[0], atol=1e-15)
    for d in range(23):
        exact = 0.0 if d % 2 else 2.0 / (d + 1)
        assert KRONROD_WEIGHTS @ KRONROD_NODES**d == pytest.approx(exact, abs=1e-14)


def test_single_panel_polynomial():
    value, err = gauss_kronrod(lambda x: 3 * x**2, 0.0, 1.0)
    assert value == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("p", PS)
@pytest.mark.parametrize("q", QS)
def test_power_family(p, q):
    f = WeightFunction(lambda x: x**q, "increasing")
    assert abs(weighted_limit(1, f, p, 1e-10).value - p / (p + q)) <= 1e-10


@pytest.mark.parametrize("p", PS)
@pytest.mark.parametrize("q", QS)
def test_complementary_family(p, q):
    f = WeightFunction(lambda x: (1 - x) ** q, "decreasing")
    assert abs(weighted_limit(1, f, p, 1e-10).value - tail_limit_constant(p, q)) <= 1e-9


@pytest.mark.parametrize("p", PS)
def test_refinement_invariance(p):
    tol = 1e-10
    f = WeightFunction(lambda x: x ** (-p / 2), "decreasing")
    coarse = weighted_limit(1, f, p, tol, initial_panels=4).value
    fine = weighted_limit(1, f, p, tol, initial_panels=64).value
    assert abs(coarse - fine) <= 2 * tol


def test_against_scipy():
    f = WeightFunction(lambda x: np.exp(-x) * np.cos(3 * x), "none")
    ours = weighted_limit(1, f, 1.5, 1e-12).value
    ref = 1.5 * sp_integrate.quad(lambda x: x**0.5 * math.exp(-x) * math.cos(3 * x), 0, 1, epsabs=1e-14)[0]
    assert ours == pytest.approx(ref, abs=1e-12)


def test_complex_scale():
    f = WeightFunction(lambda x: x, "increasing")
    assert weighted_limit(2 - 1j, f, 1).value == pytest.approx((2 - 1j) / 2, abs=1e-12)


def test_nonintegrable_raises():
    with pytest.raises(NonConvergenceError) as info:
        integrate(lambda x: 1 / x, 0.0, 1.0, tol=1e-10, max_panels=500)
    assert info.value.subdivisions >= 500


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
def test_hypotheses(p):
    ok = check_hypotheses(WeightFunction(lambda x: x ** (-p / 2), "decreasing"), p)
    assert ok.integrability.status == "pass" and ok.stieltjes.status == "pass"
    log = check_hypotheses(WeightFunction(lambda x: -np.log(x), "decreasing"), p)
    assert log.ok
    bad = check_hypotheses(WeightFunction(lambda x: x ** (-p), "decreasing"), p)
    assert bad.integrability.status == "fail" and not bad.ok


def test_hypotheses_need_monotonicity():
    with pytest.raises(ParameterError):
        check_hypotheses(WeightFunction(lambda x: x, "none"), 1)

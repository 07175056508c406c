import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesaro.errors import DomainError
from cesaro.oracle import integrate
from cesaro.specfun import beta, gamma, log_gamma, tail_limit_constant


@pytest.mark.parametrize("n", range(21))
def test_gamma_factorials(n):
    assert gamma(n + 1) == pytest.approx(math.factorial(n), rel=1e-12)


def test_gamma_half():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_log_gamma_against_stdlib():
    for z in np.linspace(0.01, 170, 997):
        assert log_gamma(z) == pytest.approx(math.lgamma(z), rel=1e-13, abs=1e-13)


def test_beta_symmetry():
    grid = np.linspace(0.5, 10, 20)
    for z in grid:
        for t in grid:
            assert beta(z, t) == pytest.approx(beta(t, z), rel=1e-13)


@pytest.mark.parametrize("z", [0.5, 1.3, 2.0, 3.7, 5.0])
@pytest.mark.parametrize("t", [0.5, 1.0, 2.5, 5.0])
def test_beta_against_quadrature(z, t):
    # u = x**z on [0, 1/2] and v = (1-x)**t on [1/2, 1] absorb the endpoint singularities
    left = integrate(lambda u: (1 - u ** (1 / z)) ** (t - 1) / z, 0.0, 0.5**z, tol=1e-12)
    right = integrate(lambda v: (1 - v ** (1 / t)) ** (z - 1) / t, 0.0, 0.5**t, tol=1e-12)
    assert beta(z, t) == pytest.approx(left.value + right.value, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-3, 49.0))
def test_recurrence(z):
    assert log_gamma(z + 1) == pytest.approx(math.log(z) + log_gamma(z), abs=1e-13, rel=1e-13)


def test_tail_constant_closed_form():
    assert tail_limit_constant(1, 2) == pytest.approx(1 / 3, abs=1e-15)
    assert tail_limit_constant(2, 1) == pytest.approx(1 / 3, abs=1e-15)
    assert tail_limit_constant(60, 40) > 0


@pytest.mark.parametrize("bad", [0, -1.5, math.nan, math.inf])
def test_rejects_nonpositive(bad):
    with pytest.raises(DomainError):
        log_gamma(bad)

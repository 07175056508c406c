from fractions import Fraction

import numpy as np
import pytest

from cesaro import cases
from cesaro.core import p_mean


def test_blocks_partial_sums_exact():
    terms = cases.blocks_sequence().values(np.arange(1, 100_001)).real.astype(np.int64)
    direct = np.cumsum(terms)
    closed = [cases.blocks_partial_sum(n) for n in range(1, 100_001)]
    assert direct.tolist() == closed


def test_blocks_first_terms():
    assert cases.blocks_sequence().values(np.arange(1, 9)).real.tolist() == [1, -1, -1, 1, 1, 1, 1, -1]


def test_block_endpoint_means():
    for j in range(1, 12):
        assert cases.blocks_mean_exact(cases.h_index(j)) == Fraction(-1, 3)
        assert cases.blocks_mean_exact(cases.m_index(j)) == cases.m_target(j)


def _spike(x: Fraction) -> int:
    # m**2 when x == 1/m for a positive integer m, else 0
    return x.denominator**2 if x.numerator == 1 else 0


def test_riemann_sums_exact():
    for n in range(1, 2001):
        brute = sum(_spike(Fraction(k, n)) for k in range(1, n + 1))
        assert cases.riemann_failure_sum_exact(n) == brute
        assert cases.riemann_failure_sums(n) * n == pytest.approx(brute, rel=1e-15)


def test_divisors():
    assert cases.divisors(36) == [1, 2, 3, 4, 6, 9, 12, 18, 36]
    assert cases.divisors(1) == [1]


@pytest.mark.parametrize("name", cases.CASE_NAMES)
def test_named_cases(name):
    for check in cases.get_case(name).verify():
        assert check.ok, (check.expected.quantity, check.value, check.expected.target)


@pytest.mark.parametrize("p", cases.FAMILY_PS)
def test_family_registry(p):
    for case in cases.verified_families([p]):
        for check in case.verify():
            assert check.ok, (case.name, check.value, check.expected.target)


def test_unit_increments_have_unit_means():
    for p in (0.5, 2.0, 3.3):
        b = cases.unit_increments(p)
        for n in (1, 10, 1000, 10**5):
            assert p_mean(b, p, n) == pytest.approx(1.0, rel=1e-12)


def test_registry_names():
    names = cases.case_names()
    assert "family:neg-log:alt-sqrt" in names
    assert cases.get_case("family:pow-2:one", p=2.0).params["p"] == 2.0
    with pytest.raises(KeyError):
        cases.get_case("nope")

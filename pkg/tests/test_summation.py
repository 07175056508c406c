import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesaro.summation import UNIT_ROUNDOFF, compensated_sum, tree_sum


def test_matches_fsum_on_mixed_magnitudes(rng):
    x = rng.normal(size=200_000) * 10.0 ** rng.integers(-12, 12, size=200_000)
    res = compensated_sum(x, chunk_size=4096)
    exact = math.fsum(x)
    assert res.value.real == pytest.approx(exact, rel=0, abs=UNIT_ROUNDOFF * abs(exact))
    assert abs(res.value - exact) <= res.rounding_bound


@pytest.mark.parametrize("chunk", [1, 2, 4, 64, 1024, 1 << 16, 1 << 20])
def test_bit_identical_across_chunk_sizes(rng, chunk):
    x = rng.normal(size=12_345) + 1j * rng.normal(size=12_345)
    reference = compensated_sum(x, chunk_size=1 << 16).value
    assert compensated_sum(x, chunk_size=chunk).value == reference


def test_cancellation_is_exact():
    x = np.array([1e16, 1.0, -1e16, 1.0])
    assert compensated_sum(x).value == 2.0


def test_tree_sum_generator_interface():
    total = tree_sum(lambda lo, hi: np.arange(lo, hi, dtype=np.float64), 1001, chunk_size=32)
    assert total.value == 500500


def test_chunk_size_must_be_power_of_two():
    with pytest.raises(ValueError):
        compensated_sum(np.ones(10), chunk_size=3)


def test_real_mode_rejects_complex():
    with pytest.raises(TypeError):
        tree_sum(lambda lo, hi: np.ones(hi - lo, dtype=complex), 4, complex_result=False)


def test_empty_sum():
    assert compensated_sum(np.array([])).value == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e100, 1e100), min_size=1, max_size=300))
def test_bound_covers_error(values):
    res = compensated_sum(np.array(values))
    exact = sum(Fraction(v) for v in values)
    assert abs(Fraction(res.value.real) - exact) <= Fraction(res.rounding_bound)

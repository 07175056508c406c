import numpy as np
import pytest

from cesaro.core import Sequence
from cesaro.errors import BudgetError, ParameterError
from cesaro.multiindex import (
    MultiIndexSequence,
    box_mean,
    box_sums,
    grid_histograms,
    nested_mean,
    predicted_nested_limit,
    predicted_tail_limit,
    tail_mean,
    tail_sums,
)

ONES = Sequence.constant(1.0)


def _random_factor(rng, size=400):
    table = rng.normal(size=size + 1) + 1j * rng.normal(size=size + 1)
    return Sequence(lambda ks: table[ks], "table")


def _as_opaque(a):
    return MultiIndexSequence.opaque(a.evaluate, a.m, a.q)


def test_small_nested_example():
    a = MultiIndexSequence.separable([ONES], 1)
    assert nested_mean(ONES, a, 1, 4) == pytest.approx(0.625, abs=1e-15)


def test_route_equivalence(rng):
    for _ in range(30):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(1, 201 if m < 3 else 60))
        a = MultiIndexSequence.separable([_random_factor(rng) for _ in range(m)], rng.uniform(0.5, 3))
        brute = _as_opaque(a)
        fast_box, slow_box = box_sums(a, n).table, box_sums(brute, n).table
        scale = np.max(np.abs(slow_box)) + 1e-300
        assert np.max(np.abs(fast_box - slow_box)) <= 1e-10 * scale
        fast_tail, slow_tail = tail_sums(a, n), tail_sums(brute, n)
        assert np.max(np.abs(fast_tail - slow_tail)) <= 1e-10 * (np.max(np.abs(slow_tail)) + 1e-300)


def test_nested_routes_agree(rng):
    b = _random_factor(rng)
    a = MultiIndexSequence.separable([_random_factor(rng), _random_factor(rng)], 2)
    assert nested_mean(b, a, 1.5, 300, "box") == pytest.approx(nested_mean(b, a, 1.5, 300, "weighted"), rel=1e-12)


def test_translation_reduction_exact_integers():
    n = 300
    a = MultiIndexSequence.translation_invariant(
        lambda k1, k2: (np.abs(k1 - k2) % 7 + 1).astype(float), 2, 2)
    assert a.spot_check()
    by_shift = box_sums(a, n).table
    brute = tail_sums(a, n, route="brute")
    for k in range(1, n):
        assert brute[k - 1] == by_shift[n - k]
    assert np.array_equal(tail_sums(a, n, route="translation"), brute)


def test_translation_reduction_real_values():
    n = 120
    a = MultiIndexSequence.translation_invariant(
        lambda k1, k2, k3: np.cos(k1 - k2) + np.sin(0.3 * (k3 - k1)), 3, 3)
    fast, brute = tail_sums(a, n), tail_sums(a, n, route="brute")
    assert np.max(np.abs(fast - brute)) <= 1e-11 * np.max(np.abs(brute))


def test_nested_convergence():
    a = MultiIndexSequence.separable([ONES, ONES], 2)
    values = [nested_mean(ONES, a, 1, n) for n in (500, 1000, 2000, 4000)]
    errors = [abs(v - 1 / 3) for v in values]
    assert all(y < x for x, y in zip(errors, errors[1:]))
    assert errors[-1] < 2e-3
    assert predicted_nested_limit(1, 1, 1, 2) == pytest.approx(1 / 3)


def test_tail_convergence():
    a = MultiIndexSequence.translation_invariant(lambda k1, k2: np.ones(np.shape(k1)), 2, 2)
    values = [tail_mean(ONES, a, 1, n) for n in (500, 1000, 2000, 4000)]
    errors = [abs(v - 1 / 3) for v in values]
    assert all(y < x for x, y in zip(errors, errors[1:]))
    assert errors[-1] < 2e-3
    assert predicted_tail_limit(1, 1, 1, 2) == pytest.approx(1 / 3, abs=1e-15)


def test_noninvariant_tail():
    first = Sequence(lambda k: np.sqrt(k) - np.sqrt(k - 1))
    second = Sequence(lambda k: np.sqrt(k.astype(float)))
    a = MultiIndexSequence.separable([first, second], 2)
    value = tail_mean(ONES, a, 1, 4000)
    assert abs(value - 8 / 45) < 1e-2
    assert abs(value - 2 / 9) >= 0.03


def test_box_sums_monotone_for_nonnegative():
    a = MultiIndexSequence.separable([Sequence(lambda k: 1.0 / k)] * 2, 2)
    assert box_sums(a, 100).is_nondecreasing()


def test_spot_check_rejects_wrong_declaration():
    a = MultiIndexSequence.translation_invariant(lambda k1, k2: (k1 * k2).astype(float), 2, 2)
    assert not a.spot_check()


def test_budget():
    a = MultiIndexSequence.opaque(lambda *ks: np.ones(np.shape(ks[0])), 3, 3)
    with pytest.raises(BudgetError):
        grid_histograms(a, 1000)
    with pytest.raises(BudgetError):
        box_mean(a, 100, budget=10)


def test_bad_arguments():
    with pytest.raises(ParameterError):
        MultiIndexSequence.separable([ONES] * 7, 7)
    with pytest.raises(ParameterError):
        MultiIndexSequence.separable([ONES], 0)
    a = MultiIndexSequence.separable([ONES], 1)
    with pytest.raises(ParameterError):
        tail_mean(ONES, a, 1, 1)
    with pytest.raises(ParameterError):
        tail_sums(a, 10, route="translation")

"""Averages of multi-index sequences a(k_1, ..., k_m).

Three quantities are computed at finite n:

* the box mean ``n**-q * sum_{[1..n]^m} a``;
* the nested mean ``n**-(p+q) * sum_k b_k * S(k)`` with ``S(k)`` the box sum
  over ``[1..k]^m``;
* the tail mean ``n**-(p+q) * sum_k b_k * sum_{[k+1..n]^m} a``.

How the inner sums are formed depends on the declared structure.  Separable
sequences factor into one-dimensional prefix/suffix sums.  For
translation-invariant sequences a tail box ``[k+1..n]^m`` is a shifted copy
of ``[1..n-k]^m``, and every box sum follows from the values on tuples whose
smallest index is 1.  Opaque sequences are summed by brute force under a
fixed evaluation budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

from .core import Sequence, WeightFunction, cesaro_mean, check_exponent
from .errors import BudgetError, ParameterError
from .specfun import tail_limit_constant
from .summation import compensated_sum, tree_sum

Structure = Literal["separable", "translation_invariant", "opaque"]

EVALUATION_BUDGET = 10**7
MAX_ARITY = 6
_FLAT_CHUNK = 1 << 20


@dataclass(frozen=True)
class MultiIndexSequence:
    """A complex array a(k_1, ..., k_m) on positive integer indices.

    ``func`` takes m broadcastable int64 arrays and returns the values.  For
    separable sequences ``factors`` holds the m one-dimensional factors and
    ``func`` is optional (if given, it is what :meth:`spot_check` compares
    against the factor product).
    """

    m: int
    structure: Structure
    q: float
    factors: tuple[Sequence, ...] = ()
    func: Optional[Callable[..., np.ndarray]] = None
    known_box_limit: Optional[complex] = None
    label: str = ""
    nonnegative: bool = False

    def __post_init__(self):
        if not (1 <= self.m <= MAX_ARITY):
            raise ParameterError(f"arity m must be in 1..{MAX_ARITY}, got {self.m}")
        check_exponent(self.q, "q")
        if self.structure == "separable":
            if len(self.factors) != self.m:
                raise ParameterError(f"separable sequence needs {self.m} factors, got {len(self.factors)}")
        elif self.structure in ("translation_invariant", "opaque"):
            if self.func is None:
                raise ParameterError(f"{self.structure} sequence needs an evaluation function")
        else:
            raise ParameterError(f"unknown structure {self.structure!r}")

    @classmethod
    def separable(cls, factors, q, known_box_limit=None, label="", func=None, nonnegative=False):
        factors = tuple(factors)
        return cls(len(factors), "separable", float(q), factors, func, known_box_limit, label, nonnegative)

    @classmethod
    def translation_invariant(cls, func, m, q, known_box_limit=None, label="", nonnegative=False):
        return cls(m, "translation_invariant", float(q), (), func, known_box_limit, label, nonnegative)

    @classmethod
    def opaque(cls, func, m, q, known_box_limit=None, label="", nonnegative=False):
        return cls(m, "opaque", float(q), (), func, known_box_limit, label, nonnegative)

    def evaluate(self, *ks) -> np.ndarray:
        if len(ks) != self.m:
            raise ParameterError(f"expected {self.m} index arrays, got {len(ks)}")
        ks = np.broadcast_arrays(*(np.asarray(k, dtype=np.int64) for k in ks))
        if self.structure == "separable" and self.func is None:
            out = np.ones(ks[0].shape, dtype=np.complex128)
            for factor, k in zip(self.factors, ks):
                out = out * factor.values(k)
            return out
        return np.asarray(self.func(*ks), dtype=np.complex128) * np.ones(ks[0].shape)

    def _factor_product(self, ks) -> np.ndarray:
        out = np.ones(ks[0].shape, dtype=np.complex128)
        for factor, k in zip(self.factors, ks):
            out = out * factor.values(k)
        return out

    def spot_check(self, samples: int = 100, index_max: int = 1000, seed: int = 0) -> bool:
        """Spot-check the declared structure on random tuples.

        Separable: a direct ``func`` (when present) equals the factor
        product.  Translation invariant: a(k - h) == a(k) for 0 < h < min(k).
        Opaque sequences have nothing to check.
        """
        rng = np.random.default_rng(seed)
        ks = [rng.integers(2, index_max + 1, samples) for _ in range(self.m)]
        if self.structure == "separable":
            if self.func is None:
                return True
            direct = np.asarray(self.func(*ks), dtype=np.complex128)
            return bool(np.allclose(direct, self._factor_product(ks), rtol=1e-12, atol=0))
        if self.structure == "translation_invariant":
            low = np.minimum.reduce(ks)
            h = rng.integers(1, low)  # 1 <= h < min(k)
            shifted = [k - h for k in ks]
            return bool(np.allclose(self.evaluate(*shifted), self.evaluate(*ks), rtol=1e-12, atol=0))
        return True


@dataclass(frozen=True)
class BoxSum:
    """Table S(j) of box sums over [1..j]^m for j = 0..n_max (S(0) = 0)."""

    table: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.table) - 1

    def __call__(self, j: int) -> complex:
        return complex(self.table[j])

    def is_nondecreasing(self) -> bool:
        t = self.table
        return bool(np.all(np.diff(t.real) >= 0) and np.all(t.imag == 0))


def _check_n(n, minimum=1) -> int:
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise ParameterError(f"n must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _prefix(values: np.ndarray) -> np.ndarray:
    return np.concatenate([[0j], np.cumsum(values)])


def _suffix(values: np.ndarray) -> np.ndarray:
    # out[k] = sum_{j > k} values[j-1], for k = 0..n
    return np.concatenate([np.cumsum(values[::-1])[::-1], [0j]])


def _bincount_complex(idx: np.ndarray, weights: np.ndarray, length: int) -> np.ndarray:
    return np.bincount(idx, weights.real, length) + 1j * np.bincount(idx, weights.imag, length)


def grid_histograms(a: MultiIndexSequence, n: int, budget: int = EVALUATION_BUDGET):
    """Brute-force pass over [1..n]^m.

    Returns ``(by_max, by_min)``, arrays of length n + 1 where ``by_max[s]``
    sums a over tuples whose largest index is s and ``by_min[s]`` over tuples
    whose smallest index is s.
    """
    total = n**a.m
    if total > budget:
        raise BudgetError(
            f"brute force over [1..{n}]^{a.m} needs {total} evaluations (budget {budget}); "
            "declare the sequence separable or translation invariant"
        )
    by_max = np.zeros(n + 1, dtype=np.complex128)
    by_min = np.zeros(n + 1, dtype=np.complex128)
    shape = (n,) * a.m
    for start in range(0, total, _FLAT_CHUNK):
        flat = np.arange(start, min(start + _FLAT_CHUNK, total))
        ks = [c + 1 for c in np.unravel_index(flat, shape)]
        vals = a.evaluate(*ks)
        by_max += _bincount_complex(np.maximum.reduce(ks), vals, n + 1)
        by_min += _bincount_complex(np.minimum.reduce(ks), vals, n + 1)
    return by_max, by_min


def _normal_form_masses(a: MultiIndexSequence, n: int, budget: int) -> np.ndarray:
    """A[s] = sum of a over tuples with min index 1 and max index s, s <= n."""
    count = n**a.m - (n - 1) ** a.m
    if count > budget:
        raise BudgetError(f"{count} normal-form evaluations exceed the budget {budget}")
    masses = np.zeros(n + 1, dtype=np.complex128)
    m = a.m
    # split by the position i of the first coordinate equal to 1
    for i in range(m):
        shape = (n - 1,) * i + (n,) * (m - 1 - i)
        size = math.prod(shape)
        for start in range(0, size, _FLAT_CHUNK):
            flat = np.arange(start, min(start + _FLAT_CHUNK, size))
            coords = np.unravel_index(flat, shape) if shape else ()
            before = [c + 2 for c in coords[:i]]
            after = [c + 1 for c in coords[i:]]
            ones = np.ones(len(flat), dtype=np.int64)
            ks = before + [ones] + after
            vals = a.evaluate(*ks)
            masses += _bincount_complex(np.maximum.reduce(ks), vals, n + 1)
    return masses


def box_sums(a: MultiIndexSequence, n: int, budget: int = EVALUATION_BUDGET) -> BoxSum:
    """S(j) for j = 0..n, built with the cheapest route the structure allows."""
    n = _check_n(n)
    ks = np.arange(1, n + 1)
    if a.structure == "separable":
        table = np.ones(n + 1, dtype=np.complex128)
        for factor in a.factors:
            table = table * _prefix(factor.values(ks))
        table[0] = 0
        return BoxSum(table)
    if a.structure == "translation_invariant":
        masses = _normal_form_masses(a, n, budget)
        return BoxSum(np.cumsum(np.cumsum(masses)))
    by_max, _ = grid_histograms(a, n, budget)
    return BoxSum(np.cumsum(by_max))


def box_mean(a: MultiIndexSequence, n: int, budget: int = EVALUATION_BUDGET) -> complex:
    """``n**-q`` times the sum of a over the box [1..n]^m."""
    n = _check_n(n)
    if a.structure == "separable":
        ks = np.arange(1, n + 1)
        total = 1 + 0j
        for factor in a.factors:
            total *= compensated_sum(factor.values(ks)).value
    else:
        total = box_sums(a, n, budget)(n)
    return total / float(n) ** a.q


def _weighted_total(b: Sequence, inner: np.ndarray, n: int, exponent: float) -> complex:
    # inner[k-1] is the inner sum attached to b_k
    ks = np.arange(1, n + 1)
    bk = b.values(ks)
    terms = bk * inner
    total = tree_sum(lambda lo, hi: terms[lo:hi], n).value
    return total / float(n) ** exponent


def nested_mean(
    b: Sequence, a: MultiIndexSequence, p, n: int, route: str = "box", budget: int = EVALUATION_BUDGET
) -> complex:
    """``n**-(p+q) * sum_{k<=n} b_k * S(k)``.

    ``route="box"`` sums b_k S(k) directly.  ``route="weighted"`` rewrites
    the mean as the weighted Cesaro mean of k -> b_k S(k) / k**q against
    the weight x**q, which is how the limit ab*p/(p+q) is derived.
    """
    p = check_exponent(p)
    n = _check_n(n)
    table = box_sums(a, n, budget).table
    if route == "box":
        return _weighted_total(b, table[1:], n, p + a.q)
    if route == "weighted":
        q = a.q
        normalised = Sequence(lambda ks: table[ks] / ks.astype(np.float64) ** q, "S(k)/k^q")
        weight = WeightFunction(lambda x: x**q, "increasing", f"x^{q}")
        prod = Sequence(lambda ks: b.values(ks) * normalised.values(ks), f"({b.label})*S(k)/k^q")
        return cesaro_mean(prod, weight, p, n)
    raise ParameterError(f"unknown nested route {route!r}")


def tail_sums(a: MultiIndexSequence, n: int, route: Optional[str] = None, budget: int = EVALUATION_BUDGET):
    """T(k) = sum of a over [k+1..n]^m for k = 1..n (T(n) = 0), as an array of length n."""
    n = _check_n(n)
    route = route or {"translation_invariant": "translation", "separable": "separable"}.get(a.structure, "brute")
    if route == "translation":
        if a.structure != "translation_invariant":
            raise ParameterError("the translation route needs a translation-invariant sequence")
        table = box_sums(a, n, budget).table
        return table[n - np.arange(1, n + 1)]
    if route == "separable":
        if a.structure != "separable":
            raise ParameterError("the separable route needs a separable sequence")
        ks = np.arange(1, n + 1)
        out = np.ones(n, dtype=np.complex128)
        for factor in a.factors:
            out = out * _suffix(factor.values(ks))[1:]
        return out
    if route == "brute":
        _, by_min = grid_histograms(a, n, budget)
        return _suffix(by_min[1:])[1:]
    raise ParameterError(f"unknown tail route {route!r}")


def tail_mean(
    b: Sequence, a: MultiIndexSequence, p, n: int, route: Optional[str] = None, budget: int = EVALUATION_BUDGET
) -> complex:
    """``n**-(p+q) * sum_{k<=n} b_k * sum_{[k+1..n]^m} a``.

    The default route follows the structure: shifted box sums for
    translation-invariant sequences, factor suffix sums for separable ones,
    brute force otherwise.
    """
    p = check_exponent(p)
    n = _check_n(n, minimum=2)
    return _weighted_total(b, tail_sums(a, n, route, budget), n, p + a.q)


def predicted_nested_limit(a: complex, b: complex, p, q) -> complex:
    """Limit a*b*p/(p+q) of the nested mean."""
    p = check_exponent(p)
    q = check_exponent(q, "q")
    return complex(a) * complex(b) * p / (p + q)


def predicted_tail_limit(a: complex, b: complex, p, q) -> complex:
    """Limit a*b*Gamma(p+1)Gamma(q+1)/Gamma(p+q+1) of the tail mean (translation-invariant case)."""
    p = check_exponent(p)
    q = check_exponent(q, "q")
    return complex(a) * complex(b) * tail_limit_constant(p, q)

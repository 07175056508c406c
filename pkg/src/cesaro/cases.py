"""Registry of named sequences, weights and multi-index cases.

Each :class:`NamedCase` carries the objects it is about and a list of
expected values, each of which can be recomputed through the public
operations with :meth:`NamedCase.verify`.  Integer-valued quantities (block
sums, divisor sums) are also available in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .core import Sequence, WeightFunction, cesaro_mean, p_mean, product_sequence
from .errors import ParameterError
from .multiindex import MultiIndexSequence, box_mean, predicted_tail_limit, tail_mean
from .oracle import weighted_limit
from .specfun import tail_limit_constant

# ---------------------------------------------------------------------------
# the +-1 block sequence: block j has length 2**j and sign (-1)**j


def block_index(k):
    """Block containing index k (k >= 1): block j covers 2**j <= k < 2**(j+1)."""
    if np.ndim(k) == 0:
        return int(k).bit_length() - 1
    _, exponent = np.frexp(np.asarray(k, dtype=np.float64))
    return exponent.astype(np.int64) - 1


def _blocks(ks):
    j = block_index(ks)
    return (1 - 2 * (j & 1)).astype(np.complex128)


def blocks_sequence() -> Sequence:
    return Sequence(_blocks, "blocks")


def blocks_partial_sum(n: int) -> int:
    """Exact sum of the first n block-sequence terms."""
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    if n == 0:
        return 0
    j = n.bit_length() - 1
    # completed blocks 0..j-1 contribute sum (-2)**i = (1 - (-2)**j) / 3
    completed = (1 - (-2) ** j) // 3
    return completed + (-1) ** j * (n - (2**j - 1))


def blocks_mean_exact(n: int) -> Fraction:
    return Fraction(blocks_partial_sum(n), n)


def m_index(j: int) -> int:
    """End of block 2j, where the running mean is (2*4**j + 1) / (3 (2*4**j - 1))."""
    return 2 * 4**j - 1


def h_index(j: int) -> int:
    """End of block 2j+1, where the running mean is exactly -1/3."""
    return 4 ** (j + 1) - 1


def m_target(j: int) -> Fraction:
    return Fraction(2 * 4**j + 1, 3 * (2 * 4**j - 1))


def interleaved_block_grid(j_max: int = 10, j_min: int = 1) -> list[int]:
    grid = []
    for j in range(j_min, j_max + 1):
        grid += [m_index(j), h_index(j)]
    return grid


# ---------------------------------------------------------------------------
# Riemann sums of f = sum_m m**2 * indicator{1/m}


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def riemann_failure_sum_exact(n: int) -> int:
    """n * R_n = sum_{k<=n} f(k/n), i.e. the sum of squared divisors of n.

    f(k/n) is nonzero exactly when k/n = 1/m, i.e. m * k == n, and then
    equals m**2 = (n/k)**2; as k runs over the divisors of n so does n/k.
    """
    return sum(d * d for d in divisors(n))


def riemann_failure_sums(n: int) -> float:
    """R_n = (1/n) * sum_{d | n} d**2, the uniform Riemann sums of the spike function."""
    return riemann_failure_sum_exact(n) / n


# ---------------------------------------------------------------------------
# product of a null sequence with a mean-convergent sequence of unbounded |b|-means


def _half_index(ks):
    # k = 2t - 1 or k = 2t  ->  2t
    return (ks + (ks & 1)).astype(np.float64)


def lemma_failure_pair() -> tuple[Sequence, Sequence]:
    def a_terms(ks):
        sign = np.where(ks & 1, -1.0, 1.0)
        return (sign / np.sqrt(_half_index(ks))).astype(np.complex128)

    def b_terms(ks):
        root = np.sqrt(_half_index(ks))
        return np.where(ks & 1, -root, 1.0 + root).astype(np.complex128)

    a = Sequence(a_terms, "lemma-failure a", known_limit=0j)
    b = Sequence(b_terms, "lemma-failure b", known_p_mean_limit=(1.0, 0.5 + 0j))
    return a, b


# ---------------------------------------------------------------------------
# named cases


@dataclass(frozen=True)
class Expected:
    quantity: str
    target: complex
    tolerance: float
    evaluate: Callable[[], complex] = field(repr=False, compare=False)


@dataclass(frozen=True)
class Check:
    expected: Expected
    value: complex
    ok: bool


@dataclass(frozen=True)
class NamedCase:
    name: str
    objects: dict
    expected: tuple[Expected, ...]
    params: dict = field(default_factory=dict)
    description: str = ""

    def verify(self) -> list[Check]:
        out = []
        for e in self.expected:
            value = complex(e.evaluate())
            out.append(Check(e, value, abs(value - e.target) <= e.tolerance))
        return out


def blocks_case(j_max: int = 10) -> NamedCase:
    b = blocks_sequence()
    expected = []
    for j in range(1, j_max + 1):
        expected.append(Expected(f"p_mean(b, 1, h_{j}={h_index(j)})", -1 / 3, 1e-12,
                                 lambda j=j: p_mean(b, 1, h_index(j))))
        expected.append(Expected(f"p_mean(b, 1, m_{j}={m_index(j)})", float(m_target(j)), 1e-12,
                                 lambda j=j: p_mean(b, 1, m_index(j))))
    for n in (1, 100, 12345):
        expected.append(Expected(f"p_mean(|b|, 1, {n})", 1.0, 0.0, lambda n=n: p_mean(b.abs(), 1, n)))
    return NamedCase("blocks", {"b": b}, tuple(expected), {"p": 1.0, "j_max": j_max},
                     "+-1 blocks of length 2**j: absolute means are 1, running means oscillate between +-1/3")


def riemann_failure_case() -> NamedCase:
    expected = (
        Expected("R_1", 1.0, 0.0, lambda: riemann_failure_sums(1)),
        Expected("R_6", 50 / 6, 0.0, lambda: riemann_failure_sums(6)),
        Expected("R_12", 210 / 12, 0.0, lambda: riemann_failure_sums(12)),
    )
    return NamedCase("riemann-failure", {}, expected, {},
                     "uniform Riemann sums of f = sum m^2 1{1/m} grow at least like n")


def lemma_failure_case(n: int = 2 * 10**6) -> NamedCase:
    a, b = lemma_failure_pair()
    ab = product_sequence(a, b)
    expected = (
        Expected(f"p_mean(b, 1, {n})", 0.5, 1e-3, lambda: p_mean(b, 1, n)),
        Expected(f"p_mean(ab, 1, {n})", 1.0, 1e-2, lambda: p_mean(ab, 1, n)),
    )
    return NamedCase("lemma-failure", {"a": a, "b": b, "ab": ab}, expected, {"p": 1.0},
                     "a -> 0 and b has 1-mean 1/2, yet the product has 1-mean 1")


def noninvariant_tail_case() -> NamedCase:
    first = Sequence(lambda k: np.sqrt(k) - np.sqrt(k - 1), "sqrt(k)-sqrt(k-1)")
    second = Sequence(lambda k: np.sqrt(k.astype(np.float64)), "sqrt(k)")
    a = MultiIndexSequence.separable(
        [first, second], 2.0, known_box_limit=2 / 3, label="(sqrt(k1)-sqrt(k1-1))*sqrt(k2)",
        func=lambda k1, k2: (np.sqrt(k1) - np.sqrt(k1 - 1)) * np.sqrt(k2),
    )
    b = Sequence.constant(1.0, "1")
    expected = (
        Expected("box_mean(a, 10^6)", 2 / 3, 1e-3, lambda: box_mean(a, 10**6)),
        Expected("tail_mean(b, a, 1, 4000)", 8 / 45, 1e-2, lambda: tail_mean(b, a, 1, 4000)),
        Expected("predicted_tail_limit(2/3, 1, 1, 2)", 2 / 9, 1e-12,
                 lambda: predicted_tail_limit(2 / 3, 1, 1, 2)),
    )
    return NamedCase("noninvariant-tail", {"a": a, "b": b}, expected, {"p": 1.0, "q": 2.0, "m": 2},
                     "without translation invariance the tail mean tends to 8/45, not ab/3 = 2/9")


# ---------------------------------------------------------------------------
# families where the limit formula applies


def unit_increments(p: float) -> Sequence:
    """b_k = k**p - (k-1)**p, whose p-means are identically 1 (b = 1 when p = 1)."""
    if p == 1.0:
        return Sequence(lambda ks: np.ones(ks.shape, dtype=np.complex128), "one", (1.0, 1 + 0j), 1 + 0j)

    def terms(ks):
        k = ks.astype(np.float64)
        out = np.power(k, p) * -np.expm1(p * np.log1p(-1.0 / np.maximum(k, 2.0)))
        return np.where(ks == 1, 1.0, out).astype(np.complex128)

    return Sequence(terms, f"k^{p}-(k-1)^{p}", (p, 1 + 0j))


FAMILY_COMPLEX_SCALE = 1.0 - 0.5j


def family_sequences(p: float) -> dict[str, Sequence]:
    unit = unit_increments(p)
    alt = Sequence(lambda ks: 1 + (-1.0) ** (ks & 1) / np.sqrt(ks.astype(np.float64)), "1+(-1)^k/sqrt(k)",
                   known_limit=1 + 0j)
    shift = Sequence(lambda ks: FAMILY_COMPLEX_SCALE * (1 + 1 / ks.astype(np.float64)), "c*(1+1/k)",
                     known_limit=FAMILY_COMPLEX_SCALE)
    # (-1)**(k & 1) is -1 on odd k, matching (-1)**k
    return {
        "one": unit,
        "alt-sqrt": product_sequence(alt, unit),
        "complex": product_sequence(shift, unit),
    }


def family_weights(p: float) -> dict[str, tuple[WeightFunction, float]]:
    """Weights with the closed form of p * int_0^1 x**(p-1) f(x) dx."""
    alpha = p / 2
    return {
        "pow-0.5": (WeightFunction(np.sqrt, "increasing", "x^0.5"), p / (p + 0.5)),
        "pow-2": (WeightFunction(lambda x: x * x, "increasing", "x^2"), p / (p + 2)),
        "comp-0.5": (WeightFunction(lambda x: np.sqrt(1 - x), "decreasing", "(1-x)^0.5"), tail_limit_constant(p, 0.5)),
        "comp-2": (WeightFunction(lambda x: (1 - x) ** 2, "decreasing", "(1-x)^2"), tail_limit_constant(p, 2)),
        "sing-half-p": (WeightFunction(lambda x: x**-alpha, "decreasing", f"x^-{alpha}"), p / (p - alpha)),
        "neg-log": (WeightFunction(lambda x: -np.log(x), "decreasing", "-log(x)"), 1 / p),
    }


FAMILY_PS = (0.5, 1.0, 2.0)


def family_case(weight: str, sequence: str, p: float) -> NamedCase:
    weights = family_weights(p)
    sequences = family_sequences(p)
    if weight not in weights or sequence not in sequences:
        raise KeyError(f"unknown family member {weight}:{sequence}")
    f, integral = weights[weight]
    b = sequences[sequence]
    b_lim = b.known_p_mean_limit[1]
    limit = b_lim * integral
    expected = (
        Expected("weighted_limit(tol=1e-10)", limit, 1e-10,
                 lambda: weighted_limit(b_lim, f, p, 1e-10).value),
    )
    return NamedCase(f"family:{weight}:{sequence}", {"b": b, "f": f}, expected,
                     {"p": p, "b_limit": b_lim, "limit": limit})


def verified_families(ps=FAMILY_PS) -> list[NamedCase]:
    out = []
    for p in ps:
        for w in family_weights(p):
            for s in family_sequences(p):
                out.append(family_case(w, s, p))
    return out


CASE_NAMES = ("blocks", "riemann-failure", "lemma-failure", "noninvariant-tail")


def case_names() -> list[str]:
    fam = [f"family:{w}:{s}" for w in family_weights(1.0) for s in family_sequences(1.0)]
    return list(CASE_NAMES) + fam


def get_case(name: str, p: float = 1.0) -> NamedCase:
    builders = {
        "blocks": blocks_case,
        "riemann-failure": riemann_failure_case,
        "lemma-failure": lemma_failure_case,
        "noninvariant-tail": noninvariant_tail_case,
    }
    if name in builders:
        return builders[name]()
    if name.startswith("family:"):
        parts = name.split(":")
        if len(parts) == 3:
            return family_case(parts[1], parts[2], float(p))
    raise KeyError(f"unknown case {name!r}; known: {', '.join(case_names())}")

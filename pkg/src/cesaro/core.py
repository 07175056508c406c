"""Sequences, weight functions and the weighted Cesaro means built from them.

The central quantity is

    M(b, f, p; n) = n**-p * sum_{k=1}^{n} b_k f(k/n)

for a complex sequence ``b``, a real weight ``f`` on (0, 1] and an exponent
``p > 0``.  All sums go through :mod:`cesaro.summation`, so results do not
depend on how the index range is chunked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Sequence as _Seq

import numpy as np

from .errors import EvaluationError, ParameterError
from .summation import DEFAULT_CHUNK, tree_sum

Monotonicity = Literal["increasing", "decreasing", "none"]


def check_exponent(p, name: str = "p") -> float:
    """Return ``p`` as a float after checking it is finite and positive."""
    if isinstance(p, CesaroParams):
        return p.p
    try:
        value = float(p)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a real number, got {p!r}") from None
    if not math.isfinite(value) or value <= 0:
        raise ParameterError(f"{name} must be finite and > 0, got {p!r}")
    return value


def _check_n(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class CesaroParams:
    p: float

    def __post_init__(self):
        value = float(self.p)
        if not math.isfinite(value) or value <= 0:
            raise ParameterError(f"p must be finite and > 0, got {self.p!r}")
        object.__setattr__(self, "p", value)


@dataclass(frozen=True)
class Sequence:
    """A complex sequence k -> b_k on k >= 1.

    ``func`` is vectorised: it receives an int64 array of indices and returns
    an array of the same shape.  Use :meth:`from_scalar` to wrap a plain
    callable.  ``known_p_mean_limit`` is an optional ``(p, b)`` pair and
    ``known_limit`` the ordinary limit of b_k, when either is known.
    """

    func: Callable[[np.ndarray], np.ndarray]
    label: str = ""
    known_p_mean_limit: Optional[tuple[float, complex]] = None
    known_limit: Optional[complex] = None

    @classmethod
    def from_scalar(cls, fn: Callable[[int], complex], label: str = "", **known):
        def vectorised(ks):
            return np.array([complex(fn(int(k))) for k in ks], dtype=np.complex128)

        return cls(vectorised, label, **known)

    @classmethod
    def constant(cls, value: complex, label: str = ""):
        return cls(
            lambda ks: np.full(ks.shape, value, dtype=np.complex128),
            label or f"const({value})",
            (1.0, complex(value)),
            complex(value),
        )

    def values(self, ks) -> np.ndarray:
        ks = np.asarray(ks, dtype=np.int64)
        return np.asarray(self.func(ks), dtype=np.complex128).reshape(ks.shape)

    def __call__(self, k: int) -> complex:
        if int(k) != k or k < 1:
            raise ParameterError(f"sequence index must be a positive integer, got {k!r}")
        return complex(self.values(np.array([int(k)]))[0])

    def scaled(self, c: complex) -> "Sequence":
        lim = self.known_p_mean_limit
        return Sequence(
            lambda ks: c * self.values(ks),
            f"{c}*({self.label})",
            None if lim is None else (lim[0], c * lim[1]),
            None if self.known_limit is None else c * self.known_limit,
        )

    def abs(self) -> "Sequence":
        return Sequence(lambda ks: np.abs(self.values(ks)).astype(np.complex128), f"|{self.label}|")

    def __add__(self, other: "Sequence") -> "Sequence":
        lims = (self.known_p_mean_limit, other.known_p_mean_limit)
        lim = None
        if lims[0] is not None and lims[1] is not None and lims[0][0] == lims[1][0]:
            lim = (lims[0][0], lims[0][1] + lims[1][1])
        return Sequence(lambda ks: self.values(ks) + other.values(ks), f"({self.label})+({other.label})", lim)


@dataclass(frozen=True)
class WeightFunction:
    """A real weight f on (0, 1], vectorised over float arrays."""

    func: Callable[[np.ndarray], np.ndarray]
    monotonicity: Monotonicity = "none"
    label: str = ""

    def __post_init__(self):
        if self.monotonicity not in ("increasing", "decreasing", "none"):
            raise ParameterError(f"unknown monotonicity {self.monotonicity!r}")

    def values(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        out = np.asarray(self.func(xs))
        if np.iscomplexobj(out):
            if np.any(out.imag != 0):
                raise EvaluationError(f"weight {self.label!r} returned complex values")
            out = out.real
        return np.broadcast_to(out.astype(np.float64, copy=False), xs.shape)

    def __call__(self, x: float) -> float:
        return float(self.values(np.array([x]))[0])

    def check_monotone(self, samples: int = 10_000) -> bool:
        """Check the declared monotonicity on an even grid of ``samples`` points in (0, 1]."""
        if self.monotonicity == "none":
            return True
        xs = np.arange(1, samples + 1) / samples
        diffs = np.diff(self.values(xs))
        if self.monotonicity == "increasing":
            return bool(np.all(diffs >= 0))
        return bool(np.all(diffs <= 0))


@dataclass(frozen=True)
class MeanSeries:
    grid: tuple[int, ...]
    values: tuple[complex, ...]
    rounding_bound: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        if len(self.values) != len(self.grid) or len(self.rounding_bound) != len(self.grid):
            raise ParameterError("grid, values and rounding_bound must have equal length")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ParameterError("grid must be strictly ascending")
        if any(not (r >= 0) for r in self.rounding_bound):
            raise ParameterError("rounding bounds must be nonnegative")

    def __len__(self):
        return len(self.grid)


@dataclass(frozen=True)
class MeanResult:
    value: complex
    rounding_bound: float


ONE = WeightFunction(lambda xs: np.ones_like(xs), "increasing", "1")


def _weighted_terms(b: Sequence, f: WeightFunction, n: int):
    def terms(lo, hi):
        ks = np.arange(lo + 1, hi + 1, dtype=np.int64)
        fx = f.values(ks / n)
        bad = ~np.isfinite(fx)
        if bad.any():
            k = int(ks[np.argmax(bad)])
            raise EvaluationError(f"weight {f.label!r} is not finite at k/n = {k}/{n}", index=k, n=n)
        bk = b.values(ks)
        bad = ~np.isfinite(bk)
        if bad.any():
            k = int(ks[np.argmax(bad)])
            raise EvaluationError(f"sequence {b.label!r} is not finite at k = {k}", index=k, n=n)
        return bk * fx

    return terms


def cesaro_mean_with_bound(
    b: Sequence, f: WeightFunction, p, n: int, chunk_size: int = DEFAULT_CHUNK
) -> MeanResult:
    p = check_exponent(p)
    n = _check_n(n)
    total = tree_sum(_weighted_terms(b, f, n), n, chunk_size)
    scale = float(n) ** p
    value = complex(total.value.real / scale, total.value.imag / scale)
    bound = total.rounding_bound / scale + 2 * np.finfo(float).eps * abs(value)
    return MeanResult(value, bound)


def cesaro_mean(b: Sequence, f: WeightFunction, p, n: int, chunk_size: int = DEFAULT_CHUNK) -> complex:
    """Weighted Cesaro mean ``n**-p * sum_{k<=n} b_k f(k/n)``."""
    return cesaro_mean_with_bound(b, f, p, n, chunk_size).value


def p_mean(b: Sequence, p, n: int, chunk_size: int = DEFAULT_CHUNK) -> complex:
    """Cesaro p-average ``n**-p * sum_{k<=n} b_k``."""
    return cesaro_mean(b, ONE, p, n, chunk_size)


def power_grid(p: float, n: int, ks: np.ndarray) -> np.ndarray:
    """Rounded values of ``(k/n)**p``, exact 1 at k == n, made nondecreasing in k."""
    ks = np.asarray(ks)
    with np.errstate(divide="ignore"):
        t = np.exp(p * np.log(ks / n))
    t[ks == n] = 1.0
    t[ks == 0] = 0.0
    return t


def stieltjes_increments(p, n: int, lo: int = 0, hi: Optional[int] = None):
    """Increments ``(k/n)**p - ((k-1)/n)**p`` for ``lo < k <= hi`` as exact pairs.

    Each increment is returned as ``hi_part + lo_part``, the exact difference
    of consecutive rounded powers.  The powers are forced nondecreasing, so
    every pair sums to a nonnegative number, and the pairs telescope exactly
    to ``(hi/n)**p - (lo/n)**p``.
    """
    p = check_exponent(p)
    n = _check_n(n)
    hi = n if hi is None else hi
    ks = np.arange(lo, hi + 1)
    t = np.maximum.accumulate(power_grid(p, n, ks))
    upper, lower = t[1:], -t[:-1]
    head = upper + lower
    virtual = head - upper
    tail = (upper - (head - virtual)) + (lower - virtual)
    return head, tail


def stieltjes_weight_sum(f: WeightFunction, p, n: int, chunk_size: int = DEFAULT_CHUNK) -> float:
    """Riemann-Stieltjes sum ``sum_k f(k/n) [(k/n)**p - ((k-1)/n)**p]``."""
    p = check_exponent(p)
    n = _check_n(n)

    def terms(lo, hi):
        # two interleaved terms per index: f * head and f * tail
        k_lo, k_hi = lo // 2, (hi + 1) // 2
        ks = np.arange(k_lo + 1, k_hi + 1)
        fx = f.values(ks / n)
        bad = ~np.isfinite(fx)
        if bad.any():
            k = int(ks[np.argmax(bad)])
            raise EvaluationError(f"weight {f.label!r} is not finite at k/n = {k}/{n}", index=k, n=n)
        head, tail = stieltjes_increments(p, n, k_lo, k_hi)
        both = np.empty(2 * len(ks))
        both[0::2] = fx * head
        both[1::2] = fx * tail
        return both[lo - 2 * k_lo : hi - 2 * k_lo]

    return tree_sum(terms, 2 * n, chunk_size, complex_result=False).value


def product_sequence(a: Sequence, b: Sequence) -> Sequence:
    """Pointwise product k -> a_k b_k.

    When ``a`` carries an ordinary limit and ``b`` a p-mean limit, the
    product is tagged with the p-mean limit a*b.  Whether the
    bound on the |b| p-means actually holds is the caller's business; see
    :func:`cesaro.analysis.diagnose_mcza`.
    """
    lim = None
    if a.known_limit is not None and b.known_p_mean_limit is not None:
        p_b, lim_b = b.known_p_mean_limit
        lim = (p_b, a.known_limit * lim_b)
    known = None
    if a.known_limit is not None and b.known_limit is not None:
        known = a.known_limit * b.known_limit
    return Sequence(lambda ks: a.values(ks) * b.values(ks), f"({a.label})*({b.label})", lim, known)


def geometric_grid(n0: int, n_max: int, ratio: float = 2.0) -> list[int]:
    """Ascending grid ceil(n0 * ratio**j) for j = 0, 1, ... up to n_max."""
    if n0 < 1 or n_max < n0:
        raise ParameterError(f"need 1 <= n0 <= n_max, got n0={n0}, n_max={n_max}")
    if not ratio > 1:
        raise ParameterError(f"ratio must exceed 1, got {ratio}")
    grid = []
    j = 0
    while True:
        x = n0 * ratio**j
        n = math.ceil(x - 1e-9 * x)
        if n > n_max:
            break
        if not grid or n > grid[-1]:
            grid.append(n)
        j += 1
    return grid


def mean_series(
    b: Sequence, f: WeightFunction, p, grid: _Seq[int], chunk_size: int = DEFAULT_CHUNK
) -> MeanSeries:
    """Sample the weighted mean on an ascending grid of n."""
    p = check_exponent(p)
    grid = [_check_n(n) for n in grid]
    if any(y <= x for x, y in zip(grid, grid[1:])):
        raise ParameterError("grid must be strictly ascending")
    values, bounds = [], []
    for n in grid:
        try:
            r = cesaro_mean_with_bound(b, f, p, n, chunk_size)
        except EvaluationError as exc:
            raise EvaluationError(f"at n={n}: {exc}", index=exc.index, n=n) from exc
        values.append(r.value)
        bounds.append(r.rounding_bound)
    return MeanSeries(tuple(grid), tuple(values), tuple(bounds), f"M[{b.label}, {f.label}; p={p}]")


@dataclass(frozen=True)
class AbelDecomposition:
    boundary: complex
    stieltjes: complex
    residual: complex

    @property
    def total(self) -> complex:
        return self.boundary + self.stieltjes + self.residual


def abel_decomposition(b: Sequence, f: WeightFunction, p, n: int, limit: complex) -> AbelDecomposition:
    """Split the weighted mean by summation by parts around a constant ``limit``.

    With c_k = p_mean(b, p, k) - limit the mean equals

        c_n f(1) + limit * stieltjes_weight_sum(f, p, n)
            + sum_{k=2}^{n} c_{k-1} ((k-1)/n)**p [f((k-1)/n) - f(k/n)].

    The p-means c_k are taken from :func:`p_mean`, one call per k.
    """
    p = check_exponent(p)
    n = _check_n(n)
    c = np.array([p_mean(b, p, k) - limit for k in range(1, n + 1)], dtype=np.complex128)
    f_one = f(1.0)
    ks = np.arange(1, n)
    fx = f.values(np.arange(1, n + 1) / n)
    residual_terms = c[:-1] * power_grid(p, n, ks) * (fx[:-1] - fx[1:])
    residual = tree_sum(lambda lo, hi: residual_terms[lo:hi], n - 1).value if n > 1 else 0j
    return AbelDecomposition(c[-1] * f_one, limit * stieltjes_weight_sum(f, p, n), residual)

"""Limit estimation and convergence classification for sampled mean series.

Series are sampled on geometric grids in n.  Aitken's delta-squared
transform is applied along the grid; it needs no assumption on the rate.
The verdict thresholds below are fixed engineering constants and are
reported with every estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence as _Seq

import numpy as np

from .core import MeanSeries, Sequence, check_exponent, p_mean
from .errors import ParameterError

Verdict = Literal["converges", "diverges", "oscillates", "inconclusive"]

MIN_POINTS = 6
GRID_RATIO_SPREAD = 1.5
INCREMENT_DECAY = 0.5
DIVERGENCE_MIN_EXPONENT = 0.1
OSCILLATION_SEPARATION = 10.0

THRESHOLDS = {
    "min_points": MIN_POINTS,
    "grid_ratio_spread": GRID_RATIO_SPREAD,
    "increment_decay": INCREMENT_DECAY,
    "divergence_min_exponent": DIVERGENCE_MIN_EXPONENT,
    "oscillation_separation_in_tol": OSCILLATION_SEPARATION,
    "note": "engineering thresholds; no convergence rate is known for these means",
}


@dataclass(frozen=True)
class LimitEstimate:
    verdict: Verdict
    value: Optional[complex] = None
    error_estimate: Optional[float] = None
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.value is not None) != (self.verdict == "converges"):
            raise ValueError("a value is reported exactly when the verdict is 'converges'")
        if self.verdict != "converges" and not self.evidence:
            raise ValueError("non-converging verdicts need evidence")


def aitken(values: _Seq[complex]) -> list[complex]:
    """Aitken delta-squared transform; element i uses values[i:i+3]."""
    x = [complex(v) for v in values]
    out = []
    for x0, x1, x2 in zip(x, x[1:], x[2:]):
        d1, d2 = x1 - x0, x2 - x1
        den = d2 - d1
        scale = max(abs(x0), abs(x1), abs(x2))
        if den == 0 or abs(den) <= 1e-14 * scale:
            out.append(x2)
        else:
            out.append(x2 - d2 * d2 / den)
    return out


def _spread(values: _Seq[complex]) -> float:
    return max((abs(a - b) for a in values for b in values), default=0.0)


def growth_exponent(grid: _Seq[int], values: _Seq[complex]) -> float:
    """Least-squares slope of log|v| against log n over the last half of the grid."""
    half = len(grid) // 2
    ns = np.asarray(grid[half:], dtype=np.float64)
    mags = np.abs(np.asarray(values[half:], dtype=np.complex128))
    if len(ns) < 2:
        return math.nan
    if np.any(mags == 0):
        return -math.inf if mags[-1] == 0 else math.nan
    slope = np.polyfit(np.log(ns), np.log(mags), 1)[0]
    return float(slope)


def _check_geometric(grid: _Seq[int]) -> float:
    ratios = [b / a for a, b in zip(grid, grid[1:])]
    if min(ratios) <= 1:
        raise ParameterError("grid must be strictly ascending")
    if max(ratios) / min(ratios) > GRID_RATIO_SPREAD:
        raise ParameterError(f"grid is not geometric (step ratios range {min(ratios):.3g}..{max(ratios):.3g})")
    return float(np.exp(np.mean(np.log(ratios))))


def _stable_limit(raw: list[complex], tol: float):
    acc = aitken(raw)
    tail = acc[-3:]
    spread = _spread(tail)
    if len(acc) < 2:
        spread = max(spread, abs(acc[-1] - raw[-1]))
    return acc[-1], spread, spread <= tol


def estimate_limit(series: MeanSeries, tol: float) -> LimitEstimate:
    """Extrapolate a geometric-grid mean series and classify its behaviour."""
    if not tol > 0:
        raise ParameterError(f"tol must be > 0, got {tol!r}")
    grid, values = list(series.grid), [complex(v) for v in series.values]
    if len(grid) < MIN_POINTS:
        raise ParameterError(f"need at least {MIN_POINTS} grid points, got {len(grid)}")
    ratio = _check_geometric(grid)
    base = {"grid_ratio": ratio, "thresholds": THRESHOLDS}

    if not all(math.isfinite(abs(v)) for v in values):
        return LimitEstimate("diverges", evidence={**base, "reason": "non-finite values", "growth_exponent": math.inf})

    acc = aitken(values)
    tail = acc[-3:]
    spread = _spread(tail)
    increments = [abs(b - a) for a, b in zip(values, values[1:])]
    head = increments[: max(1, len(increments) // 2)]
    decaying = increments[-1] <= tol or increments[-1] <= INCREMENT_DECAY * float(np.median(head))
    if spread <= tol and decaying:
        err = max(spread, series.rounding_bound[-1])
        return LimitEstimate(
            "converges",
            acc[-1],
            err,
            {**base, "accelerated": tail, "last_increment": increments[-1]},
        )

    exponent = growth_exponent(grid, values)
    if exponent >= DIVERGENCE_MIN_EXPONENT:
        return LimitEstimate("diverges", evidence={**base, "growth_exponent": exponent, "last_value": values[-1]})

    if len(values) >= 6:
        even_lim, even_spread, even_ok = _stable_limit(values[0::2], tol)
        odd_lim, odd_spread, odd_ok = _stable_limit(values[1::2], tol)
        if even_ok and odd_ok and abs(even_lim - odd_lim) > OSCILLATION_SEPARATION * tol:
            return LimitEstimate(
                "oscillates",
                evidence={
                    **base,
                    "subsequence_limits": (even_lim, odd_lim),
                    "subsequence_spreads": (even_spread, odd_spread),
                },
            )

    return LimitEstimate(
        "inconclusive",
        evidence={**base, "accelerated": tail, "spread": spread, "growth_exponent": exponent},
    )


@dataclass(frozen=True)
class MczaReport:
    """Empirical check of a uniform bound on the p-means of |b|."""

    max_value: float
    verdict: Literal["bounded", "unbounded"]
    grid: tuple[int, ...]
    values: tuple[float, ...]
    growth_exponent: float

    @property
    def bounded(self) -> bool:
        return self.verdict == "bounded"


def diagnose_mcza(b: Sequence, p, grid: _Seq[int]) -> MczaReport:
    """Sample the p-means of |b| on ``grid`` and look for power-law growth."""
    p = check_exponent(p)
    grid = list(grid)
    if not grid:
        raise ParameterError("grid must be nonempty")
    magnitude = b.abs()
    values = [p_mean(magnitude, p, n).real for n in grid]
    exponent = growth_exponent(grid, values) if len(grid) >= 4 else math.nan
    verdict = "unbounded" if exponent >= DIVERGENCE_MIN_EXPONENT else "bounded"
    return MczaReport(max(values), verdict, tuple(grid), tuple(values), exponent)


def check_little_o(b: Sequence, p, grid: _Seq[int]) -> bool:
    """Heuristic check that |b_n| / n**p decays on a geometric grid.

    Compares the largest ratio over the last decade of ``grid`` with the
    largest over the first decade; a p-mean convergent sequence has
    b_n = o(n**p).
    """
    p = check_exponent(p)
    grid = np.asarray(sorted(grid), dtype=np.int64)
    ratios = np.abs(b.values(grid)) / grid.astype(np.float64) ** p
    first = ratios[grid <= grid[0] * 10]
    last = ratios[grid >= grid[-1] / 10]
    return bool(np.max(last) < np.max(first))

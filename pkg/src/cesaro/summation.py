"""Compensated pairwise summation with a deterministic reduction tree.

Terms are summed along a complete binary tree over the index range padded
with zeros to a power of two.  Every node keeps the floating sum of its
children, the accumulated rounding errors (recovered exactly with TwoSum)
and the sum of absolute values.  The tree shape depends only on indices, so
evaluating the terms in aligned chunks of any power-of-two size reproduces
the single-pass result bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

UNIT_ROUNDOFF = np.finfo(np.float64).eps / 2
DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class SumResult:
    value: complex
    rounding_bound: float


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def _reduce(s: np.ndarray, e: np.ndarray, a: np.ndarray):
    """Collapse rows of shape (components, 2**L) down to the tree root."""
    while s.shape[1] > 1:
        left, right = s[:, 0::2], s[:, 1::2]
        total = left + right
        # TwoSum: left + right == total + err exactly
        virtual = total - left
        err = (left - (total - virtual)) + (right - virtual)
        e = (e[:, 0::2] + e[:, 1::2]) + err
        a = a[:, 0::2] + a[:, 1::2]
        s = total
    return s[:, 0], e[:, 0], a[:, 0]


def _as_components(x: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(x):
        return np.stack([x.real, x.imag]).astype(np.float64, copy=False)
    return np.asarray(x, dtype=np.float64)[np.newaxis, :]


def _chunk_root(x: np.ndarray, width: int):
    comps = _as_components(x)
    if comps.shape[1] < width:
        pad = np.zeros((comps.shape[0], width - comps.shape[1]))
        comps = np.concatenate([comps, pad], axis=1)
    return _reduce(comps, np.zeros_like(comps), np.abs(comps))


def tree_sum(
    terms: Callable[[int, int], np.ndarray],
    count: int,
    chunk_size: int = DEFAULT_CHUNK,
    complex_result: bool = True,
) -> SumResult:
    """Sum ``count`` terms produced lazily by ``terms(lo, hi)``.

    ``terms(lo, hi)`` must return the terms with zero-based indices
    ``lo <= i < hi``.  ``chunk_size`` must be a power of two; the result
    does not depend on it.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if chunk_size <= 0 or chunk_size & (chunk_size - 1):
        raise ValueError(f"chunk_size must be a power of two, got {chunk_size}")
    if count == 0:
        return SumResult(0j if complex_result else 0.0, 0.0)

    total_width = _next_pow2(count)
    width = min(chunk_size, total_width)
    roots_s, roots_e, roots_a = [], [], []
    for lo in range(0, count, width):
        hi = min(lo + width, count)
        block = np.asarray(terms(lo, hi))
        if block.shape != (hi - lo,):
            raise ValueError(f"terms({lo}, {hi}) returned shape {block.shape}")
        if complex_result:
            block = block.astype(np.complex128, copy=False)
        elif np.iscomplexobj(block):
            raise TypeError("complex terms passed to a real summation")
        s, e, a = _chunk_root(block, width)
        roots_s.append(s)
        roots_e.append(e)
        roots_a.append(a)

    n_roots = total_width // width
    comps = len(roots_s[0])
    s = np.zeros((comps, n_roots))
    e = np.zeros((comps, n_roots))
    a = np.zeros((comps, n_roots))
    s[:, : len(roots_s)] = np.array(roots_s).T
    e[:, : len(roots_e)] = np.array(roots_e).T
    a[:, : len(roots_a)] = np.array(roots_a).T
    s, e, a = _reduce(s, e, a)

    values = s + e
    levels = int(math.log2(total_width))
    gamma = levels * UNIT_ROUNDOFF / (1 - levels * UNIT_ROUNDOFF)
    bounds = UNIT_ROUNDOFF * np.abs(values) + 2 * gamma * gamma * a * (1 + gamma)
    bound = float(np.sum(bounds))
    if complex_result:
        return SumResult(complex(values[0], values[1]), bound)
    return SumResult(float(values[0]), bound)


def compensated_sum(values, chunk_size: int = DEFAULT_CHUNK) -> SumResult:
    """Compensated pairwise sum of an in-memory array (real or complex)."""
    x = np.asarray(values)
    is_complex = np.iscomplexobj(x)
    if not is_complex:
        x = x.astype(np.float64, copy=False)
    return tree_sum(lambda lo, hi: x[lo:hi], len(x), chunk_size, complex_result=is_complex)

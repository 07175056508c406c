"""Quadrature oracle for the limit of the weighted means.

For a p-mean convergent ``b`` with limit ``b_lim`` and a monotone weight
``f`` the weighted means tend to ``b_lim * p * int_0^1 x**(p-1) f(x) dx``.
Substituting u = x**p turns the integral into ``int_0^1 f(u**(1/p)) du``,
which is evaluated by globally adaptive 7/15-point Gauss-Kronrod
quadrature.  The rule is open, so f is never evaluated at 0.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .core import WeightFunction, check_exponent
from .errors import NonConvergenceError, ParameterError

# Kronrod abscissae on [-1, 1], nonnegative half; odd positions are Gauss nodes
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps
DEFAULT_MAX_PANELS = 10_000


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    subdivisions: int


@dataclass(frozen=True)
class OracleResult:
    value: complex
    abs_error_estimate: float
    subdivisions: int


def gauss_kronrod(g: Callable[[np.ndarray], np.ndarray], a: float, b: float):
    """One 15-point Kronrod panel: (estimate, error estimate)."""
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    with np.errstate(all="ignore"):
        fx = np.asarray(g(centre + half * KRONROD_NODES), dtype=np.float64)
        kronrod = half * float(KRONROD_WEIGHTS @ fx)
        gauss = half * float(GAUSS_WEIGHTS @ fx)
        if not (math.isfinite(kronrod) and math.isfinite(gauss)):
            return math.nan, math.inf
        mean = kronrod / (2 * half) if half else 0.0
        resabs = abs(half) * float(KRONROD_WEIGHTS @ np.abs(fx))
        resasc = abs(half) * float(KRONROD_WEIGHTS @ np.abs(fx - mean))
    err = abs(kronrod - gauss)
    # QUADPACK scaling of the Gauss/Kronrod difference
    if resasc and err:
        err = resasc * min(1.0, (200 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50 * _EPS):
        err = max(err, 50 * _EPS * resabs)
    return kronrod, err


def integrate(
    g: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-10,
    rel_tol: float = 0.0,
    max_panels: int = DEFAULT_MAX_PANELS,
    initial_panels: int = 4,
) -> QuadResult:
    """Globally adaptive Gauss-Kronrod quadrature of a vectorised ``g`` over [a, b].

    Panels are bisected worst-first until the summed error estimate drops
    below ``max(tol, rel_tol * |value|)``.  Raises NonConvergenceError when
    ``max_panels`` panels are not enough.
    """
    if not tol > 0 and not rel_tol > 0:
        raise ParameterError("need tol > 0 or rel_tol > 0")
    if initial_panels < 1:
        raise ParameterError("initial_panels must be >= 1")
    edges = np.linspace(a, b, initial_panels + 1)
    heap = []
    frozen = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = gauss_kronrod(g, lo, hi)
        heapq.heappush(heap, (-err, lo, hi, val))
    panels = initial_panels

    def totals():
        items = [(lo, v, e) for (ne, lo, hi, v) in heap for e in (-ne,)] + frozen
        items.sort()
        return math.fsum(v for _, v, _ in items), math.fsum(e for _, _, e in items)

    value, error = totals()
    while not (error <= max(tol, rel_tol * abs(value))):
        if panels >= max_panels or not heap:
            raise NonConvergenceError(
                f"quadrature did not reach tolerance with {panels} panels "
                f"(estimate {value!r}, error {error!r})",
                value,
                error,
                panels,
            )
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            frozen.append((lo, val, -neg_err))
            continue
        children = [(x0, x1, *gauss_kronrod(g, x0, x1)) for x0, x1 in ((lo, mid), (mid, hi))]
        for x0, x1, v, e in children:
            heapq.heappush(heap, (-e, x0, x1, v))
        panels += 1
        if panels % 64 == 0 or not (math.isfinite(error) and math.isfinite(neg_err)):
            value, error = totals()
        else:
            # running update; exact totals are recomputed every 64 panels
            value += children[0][2] + children[1][2] - val
            error += children[0][3] + children[1][3] + neg_err
    value, error = totals()
    return QuadResult(value, error, panels)


def weighted_limit(b: complex, f: WeightFunction, p, tol: float = 1e-10, **quad_options) -> OracleResult:
    """``b * p * int_0^1 x**(p-1) f(x) dx`` via the substitution u = x**p."""
    p = check_exponent(p)
    if not tol > 0:
        raise ParameterError(f"tol must be > 0, got {tol!r}")
    b = complex(b)
    inv_p = 1.0 / p
    scale = abs(b)
    res = integrate(lambda u: f.values(np.power(u, inv_p)), 0.0, 1.0, tol / scale if scale else tol, **quad_options)
    return OracleResult(b * res.value, scale * res.abs_error_estimate, res.subdivisions)


# ---------------------------------------------------------------------------
# numerical probing of the integrability hypotheses

DECAY_PASS_RATIO = 0.9
DECAY_FAIL_RATIO = 0.999
Status = Literal["pass", "fail", "inconclusive"]


@dataclass(frozen=True)
class HypothesisCheck:
    status: Status
    decay_ratio: float
    tails: tuple[float, ...]


@dataclass(frozen=True)
class HypothesisReport:
    integrability: HypothesisCheck
    stieltjes: HypothesisCheck

    @property
    def ok(self) -> bool:
        return self.integrability.status == "pass" and self.stieltjes.status == "pass"


def _classify(tails: list[float]) -> HypothesisCheck:
    t = np.asarray(tails, dtype=np.float64)
    if not np.all(np.isfinite(t)):
        return HypothesisCheck("fail", math.inf, tuple(tails))
    half = len(t) // 2
    first, last = t[half], t[-1]
    if last == 0.0:
        return HypothesisCheck("pass", 0.0, tuple(tails))
    if first == 0.0:
        return HypothesisCheck("fail", math.inf, tuple(tails))
    ratio = (last / first) ** (1.0 / (len(t) - 1 - half))
    if ratio <= DECAY_PASS_RATIO:
        status = "pass"
    elif ratio >= DECAY_FAIL_RATIO:
        status = "fail"
    else:
        status = "inconclusive"
    return HypothesisCheck(status, float(ratio), tuple(tails))


def check_hypotheses(f: WeightFunction, p, levels: int = 40, mesh: int = 64) -> HypothesisReport:
    """Probe both integrability conditions on dyadic shells [2**-j, 2**(1-j)].

    ``integrability`` looks at the shell integrals of x**(p-1) |f|;
    ``stieltjes`` at the shell sums of x_i**p |f(x_{i+1}) - f(x_i)| on a
    geometric mesh, a discrete stand-in for the integral of x**p
    against |df|.  Each is "pass" when the shell contributions decay at
    least geometrically with ratio 0.9, "fail" when they stop decaying.
    """
    p = check_exponent(p)
    if f.monotonicity == "none":
        raise ParameterError("hypothesis checks need a weight with declared monotonicity")

    def weighted_abs(x):
        return np.power(x, p - 1) * np.abs(f.values(x))

    shell_integrals = []
    shell_variations = []
    for j in range(1, levels + 1):
        lo, hi = 2.0**-j, 2.0 ** (1 - j)
        try:
            shell_integrals.append(integrate(weighted_abs, lo, hi, tol=1e-300, rel_tol=1e-10).value)
        except NonConvergenceError as exc:
            shell_integrals.append(exc.value if math.isfinite(exc.value) else math.inf)
        xs = np.geomspace(lo, hi, mesh + 1)
        fx = f.values(xs)
        shell_variations.append(float(np.sum(xs[:-1] ** p * np.abs(np.diff(fx)))))
    return HypothesisReport(_classify(shell_integrals), _classify(shell_variations))

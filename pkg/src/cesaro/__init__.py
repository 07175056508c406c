"""Weighted Cesaro means of complex sequences and their limits."""

from .analysis import LimitEstimate, MczaReport, aitken, check_little_o, diagnose_mcza, estimate_limit
from .core import (
    ONE,
    AbelDecomposition,
    CesaroParams,
    MeanResult,
    MeanSeries,
    Sequence,
    WeightFunction,
    abel_decomposition,
    cesaro_mean,
    cesaro_mean_with_bound,
    geometric_grid,
    mean_series,
    p_mean,
    product_sequence,
    stieltjes_weight_sum,
)
from .errors import (
    BudgetError,
    CesaroError,
    DomainError,
    EvaluationError,
    NonConvergenceError,
    ParameterError,
)
from .expr import parse_expr, to_source
from .multiindex import (
    MultiIndexSequence,
    box_mean,
    box_sums,
    nested_mean,
    predicted_nested_limit,
    predicted_tail_limit,
    tail_mean,
    tail_sums,
)
from .oracle import check_hypotheses, integrate, weighted_limit
from .specfun import beta, gamma, log_gamma, tail_limit_constant

__version__ = "0.1.0"

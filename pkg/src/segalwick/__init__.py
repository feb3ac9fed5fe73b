"""Exact Segal polynomials, linear transition coefficients and Wick ordering of random vectors."""
from ._backend import BACKEND
from .algebra import (
    DimensionError,
    LinearMap,
    Polynomial,
    enumerate_row_col_matrices,
    multi_indices,
    multi_indices_upto,
)
from .moments import (
    DiscreteMeasure,
    GaussianMeasure,
    InsufficientMomentsError,
    MomentProvider,
    ProductMeasure,
    PushforwardMeasure,
    TabulatedMeasure,
    expectation,
)
from .report import Report
from .segal import segal_family, segal_polynomial, verify_generating_identity
from .transform import (
    partial_trace_map,
    transition_coefficient,
    transition_row,
    verify_recurrence,
    verify_transformation,
)
from .wick import (
    RandomVector,
    WickResult,
    counterexample_gap,
    verify_robustness,
    wick_monomial,
    wick_multinomial_check,
    wick_polynomial,
)

__version__ = "0.1.0"

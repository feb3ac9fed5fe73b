"""Transition coefficients A_{alpha,beta} for linear maps and the identities built on them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import (
    DimensionError,
    LinearMap,
    Polynomial,
    enumerate_row_col_matrices,
    matrix_factorial,
    mfactorial,
    multi_indices,
    order,
)
from .moments import MomentProvider
from .report import Report, compare
from .segal import segal_polynomial

__all__ = [
    "NotPartialTraceError",
    "TransitionRow",
    "partial_trace_map",
    "transition_coefficient",
    "transition_row",
    "verify_recurrence",
    "verify_transformation",
]


class NotPartialTraceError(ValueError):
    """The map is not a 0/1 matrix with exactly one 1 per row."""


@dataclass(frozen=True)
class TransitionRow:
    """Nonzero coefficients A_{alpha,beta} for one alpha; every key has |beta| = |alpha|."""

    alpha: tuple[int, ...]
    entries: Mapping[tuple[int, ...], Fraction]

    def __getitem__(self, beta) -> Fraction:
        return self.entries.get(tuple(beta), Fraction(0))

    def as_polynomial(self, nvars: int) -> Polynomial:
        """sum_beta A_{alpha,beta} x^beta."""
        return Polynomial(nvars, self.entries)


def _check_dims(T: LinearMap, alpha=None, beta=None):
    if alpha is not None and len(alpha) != T.rows:
        raise DimensionError(f"alpha of length {len(alpha)} for a map with {T.rows} rows")
    if beta is not None and len(beta) != T.cols:
        raise DimensionError(f"beta of length {len(beta)} for a map with {T.cols} columns")


def transition_coefficient(T: LinearMap, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
    """A_{alpha,beta} = sum over Gamma with row sums alpha, column sums beta of alpha!/Gamma! T^Gamma."""
    alpha, beta = tuple(alpha), tuple(beta)
    _check_dims(T, alpha, beta)
    if order(alpha) != order(beta):
        return Fraction(0)
    af = mfactorial(alpha)
    total = Fraction(0)
    for gamma in enumerate_row_col_matrices(alpha, beta):
        tg = T.power(gamma)
        if tg:
            total += Fraction(af, matrix_factorial(gamma)) * tg
    return total


def transition_row(T: LinearMap, alpha: Sequence[int]) -> TransitionRow:
    alpha = tuple(alpha)
    _check_dims(T, alpha)
    entries = {}
    for beta in multi_indices(T.cols, order(alpha)):
        a = transition_coefficient(T, alpha, beta)
        if a:
            entries[beta] = a
    return TransitionRow(alpha, entries)


def verify_transformation(mu: MomentProvider, T: LinearMap, alpha: Sequence[int]) -> Report:
    """Check p^{mu_T}_alpha(T x) == sum_beta A_{alpha,beta} p^mu_beta(x) exactly."""
    alpha = tuple(alpha)
    _check_dims(T, alpha)
    if T.cols != mu.dim:
        raise DimensionError(f"{T.rows}x{T.cols} map applied to a measure on R^{mu.dim}")
    mu.check_order(order(alpha))
    lhs = segal_polynomial(mu.pushforward(T), alpha).compose_linear(T)
    rhs = Polynomial.zero(T.cols)
    for beta, a in transition_row(T, alpha).entries.items():
        rhs = rhs + segal_polynomial(mu, beta).scale(a)
    return compare("transform", lhs, rhs, alpha=list(alpha), shape=list(T.shape))


def verify_recurrence(T: LinearMap, alpha: Sequence[int], beta: Sequence[int], ell: int) -> Report:
    """Check (beta_l + 1) A_{alpha, beta + delta_l} == sum_k alpha_k T_{k,l} A_{alpha - delta_k, beta}."""
    alpha, beta = tuple(alpha), tuple(beta)
    _check_dims(T, alpha, beta)
    if order(alpha) != order(beta) + 1:
        raise ValueError(f"need |alpha| = |beta| + 1, got {order(alpha)} and {order(beta)}")
    if not 0 <= ell < T.cols:
        raise IndexError(f"column {ell} out of range for {T.cols} columns")
    raised = beta[:ell] + (beta[ell] + 1,) + beta[ell + 1:]
    lhs = (beta[ell] + 1) * transition_coefficient(T, alpha, raised)
    rhs = Fraction(0)
    for k in range(T.rows):
        if alpha[k]:
            lowered = alpha[:k] + (alpha[k] - 1,) + alpha[k + 1:]
            rhs += alpha[k] * T[k, ell] * transition_coefficient(T, lowered, beta)
    holds = lhs == rhs
    return Report("recurrence", holds, None if holds else (raised, lhs, rhs),
                  {"alpha": list(alpha), "beta": list(beta), "ell": ell})


def partial_trace_map(T: LinearMap, alpha: Sequence[int]) -> tuple[int, ...]:
    """For a 0/1 map with one 1 per row, return T^t alpha (the only beta with A_{alpha,beta} != 0)."""
    alpha = tuple(alpha)
    _check_dims(T, alpha)
    if not T.is_partial_trace():
        raise NotPartialTraceError("every row must contain exactly one entry 1 and zeros elsewhere")
    return tuple(int(v) for v in T.T.apply(alpha))

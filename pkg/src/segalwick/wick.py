"""Wick ordering of polynomials of random vectors that are linear images of base variables."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import DimensionError, LinearMap, Polynomial, as_fraction, mfactorial, multi_indices
from .moments import MomentProvider, expectation
from .report import Report, compare
from .segal import segal_polynomial

__all__ = [
    "RandomVector",
    "WickResult",
    "counterexample_gap",
    "verify_robustness",
    "wick_monomial",
    "wick_multinomial_check",
    "wick_polynomial",
]


class RandomVector:
    """Y = rep @ X_base, where X_base has law ``base``.

    Only linear images are representable; that is the hypothesis under
    which Wick ordering is insensitive to the choice of representation.
    """

    def __init__(self, base: MomentProvider, rep: LinearMap | None = None):
        if rep is None:
            rep = LinearMap.identity(base.dim)
        if not isinstance(rep, LinearMap):
            raise TypeError("a random vector must be a linear image of the base variables")
        if rep.cols != base.dim:
            raise DimensionError(f"{rep.rows}x{rep.cols} representation over a base of dimension {base.dim}")
        self.base = base
        self.rep = rep

    @property
    def dim(self) -> int:
        return self.rep.rows

    @property
    def base_dim(self) -> int:
        return self.base.dim

    @property
    def law(self) -> MomentProvider:
        if self.rep == LinearMap.identity(self.base.dim):
            return self.base
        return self.base.pushforward(self.rep)

    def transformed(self, T: LinearMap) -> "RandomVector":
        """The vector T Y, still expressed over the same base variables."""
        return RandomVector(self.base, T @ self.rep)

    def __repr__(self):
        return f"RandomVector({self.base!r}, {self.rep!r})"


@dataclass(frozen=True)
class WickResult:
    """A random variable written as an exact polynomial in the base variables."""

    value: Polynomial
    base: MomentProvider

    def mean(self) -> Fraction:
        return expectation(self.base, self.value)


def wick_monomial(Y: RandomVector, beta: Sequence[int]) -> WickResult:
    """:Y^beta: = p^{mu_Y}_beta(Y), expanded in the base variables."""
    beta = tuple(beta)
    if len(beta) != Y.dim:
        raise DimensionError(f"multi-index of length {len(beta)} for a vector of dimension {Y.dim}")
    p = segal_polynomial(Y.law, beta)
    return WickResult(p.compose_linear(Y.rep), Y.base)


def wick_polynomial(Y: RandomVector, q: Polynomial) -> WickResult:
    """:q(Y):, extending Wick monomials linearly over the coefficients of ``q``."""
    if q.nvars != Y.dim:
        raise DimensionError(f"polynomial in {q.nvars} variables for a vector of dimension {Y.dim}")
    if q:
        Y.law.check_order(q.degree)
    law = Y.law
    acc = Polynomial.zero(Y.dim)
    for e, c in q.items():
        acc = acc + segal_polynomial(law, e).scale(c)
    return WickResult(acc.compose_linear(Y.rep), Y.base)


def verify_robustness(X: RandomVector, T: LinearMap, p: Polynomial) -> Report:
    """Check :q(X): == :p(Y): for Y = T X and q(x) = p(T x)."""
    if T.cols != X.dim or p.nvars != T.rows:
        raise DimensionError(f"map {T.shape} does not fit X of dimension {X.dim} and p in {p.nvars} variables")
    q = p.compose_linear(T)
    lhs = wick_polynomial(X, q).value
    rhs = wick_polynomial(X.transformed(T), p).value
    return compare("robustness", lhs, rhs, shape=list(T.shape), degree=p.degree)


def wick_multinomial_check(X: RandomVector, c: Sequence, k: int) -> Report:
    """Check :(c.X)^k: == sum_{|beta|=k} k!/beta! c^beta :X^beta:."""
    c = [as_fraction(v) for v in c]
    if len(c) != X.dim:
        raise DimensionError(f"{len(c)} weights for a vector of dimension {X.dim}")
    X.law.check_order(k)
    T = LinearMap([c], cols=X.dim)
    lhs = wick_monomial(X.transformed(T), (k,)).value
    rhs = Polynomial.zero(X.base_dim)
    for beta in multi_indices(X.dim, k):
        weight = Fraction(math.factorial(k), mfactorial(beta))
        for cj, bj in zip(c, beta):
            weight *= cj ** bj
        if weight:
            rhs = rhs + wick_monomial(X, beta).value.scale(weight)
    return compare("multinomial", lhs, rhs, k=k, c=[str(v) for v in c])


def counterexample_gap(mu: MomentProvider) -> Polynomial:
    """:X^2: - :Y^1: for the nonlinear image Y = X^2, as a polynomial in x.

    Equals -2<x>x + 2<x>^2, so it vanishes exactly when the mean is zero.
    """
    if mu.dim != 1:
        raise DimensionError("the counterexample is stated for a scalar random variable")
    mu.check_order(2)
    wick_x2 = segal_polynomial(mu, (2,))
    wick_y1 = Polynomial(1, {(2,): 1, (0,): -mu.moment((2,))})
    return wick_x2 - wick_y1

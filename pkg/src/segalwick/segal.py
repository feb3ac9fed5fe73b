"""Segal polynomials of a measure and the truncated generating-function check."""
from __future__ import annotations

import weakref
from fractions import Fraction
from typing import Sequence

from .algebra import LinearMap, Polynomial, mfactorial, multi_indices_upto, order
from .moments import MomentProvider
from .report import Report, compare

__all__ = [
    "Report",
    "segal_family",
    "segal_polynomial",
    "verify_generating_identity",
]

_CACHE: "weakref.WeakKeyDictionary[MomentProvider, dict]" = weakref.WeakKeyDictionary()


def segal_polynomial(mu: MomentProvider, beta: Sequence[int]) -> Polynomial:
    """The monic polynomial p_beta with d/dx_j p_beta = beta_j p_{beta - delta_j} and <p_beta> = 0.

    Non-constant coefficients come from the derivative descent through the
    smallest variable present in each exponent; the constant term is then
    fixed by centering.
    """
    beta = tuple(int(b) for b in beta)
    if len(beta) != mu.dim:
        raise ValueError(f"multi-index {beta} for a measure on R^{mu.dim}")
    mu.check_order(order(beta))
    cache = _CACHE.setdefault(mu, {})
    return _segal(mu, beta, cache)


def _segal(mu: MomentProvider, beta: tuple[int, ...], cache: dict) -> Polynomial:
    hit = cache.get(beta)
    if hit is not None:
        return hit
    n = mu.dim
    if not any(beta):
        p = Polynomial.constant(n, 1)
        cache[beta] = p
        return p
    coeffs: dict[tuple[int, ...], Fraction] = {}
    for j in range(n):
        if not beta[j]:
            continue
        lower = _segal(mu, beta[:j] + (beta[j] - 1,) + beta[j + 1:], cache)
        for e, c in lower.terms.items():
            # gamma = e + delta_j has j as its first nonzero slot
            if any(e[:j]):
                continue
            gamma = e[:j] + (e[j] + 1,) + e[j + 1:]
            coeffs[gamma] = beta[j] * c / gamma[j]
    const = -sum((c * mu.moment(g) for g, c in coeffs.items()), Fraction(0))
    if const:
        coeffs[(0,) * n] = const
    p = Polynomial(n, coeffs)
    cache[beta] = p
    return p


def segal_family(mu: MomentProvider, max_order: int) -> dict[tuple[int, ...], Polynomial]:
    """All p_beta with |beta| <= max_order, keyed by beta in graded lexicographic order."""
    mu.check_order(max_order)
    return {beta: segal_polynomial(mu, beta) for beta in multi_indices_upto(mu.dim, max_order)}


def generating_series(mu: MomentProvider, order_: int, xi_map: LinearMap | None = None,
                      x_map: LinearMap | None = None) -> Polynomial:
    """Truncated generating function sum_{|beta| <= order} p_beta(x) xi^beta / beta!.

    The result lives in (xi, x) variables, xi first. ``xi_map`` substitutes
    xi -> xi_map xi and ``x_map`` substitutes x -> x_map x.
    """
    n = mu.dim
    n_xi = xi_map.cols if xi_map is not None else n
    n_x = x_map.cols if x_map is not None else n
    total = n_xi + n_x
    out = Polynomial.zero(total)
    for beta, p in segal_family(mu, order_).items():
        xi_part = Polynomial.monomial(beta)
        if xi_map is not None:
            xi_part = xi_part.compose_linear(xi_map)
        x_part = p.compose_linear(x_map) if x_map is not None else p
        term = xi_part.embed(total, 0) * x_part.embed(total, n_xi)
        out = out + term.scale(Fraction(1, mfactorial(beta)))
    return out


def verify_generating_identity(mu: MomentProvider, T: LinearMap, order_: int) -> Report:
    """Compare G^{mu_T}(xi; T x) with G^mu(T^t xi; x), both truncated at xi-degree ``order_``.

    Each side is homogeneous of degree |beta| in xi term by term, so the
    truncation needs no extra pruning.
    """
    mu.check_order(order_)
    lhs = generating_series(mu.pushforward(T), order_, x_map=T)
    rhs = generating_series(mu, order_, xi_map=T.T)
    return compare("generating", lhs, rhs, order=order_, shape=list(T.shape))

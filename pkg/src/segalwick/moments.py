"""Exact moment providers: discrete, Gaussian, product, pushforward and tabulated measures."""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import DimensionError, LinearMap, Polynomial, as_fraction, order

__all__ = [
    "DiscreteMeasure",
    "GaussianMeasure",
    "InsufficientMomentsError",
    "MomentProvider",
    "ProductMeasure",
    "PushforwardMeasure",
    "TabulatedMeasure",
    "expectation",
    "is_positive_semidefinite",
]

INF = math.inf


class InsufficientMomentsError(ValueError):
    """A moment of order at or above the measure's order bound was requested."""


class MomentProvider(ABC):
    """Source of exact moments <x^beta> of a probability measure on R^n.

    ``order_bound`` is N: moments exist for |beta| < N. Results are memoized
    per instance; the cache only ever maps a key to its one true value, so
    concurrent fills are harmless.
    """

    def __init__(self, dim: int, order_bound=INF):
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        if order_bound != INF and (int(order_bound) != order_bound or order_bound < 1):
            raise ValueError("order bound must be a positive integer or infinity")
        self.dim = dim
        self.order_bound = order_bound
        self._moments: dict[tuple[int, ...], Fraction] = {}
        self._pushforwards: dict[LinearMap, PushforwardMeasure] = {}

    def check_order(self, k: int) -> None:
        if k >= self.order_bound:
            raise InsufficientMomentsError(
                f"order {k} requested but moments only exist below order {self.order_bound}"
            )

    def moment(self, beta: Sequence[int]) -> Fraction:
        beta = tuple(int(b) for b in beta)
        if len(beta) != self.dim:
            raise DimensionError(f"multi-index {beta} for a measure on R^{self.dim}")
        if any(b < 0 for b in beta):
            raise ValueError(f"negative exponent in {beta}")
        self.check_order(order(beta))
        try:
            return self._moments[beta]
        except KeyError:
            pass
        if not any(beta):
            value = Fraction(1)
        else:
            value = self._moment(beta)
        self._moments[beta] = value
        return value

    @abstractmethod
    def _moment(self, beta: tuple[int, ...]) -> Fraction:
        """Uncached moment for a valid, nonzero ``beta`` below the order bound."""

    def pushforward(self, T: LinearMap) -> "PushforwardMeasure":
        """The image measure under ``T``; one shared instance per map so caches are reused."""
        try:
            return self._pushforwards[T]
        except KeyError:
            pushed = self._pushforwards[T] = PushforwardMeasure(self, T)
            return pushed


def expectation(mu: MomentProvider, p: Polynomial) -> Fraction:
    """<p>_mu, applying the moment functional term by term."""
    if p.nvars != mu.dim:
        raise DimensionError(f"polynomial in {p.nvars} variables against a measure on R^{mu.dim}")
    return sum((c * mu.moment(e) for e, c in p.items()), Fraction(0))


class DiscreteMeasure(MomentProvider):
    """Finite mixture of point masses with positive rational weights summing to one."""

    def __init__(self, atoms: Sequence[tuple[Sequence, object]], order_bound=INF):
        if not atoms:
            raise ValueError("a discrete measure needs at least one atom")
        pts = [tuple(as_fraction(v) for v in pt) for pt, _ in atoms]
        wts = [as_fraction(w) for _, w in atoms]
        dim = len(pts[0])
        if any(len(p) != dim for p in pts):
            raise DimensionError("atoms have different dimensions")
        if any(w <= 0 for w in wts):
            raise ValueError("atom weights must be positive")
        if sum(wts) != 1:
            raise ValueError(f"atom weights sum to {sum(wts)}, not 1")
        super().__init__(dim, order_bound)
        self.atoms = tuple(zip(pts, wts))

    @classmethod
    def dirac(cls, point: Sequence) -> "DiscreteMeasure":
        return cls([(point, 1)])

    def _moment(self, beta):
        total = Fraction(0)
        for pt, w in self.atoms:
            term = w
            for v, k in zip(pt, beta):
                if k:
                    term *= v ** k
            total += term
        return total

    def __repr__(self):
        return f"DiscreteMeasure({[(tuple(map(str, p)), str(w)) for p, w in self.atoms]})"


def _ldl_psd(cov: Sequence[Sequence[Fraction]]) -> bool:
    a = [list(row) for row in cov]
    n = len(a)
    for k in range(n):
        piv = a[k][k]
        if piv < 0:
            return False
        if piv == 0:
            if any(a[k][j] for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return True


def is_positive_semidefinite(cov: Sequence[Sequence]) -> bool:
    """Exact test for a symmetric rational matrix, by symmetric elimination.

    A zero pivot requires the rest of its row to vanish, which makes the
    test exact for singular matrices too.
    """
    return _ldl_psd([[as_fraction(v) for v in row] for row in cov])


class GaussianMeasure(MomentProvider):
    """Gaussian measure with rational mean and rational positive semidefinite covariance."""

    def __init__(self, mean: Sequence, cov: Sequence[Sequence], order_bound=INF):
        mean = tuple(as_fraction(v) for v in mean)
        cov = tuple(tuple(as_fraction(v) for v in row) for row in cov)
        n = len(mean)
        if len(cov) != n or any(len(r) != n for r in cov):
            raise DimensionError(f"covariance must be {n}x{n}")
        if any(cov[i][j] != cov[j][i] for i in range(n) for j in range(i)):
            raise ValueError("covariance is not symmetric")
        if not _ldl_psd(cov):
            raise ValueError("covariance is not positive semidefinite")
        super().__init__(n, order_bound)
        self.mean = mean
        self.cov = cov
        self._central: dict[tuple[int, ...], Fraction] = {}

    @classmethod
    def standard(cls, n: int = 1) -> "GaussianMeasure":
        return cls([0] * n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def centered(self) -> bool:
        return not any(self.mean)

    def central_moment(self, beta: tuple[int, ...]) -> Fraction:
        """E[z^beta] for the centered Gaussian, by pairing the first factor with each other factor.

        Summing over the partner of the first factor and recursing enumerates
        each pair partition exactly once, grouped by multi-index.
        """
        if not any(beta):
            return Fraction(1)
        if sum(beta) % 2:
            return Fraction(0)
        try:
            return self._central[beta]
        except KeyError:
            pass
        j = next(i for i, b in enumerate(beta) if b)
        rest = list(beta)
        rest[j] -= 1
        total = Fraction(0)
        for k, mult in enumerate(rest):
            c = self.cov[j][k]
            if mult and c:
                sub = list(rest)
                sub[k] -= 1
                total += mult * c * self.central_moment(tuple(sub))
        self._central[beta] = total
        return total

    def _moment(self, beta):
        if self.centered:
            return self.central_moment(beta)
        total = Fraction(0)
        for gamma in _sub_indices(beta):
            cm = self.central_moment(gamma)
            if not cm:
                continue
            coeff = Fraction(1)
            for b, g, m in zip(beta, gamma, self.mean):
                if b - g:
                    coeff *= math.comb(b, g) * m ** (b - g)
                    if not coeff:
                        break
            total += coeff * cm
        return total

    def __repr__(self):
        return f"GaussianMeasure(mean={list(map(str, self.mean))}, cov={[list(map(str, r)) for r in self.cov]})"


def _sub_indices(beta):
    if not beta:
        yield ()
        return
    for g in range(beta[0] + 1):
        for rest in _sub_indices(beta[1:]):
            yield (g,) + rest


class ProductMeasure(MomentProvider):
    """Product of independent factors on R^{n_1} x ... x R^{n_k}."""

    def __init__(self, factors: Sequence[MomentProvider]):
        if not factors:
            raise ValueError("a product measure needs at least one factor")
        super().__init__(sum(f.dim for f in factors), min(f.order_bound for f in factors))
        self.factors = tuple(factors)

    def split(self, beta: Sequence[int]) -> list[tuple[int, ...]]:
        out, start = [], 0
        for f in self.factors:
            out.append(tuple(beta[start:start + f.dim]))
            start += f.dim
        return out

    def _moment(self, beta):
        total = Fraction(1)
        for f, part in zip(self.factors, self.split(beta)):
            total *= f.moment(part)
            if not total:
                break
        return total

    def __repr__(self):
        return f"ProductMeasure({list(self.factors)!r})"


class PushforwardMeasure(MomentProvider):
    """Image of ``base`` under the linear map ``T``: the law of T X when X has law ``base``."""

    def __init__(self, base: MomentProvider, T: LinearMap):
        if T.cols != base.dim:
            raise DimensionError(f"{T.rows}x{T.cols} map applied to a measure on R^{base.dim}")
        super().__init__(T.rows, base.order_bound)
        self.base = base
        self.map = T

    def _moment(self, alpha):
        y = Polynomial.monomial(alpha).compose_linear(self.map)
        return expectation(self.base, y)

    def __repr__(self):
        return f"PushforwardMeasure({self.base!r}, {self.map!r})"


class TabulatedMeasure(MomentProvider):
    """Moments given explicitly as a table; anything below the bound must be present."""

    def __init__(self, dim: int, moments: Mapping[Sequence[int], object], order_bound):
        super().__init__(dim, order_bound)
        self.table = {tuple(k): as_fraction(v) for k, v in moments.items()}
        zero = (0,) * dim
        if self.table.get(zero, 1) != 1:
            raise ValueError("the zeroth moment of a probability measure is 1")

    def _moment(self, beta):
        try:
            return self.table[beta]
        except KeyError:
            raise InsufficientMomentsError(f"moment {beta} is not tabulated") from None

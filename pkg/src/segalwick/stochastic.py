"""Desk-scale numerics: seeded Monte Carlo checks and the discretized Wiener field.

Floating point is confined to this module. Every float result carries the
parameters (seed, grid size, reference resolution) needed to reproduce it.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ._backend import min_kernel_form
from .algebra import LinearMap, Polynomial, as_fraction
from .moments import DiscreteMeasure, GaussianMeasure
from .report import Report, compare
from .wick import RandomVector, wick_monomial

__all__ = [
    "MCEstimate",
    "RiemannResult",
    "SampledFunction",
    "Sampler",
    "WienerGrid",
    "builtin_function",
    "discretized_field",
    "evaluate_float",
    "field_weights",
    "load_function",
    "monte_carlo_expectation",
    "verify_grid_wick_identity",
    "wick_pair_riemann",
]

CHUNK = 1 << 16


class Sampler:
    """Seeded i.i.d. draws from a discrete or Gaussian measure.

    Draws come in fixed-size chunks; chunk ``k`` uses its own stream seeded
    by ``SeedSequence(seed, spawn_key=(k,))``, so results do not depend on
    how the work is split. Gaussian draws use the Box-Muller transform of
    uniform deviates followed by a symmetric square root of the covariance.
    """

    def __init__(self, measure, seed: int):
        if not isinstance(measure, (DiscreteMeasure, GaussianMeasure)):
            raise TypeError("only discrete and Gaussian measures can be sampled")
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.measure = measure
        self.seed = seed
        if isinstance(measure, DiscreteMeasure):
            self._points = np.array([[float(v) for v in p] for p, _ in measure.atoms], dtype=float)
            cum = np.cumsum([float(w) for _, w in measure.atoms])
            cum[-1] = 1.0
            self._cum = cum
        else:
            cov = np.array([[float(v) for v in row] for row in measure.cov], dtype=float)
            vals, vecs = np.linalg.eigh(cov) if cov.size else (np.zeros(0), np.zeros((0, 0)))
            self._factor = vecs * np.sqrt(np.clip(vals, 0.0, None))
            self._mean = np.array([float(v) for v in measure.mean], dtype=float)

    @property
    def dim(self) -> int:
        return self.measure.dim

    def _chunk(self, k: int, size: int) -> np.ndarray:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(k,))))
        if isinstance(self.measure, DiscreteMeasure):
            u = rng.random(size)
            idx = np.minimum(np.searchsorted(self._cum, u, side="right"), len(self._cum) - 1)
            return self._points[idx]
        # one (u1, u2) pair per coordinate, row-major, so shorter draws are prefixes of longer ones
        u = rng.random((size, 2, self.dim))
        z = np.sqrt(-2.0 * np.log1p(-u[:, 0])) * np.cos(2.0 * math.pi * u[:, 1])
        return self._mean + z @ self._factor.T

    def draw(self, count: int) -> np.ndarray:
        """Array of shape (count, dim)."""
        if count <= 0:
            raise ValueError("number of samples must be positive")
        parts, k = [], 0
        while count > 0:
            size = min(CHUNK, count)
            parts.append(self._chunk(k, size))
            count -= size
            k += 1
        return np.concatenate(parts, axis=0)


def evaluate_float(p: Polynomial, points: np.ndarray) -> np.ndarray:
    """Evaluate ``p`` row-wise on an (N, nvars) float array."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != p.nvars:
        raise ValueError(f"expected points of shape (N, {p.nvars})")
    out = np.zeros(points.shape[0])
    for e, c in p.items():
        term = np.full(points.shape[0], float(c))
        for j, k in enumerate(e):
            if k:
                term = term * points[:, j] ** k
        out += term
    return out


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    stderr: float
    num_samples: int
    seed: int


def monte_carlo_expectation(p: Polynomial, sampler: Sampler, num_samples: int) -> MCEstimate:
    """Sample mean and standard error of ``p`` over ``num_samples`` seeded draws."""
    if p.nvars != sampler.dim:
        raise ValueError(f"polynomial in {p.nvars} variables, measure of dimension {sampler.dim}")
    if num_samples <= 0:
        raise ValueError("number of samples must be positive")
    values = evaluate_float(p, sampler.draw(num_samples))
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(num_samples)) if num_samples > 1 else math.nan
    return MCEstimate(mean, stderr, num_samples, sampler.seed)


# --------------------------------------------------------------------------
# Wiener process on a grid
# --------------------------------------------------------------------------

class WienerGrid:
    """Brownian motion sampled at i b / l, i = 1..l, with covariance min(s_i, s_j)."""

    def __init__(self, b, l: int):
        b = as_fraction(b)
        if b <= 0:
            raise ValueError("support bound b must be positive")
        if l < 1:
            raise ValueError("grid count must be at least 1")
        self.b = b
        self.l = int(l)
        self._measure = None

    @property
    def points(self) -> list[Fraction]:
        return [self.b * i / self.l for i in range(1, self.l + 1)]

    @property
    def step(self) -> Fraction:
        return self.b / self.l

    def covariance(self) -> list[list[Fraction]]:
        s = self.points
        return [[min(a, c) for c in s] for a in s]

    def measure(self) -> GaussianMeasure:
        if self._measure is None:
            self._measure = GaussianMeasure([0] * self.l, self.covariance())
        return self._measure


@dataclass(frozen=True)
class SampledFunction:
    """A real function supported in (0, support], vectorized over float arrays.

    ``exact`` optionally gives rational values at rational points; without
    it, float values are converted to Fractions exactly.
    """

    func: Callable[[np.ndarray], np.ndarray]
    support: Fraction
    name: str = "f"
    exact: Callable[[Fraction], Fraction] | None = None

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def value(self, x: Fraction) -> Fraction:
        if self.exact is not None:
            return self.exact(x)
        return Fraction(float(self.func(np.array([float(x)]))[0]))


def builtin_function(name: str, b) -> SampledFunction:
    """``one`` (indicator of (0, b]), ``tent`` (peak 1 at b/2) or ``hat`` (sin^2(pi x / b))."""
    b = as_fraction(b)
    fb = float(b)
    if name == "one":
        return SampledFunction(lambda x: np.where((x > 0) & (x <= fb), 1.0, 0.0), b, name,
                               lambda x: Fraction(1) if 0 < x <= b else Fraction(0))
    if name == "tent":
        def tent_exact(x):
            return 1 - abs(2 * x / b - 1) if 0 <= x <= b else Fraction(0)
        return SampledFunction(lambda x: np.where((x >= 0) & (x <= fb), 1.0 - np.abs(2.0 * x / fb - 1.0), 0.0),
                               b, name, tent_exact)
    if name == "hat":
        return SampledFunction(lambda x: np.where((x >= 0) & (x <= fb), np.sin(math.pi * x / fb) ** 2, 0.0),
                               b, name)
    if name == "zero":
        return SampledFunction(lambda x: np.zeros_like(x), b, name, lambda x: Fraction(0))
    raise ValueError(f"unknown built-in function {name!r}; choose one, tent, hat or zero")


def load_function(path: str) -> SampledFunction:
    """Piecewise-linear function from a two-column CSV of (x, f(x)); zero outside the sampled range."""
    xs, ys = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if len(row) < 2:
                continue
            try:
                x, y = float(row[0]), float(row[1])
            except ValueError:
                continue  # header line
            xs.append(x)
            ys.append(y)
    if len(xs) < 2:
        raise ValueError(f"{path}: need at least two numeric (x, y) rows")
    order = np.argsort(xs)
    xa, ya = np.asarray(xs)[order], np.asarray(ys)[order]
    if xa[0] < 0:
        raise ValueError(f"{path}: samples must lie in [0, b]")
    return SampledFunction(lambda x: np.interp(x, xa, ya, left=0.0, right=0.0),
                           Fraction(float(xa[-1])), path)


def _check_support(grid: WienerGrid, f: SampledFunction):
    if f.support > grid.b:
        raise ValueError(f"{f.name} is supported up to {f.support}, beyond b = {grid.b}")


def field_weights(grid: WienerGrid, f: SampledFunction) -> list[Fraction]:
    """Exact Riemann weights (b/l) f(i b / l) on the grid variables."""
    _check_support(grid, f)
    h = grid.step
    return [h * f.value(s) for s in grid.points]


def discretized_field(grid: WienerGrid, f: SampledFunction) -> np.ndarray:
    """Float Riemann weights (b/l) f(i b / l): Y_l(f) = sum_i w_i B(i b / l)."""
    _check_support(grid, f)
    s = np.arange(1, grid.l + 1) * (float(grid.b) / grid.l)
    return (float(grid.b) / grid.l) * f(s)


@dataclass(frozen=True)
class RiemannResult:
    riemann_cov: float
    limit_cov: float
    gap: float
    b: Fraction
    l: int
    l_ref: int

    def to_dict(self) -> dict:
        return {"riemannCov": self.riemann_cov, "limitCov": self.limit_cov, "gap": self.gap,
                "b": str(self.b), "l": self.l, "lRef": self.l_ref}


def _midpoint_covariance(f1: SampledFunction, f2: SampledFunction, b: float, n: int) -> float:
    h = b / n
    s = (np.arange(n) + 0.5) * h
    return min_kernel_form(h * f1(s), h * f2(s), s)


def wick_pair_riemann(grid: WienerGrid, f1: SampledFunction, f2: SampledFunction,
                      l_ref: int | None = None) -> RiemannResult:
    """Covariance E[Y_l(f1) Y_l(f2)] on the grid against a fine midpoint-rule reference.

    The reference approximates the double integral of f1(x) f2(y) min(x, y)
    with ``l_ref`` >= 64 l midpoints per axis.
    """
    _check_support(grid, f1)
    _check_support(grid, f2)
    if l_ref is None:
        l_ref = max(64 * grid.l, 4096)
    if l_ref < 64 * grid.l:
        raise ValueError("reference resolution must be at least 64 l")
    s = np.arange(1, grid.l + 1) * (float(grid.b) / grid.l)
    riemann = min_kernel_form(discretized_field(grid, f1), discretized_field(grid, f2), s)
    limit = _midpoint_covariance(f1, f2, float(grid.b), l_ref)
    return RiemannResult(riemann, limit, abs(riemann - limit), grid.b, grid.l, l_ref)


def verify_grid_wick_identity(grid: WienerGrid, fs: Sequence[SampledFunction]) -> Report:
    """Check :Y_l(f_1)...Y_l(f_n): == sum over grid tuples of weights times :B(s_i1)...B(s_in): exactly.

    Both sides are polynomials in the l grid variables with the rational
    grid covariance; the left side Wick-orders the product of the linear
    combinations, the right side Wick-orders grid monomials and sums.
    """
    n = len(fs)
    weights = [field_weights(grid, f) for f in fs]
    X = RandomVector(grid.measure())
    W = LinearMap(weights, cols=grid.l)
    lhs = wick_monomial(X.transformed(W), (1,) * n).value
    rhs = Polynomial.zero(grid.l)
    for idx in itertools.product(range(grid.l), repeat=n):
        w = Fraction(1)
        for k, i in enumerate(idx):
            w *= weights[k][i]
            if not w:
                break
        if not w:
            continue
        beta = [0] * grid.l
        for i in idx:
            beta[i] += 1
        rhs = rhs + wick_monomial(X, beta).value.scale(w)
    return compare("grid-wick", lhs, rhs, n=n, l=grid.l, b=str(grid.b))

"""Independent oracles, fixture measures and hypothesis strategies shared by the tests."""
import itertools
import math
from fractions import Fraction
from functools import lru_cache

from hypothesis import strategies as st

from segalwick.algebra import LinearMap, Polynomial, col_sums, row_sums
from segalwick.moments import DiscreteMeasure, GaussianMeasure, ProductMeasure

F = Fraction


# -- oracles ---------------------------------------------------------------

def brute_force_tables(rsums, csums):
    """Exhaustive search over every matrix with entries bounded by min(row, col) margins."""
    m, n = len(rsums), len(csums)
    ranges = [range(min(rsums[i], csums[j]) + 1) for i in range(m) for j in range(n)]
    out = []
    for flat in itertools.product(*ranges):
        g = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(m))
        if row_sums(g) == tuple(rsums) and col_sums(g, n) == tuple(csums):
            out.append(g)
    return out


def all_pairings(items):
    items = list(items)
    if not items:
        yield []
        return
    first = items.pop(0)
    for i, other in enumerate(items):
        for rest in all_pairings(items[:i] + items[i + 1:]):
            yield [(first, other)] + rest


def isserlis_oracle(cov, beta):
    """Centered Gaussian moment as an explicit sum over pair partitions."""
    factors = [j for j, b in enumerate(beta) for _ in range(b)]
    if len(factors) % 2:
        return F(0)
    total = F(0)
    for pairing in all_pairings(range(len(factors))):
        term = F(1)
        for a, b in pairing:
            term *= cov[factors[a]][factors[b]]
        total += term
    return total


def shifted_gaussian_oracle(mean, cov, beta):
    """E[prod (m_i + Z_i)] by choosing which factors take the mean."""
    factors = [j for j, b in enumerate(beta) for _ in range(b)]
    total = F(0)
    for mask in itertools.product((0, 1), repeat=len(factors)):
        shift = F(1)
        central = [0] * len(beta)
        for take_mean, j in zip(mask, factors):
            if take_mean:
                shift *= mean[j]
            else:
                central[j] += 1
        if shift:
            total += shift * isserlis_oracle(cov, central)
    return total


def double_factorial(k):
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def hermite_table(kmax):
    """Monic probabilists' Hermite polynomials via He_{k+1} = x He_k - k He_{k-1}."""
    x = Polynomial.variable(1, 0)
    out = [Polynomial.constant(1, 1), x]
    for k in range(1, kmax):
        out.append(x * out[k] - out[k - 1].scale(k))
    return out[:kmax + 1]


def expand_substitution(p, T):
    """p(T x) by expanding every monomial as a product of linear forms, term by term."""
    n = T.cols
    out = Polynomial.zero(n)
    for e, c in p.items():
        term = Polynomial.constant(n, c)
        for i, k in enumerate(e):
            form = Polynomial(n, {tuple(1 if jj == j else 0 for jj in range(n)): T[i, j] for j in range(n)})
            for _ in range(k):
                term = term * form
        out = out + term
    return out


# -- fixtures --------------------------------------------------------------

SHIFT_MEAN = (F(1), F(-1, 2), F(2, 3))
SHIFT_COV = ((F(2), F(1, 2), F(0)), (F(1, 2), F(1), F(1, 4)), (F(0), F(1, 4), F(3, 2)))
ASYM_A = (F(-1), F(2), F(1, 2))
ASYM_B = (F(2), F(-1, 3), F(1))


@lru_cache(maxsize=None)
def fixture_measures(n):
    """The named fixture set on R^n; the product fixture needs n >= 2 and is omitted for n = 1."""
    out = {
        "dirac0": DiscreteMeasure.dirac([0] * n),
        "coin": DiscreteMeasure([([0] * n, F(1, 2)), ([1] * n, F(1, 2))]),
        "asym2": DiscreteMeasure([(ASYM_A[:n], F(1, 3)), (ASYM_B[:n], F(2, 3))]),
        "gauss": GaussianMeasure.standard(n),
        "shifted": GaussianMeasure(SHIFT_MEAN[:n], [row[:n] for row in SHIFT_COV[:n]]),
    }
    if n >= 2:
        out["dirac_x_gauss"] = ProductMeasure([DiscreteMeasure.dirac([0]), GaussianMeasure.standard(n - 1)])
    return out


def all_fixtures(dims=(1, 2, 3)):
    for n in dims:
        for name, mu in fixture_measures(n).items():
            yield f"{name}[{n}]", mu


@lru_cache(maxsize=None)
def symmetric_measures():
    return {
        "gauss1": GaussianMeasure.standard(1),
        "gauss2": GaussianMeasure([0, 0], [[2, F(1, 2)], [F(1, 2), 1]]),
        "pm1": DiscreteMeasure([([-1], F(1, 2)), ([1], F(1, 2))]),
        "sym2d": DiscreteMeasure([([1, 2], F(1, 6)), ([-1, -2], F(1, 6)),
                                  ([1, -1], F(1, 3)), ([-1, 1], F(1, 3))]),
    }


# -- strategies ------------------------------------------------------------

small_fractions = st.builds(F, st.integers(-4, 4), st.integers(1, 3))


def polynomials(nvars=2, max_exp=3, max_terms=4):
    exps = st.tuples(*[st.integers(0, max_exp)] * nvars)
    return st.dictionaries(exps, small_fractions, max_size=max_terms).map(lambda d: Polynomial(nvars, d))


def linear_maps(m, n):
    return st.lists(st.lists(small_fractions, min_size=n, max_size=n), min_size=m, max_size=m).map(
        lambda rows: LinearMap(rows, cols=n))

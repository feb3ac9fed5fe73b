"""Exact multi-index, matrix and sparse polynomial arithmetic over the rationals.

Multi-indices are plain tuples of nonnegative ints. Natural-number matrices
are tuples of row tuples. Scalars are :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from ._backend import enumerate_tables

__all__ = [
    "DimensionError",
    "LinearMap",
    "Polynomial",
    "as_fraction",
    "col_sums",
    "delta",
    "enumerate_row_col_matrices",
    "first_difference",
    "matrix_factorial",
    "mfactorial",
    "multi_indices",
    "multi_indices_upto",
    "order",
    "random_linear_map",
    "row_sums",
]


class DimensionError(ValueError):
    """Operands have incompatible numbers of variables, rows or columns."""


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to Fraction; floats convert exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, str, float)):
        return Fraction(value)
    # numpy integers and similar
    return Fraction(value)


# --------------------------------------------------------------------------
# multi-indices
# --------------------------------------------------------------------------

def order(beta: Sequence[int]) -> int:
    return sum(beta)


def mfactorial(beta: Sequence[int]) -> int:
    """beta! = prod of beta_j!"""
    out = 1
    for b in beta:
        out *= math.factorial(b)
    return out


def delta(n: int, j: int) -> tuple[int, ...]:
    """Unit multi-index of length ``n`` with a one at position ``j`` (0-based)."""
    if not 0 <= j < n:
        raise IndexError(f"index {j} out of range for {n} variables")
    return tuple(1 if k == j else 0 for k in range(n))


def _check_index(beta) -> tuple[int, ...]:
    beta = tuple(int(b) for b in beta)
    if any(b < 0 for b in beta):
        raise ValueError(f"multi-index entries must be nonnegative, got {beta}")
    return beta


def multi_indices(n: int, total: int) -> Iterator[tuple[int, ...]]:
    """All multi-indices of length ``n`` and order ``total``, in ascending lexicographic order."""
    if n == 0:
        if total == 0:
            yield ()
        return
    if n == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in multi_indices(n - 1, total - first):
            yield (first,) + rest


def multi_indices_upto(n: int, max_order: int) -> Iterator[tuple[int, ...]]:
    """All multi-indices of length ``n`` with order at most ``max_order``, graded by order."""
    for k in range(max_order + 1):
        yield from multi_indices(n, k)


# --------------------------------------------------------------------------
# natural-number matrices
# --------------------------------------------------------------------------

def row_sums(gamma: Sequence[Sequence[int]]) -> tuple[int, ...]:
    return tuple(sum(row) for row in gamma)


def col_sums(gamma: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[int, ...]:
    if not gamma:
        return (0,) * (ncols or 0)
    return tuple(sum(col) for col in zip(*gamma))


def matrix_factorial(gamma: Sequence[Sequence[int]]) -> int:
    out = 1
    for row in gamma:
        out *= mfactorial(row)
    return out


def enumerate_row_col_matrices(rsums: Sequence[int], csums: Sequence[int]) -> list[tuple[tuple[int, ...], ...]]:
    """Every m x n matrix over N_0 with row sums ``rsums`` and column sums ``csums``.

    Output is duplicate free and sorted lexicographically by the row-major
    entries. Margins with different totals give an empty list.
    """
    rsums = _check_index(rsums)
    csums = _check_index(csums)
    m, n = len(rsums), len(csums)
    if m == 0 or n == 0:
        return [tuple(() for _ in range(m))] if sum(rsums) == sum(csums) == 0 else []
    flat = enumerate_tables(rsums, csums)
    return [tuple(tuple(f[i * n:(i + 1) * n]) for i in range(m)) for f in flat]


# --------------------------------------------------------------------------
# linear maps
# --------------------------------------------------------------------------

class LinearMap:
    """An m x n matrix with exact rational entries, acting R^n -> R^m."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        rows_ = tuple(tuple(as_fraction(v) for v in row) for row in entries)
        if cols is None:
            if not rows_:
                raise DimensionError("cannot infer the column count of an empty matrix; pass cols")
            cols = len(rows_[0])
        if any(len(r) != cols for r in rows_):
            raise DimensionError("ragged matrix rows")
        object.__setattr__(self, "rows", len(rows_))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", rows_)

    def __setattr__(self, name, value):
        raise AttributeError("LinearMap is immutable")

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def diag(cls, c: Sequence) -> "LinearMap":
        n = len(c)
        return cls([[c[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "LinearMap":
        return cls([[0] * n for _ in range(m)], cols=n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.entries)
        return f"LinearMap([{body}])"

    @property
    def T(self) -> "LinearMap":
        return LinearMap(zip(*self.entries), cols=self.rows) if self.rows else LinearMap([], cols=0)

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        if not isinstance(other, LinearMap):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return LinearMap(
            [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in self.entries],
            cols=other.cols,
        )

    def apply(self, vector: Sequence) -> tuple[Fraction, ...]:
        if len(vector) != self.cols:
            raise DimensionError(f"vector of length {len(vector)} for a map with {self.cols} columns")
        v = [as_fraction(x) for x in vector]
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.entries)

    def power(self, gamma: Sequence[Sequence[int]]) -> Fraction:
        """T^Gamma = prod T_ij^Gamma_ij, with 0^0 = 1."""
        out = Fraction(1)
        for row_t, row_g in zip(self.entries, gamma):
            for t, g in zip(row_t, row_g):
                if g:
                    out *= t ** g
                    if not out:
                        return out
        return out

    def is_partial_trace(self) -> bool:
        """True when every row has exactly one entry equal to 1 and zeros elsewhere."""
        for row in self.entries:
            if sorted(row) != [0] * (self.cols - 1) + [1]:
                return False
        return True


def random_linear_map(rng, m: int, n: int, max_num: int = 3, dens: Sequence[int] = (1, 2, 3)) -> LinearMap:
    """Random rational matrix with small numerators and denominators, drawn from a ``random.Random``."""
    return LinearMap(
        [[Fraction(rng.randint(-max_num, max_num), rng.choice(dens)) for _ in range(n)] for _ in range(m)],
        cols=n,
    )


# --------------------------------------------------------------------------
# sparse polynomials
# --------------------------------------------------------------------------

class Polynomial:
    """Sparse polynomial in ``nvars`` variables with exact rational coefficients.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term maps are equal. Instances are immutable and hashable.
    Variables are 0-based in the API and print as ``x1, x2, ...``.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping | Iterable = ()):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], Fraction] = {}
        for exp, coeff in items:
            exp = _check_index(exp)
            if len(exp) != nvars:
                raise DimensionError(f"exponent {exp} does not have length {nvars}")
            c = as_fraction(coeff)
            if c:
                acc[exp] = acc.get(exp, 0) + c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_terms", {e: c for e, c in acc.items() if c})
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        # trusted constructor: keys valid, values nonzero Fractions
        obj = object.__new__(cls)
        object.__setattr__(obj, "nvars", nvars)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c=1) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "Polynomial":
        exp = tuple(exp)
        return cls(len(exp), {exp: coeff})

    @classmethod
    def variable(cls, nvars: int, j: int) -> "Polynomial":
        return cls._raw(nvars, {delta(nvars, j): Fraction(1)})

    @classmethod
    def linear_form(cls, coeffs: Sequence) -> "Polynomial":
        n = len(coeffs)
        return cls(n, {delta(n, j): c for j, c in enumerate(coeffs)})

    # access --------------------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in ascending lexicographic order of exponents."""
        return sorted(self._terms.items())

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_monic_in(self, beta: Sequence[int]) -> bool:
        """Coefficient of x^beta is 1 and every other term has lower total degree."""
        beta = tuple(beta)
        k = sum(beta)
        return self.coefficient(beta) == 1 and all(sum(e) < k for e in self._terms if e != beta)

    # comparison ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.nvars, frozenset(self._terms.items()))))
        return self._hash

    # arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise DimensionError(f"polynomials in {self.nvars} and {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self.nvars, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return Polynomial._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = as_fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial._raw(self.nvars, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative int")
        out = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # calculus and evaluation ---------------------------------------------

    def derivative(self, j: int) -> "Polynomial":
        """Partial derivative in variable ``j`` (0-based)."""
        if not 0 <= j < self.nvars:
            raise IndexError(f"variable index {j} out of range for {self.nvars} variables")
        terms = {}
        for e, c in self._terms.items():
            if e[j]:
                terms[e[:j] + (e[j] - 1,) + e[j + 1:]] = c * e[j]
        return Polynomial._raw(self.nvars, terms)

    def __call__(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise DimensionError(f"point of length {len(point)} for {self.nvars} variables")
        pt = [as_fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for v, k in zip(pt, e):
                if k:
                    term *= v ** k
            total += term
        return total

    evaluate = __call__

    def compose_linear(self, T: LinearMap) -> "Polynomial":
        """Return the polynomial x -> self(T x) in ``T.cols`` variables."""
        if self.nvars != T.rows:
            raise DimensionError(f"polynomial in {self.nvars} variables composed with a {T.rows}x{T.cols} map")
        n = T.cols
        forms = [Polynomial(n, {delta(n, j): t for j, t in enumerate(row)}) for row in T.entries]
        powers: list[dict[int, Polynomial]] = [{} for _ in forms]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = forms[i] ** k
            return cache[k]

        out = Polynomial.zero(n)
        for e, c in self._terms.items():
            term = Polynomial.constant(n, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def embed(self, nvars: int, offset: int = 0) -> "Polynomial":
        """Same polynomial viewed in ``nvars`` variables, own variables placed from ``offset``."""
        if offset < 0 or offset + self.nvars > nvars:
            raise DimensionError("embedding does not fit")
        pad_r = nvars - offset - self.nvars
        return Polynomial._raw(nvars, {(0,) * offset + e + (0,) * pad_r: c for e, c in self._terms.items()})

    # printing -------------------------------------------------------------

    def __str__(self):
        return self.pretty()

    def pretty(self, names: Sequence[str] | None = None) -> str:
        """Human-readable form, graded descending, e.g. ``x1^3 - 3*x1``."""
        if not self._terms:
            return "0"
        names = names or [f"x{j + 1}" for j in range(self.nvars)]
        ordered = sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))
        parts = []
        for idx, (e, c) in enumerate(ordered):
            factors = [names[j] if k == 1 else f"{names[j]}^{k}" for j, k in enumerate(e) if k]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                coeff = str(mag)
                if mag.denominator != 1:
                    coeff = f"({coeff})"
                body = coeff + "*" + "*".join(factors)
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({self.nvars}, {dict(self.items())!r})"


def first_difference(p: Polynomial, q: Polynomial):
    """First exponent (ascending lex) where ``p`` and ``q`` differ, with both coefficients; None if equal."""
    if p.nvars != q.nvars:
        raise DimensionError(f"polynomials in {p.nvars} and {q.nvars} variables")
    for e in sorted(set(p.terms) | set(q.terms)):
        a, b = p.coefficient(e), q.coefficient(e)
        if a != b:
            return e, a, b
    return None


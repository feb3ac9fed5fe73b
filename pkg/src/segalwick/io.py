"""JSON formats for rationals, polynomials, linear maps and measures.

Integers are written as decimal strings so no precision is lost. On input,
a rational may also be a bare int or a ``"p/q"`` string.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .algebra import LinearMap, Polynomial, as_fraction
from .moments import (
    DiscreteMeasure,
    GaussianMeasure,
    MomentProvider,
    ProductMeasure,
    PushforwardMeasure,
    TabulatedMeasure,
)


class FormatError(ValueError):
    """Malformed JSON input; the message names the offending field."""


def rational_to_json(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def rational_from_json(obj, where: str = "value") -> Fraction:
    try:
        if isinstance(obj, dict):
            num, den = int(obj["num"]), int(obj.get("den", 1))
            if den <= 0:
                raise FormatError(f"{where}: denominator must be positive")
            return Fraction(num, den)
        if isinstance(obj, (int, str)) and not isinstance(obj, bool):
            return as_fraction(obj)
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"{where}: not a rational ({exc})") from None
    raise FormatError(f"{where}: expected {{'num','den'}}, an int or a 'p/q' string")


def polynomial_to_json(p: Polynomial) -> dict:
    return {
        "numVars": p.nvars,
        "terms": [{"exp": list(e), **rational_to_json(c)} for e, c in p.items()],
    }


def polynomial_from_json(obj) -> Polynomial:
    if not isinstance(obj, dict) or "numVars" not in obj:
        raise FormatError("polynomial: missing 'numVars'")
    n = obj["numVars"]
    if not isinstance(n, int) or n < 0:
        raise FormatError("polynomial.numVars: expected a nonnegative int")
    terms = []
    for k, t in enumerate(obj.get("terms", [])):
        where = f"polynomial.terms[{k}]"
        exp = t.get("exp") if isinstance(t, dict) else None
        if not isinstance(exp, list) or len(exp) != n or not all(isinstance(e, int) and e >= 0 for e in exp):
            raise FormatError(f"{where}.exp: expected {n} nonnegative ints")
        terms.append((tuple(exp), rational_from_json(t, where)))
    return Polynomial(n, terms)


def linear_map_to_json(T: LinearMap) -> dict:
    return {"rows": T.rows, "cols": T.cols,
            "entries": [[rational_to_json(v) for v in row] for row in T.entries]}


def linear_map_from_json(obj, where: str = "map") -> LinearMap:
    if not isinstance(obj, dict) or not {"rows", "cols", "entries"} <= set(obj):
        raise FormatError(f"{where}: a linear map needs 'rows', 'cols' and 'entries'")
    m, n, entries = obj["rows"], obj["cols"], obj["entries"]
    if not isinstance(entries, list) or len(entries) != m or any(
        not isinstance(r, list) or len(r) != n for r in entries
    ):
        raise FormatError(f"{where}.entries: expected {m} rows of {n} rationals")
    return LinearMap([[rational_from_json(v, f"{where}.entries[{i}][{j}]") for j, v in enumerate(row)]
                      for i, row in enumerate(entries)], cols=n)


def measure_to_json(mu: MomentProvider) -> dict:
    if isinstance(mu, DiscreteMeasure):
        out = {"kind": "discrete", "atoms": [{"point": [rational_to_json(v) for v in p],
                                              "weight": rational_to_json(w)} for p, w in mu.atoms]}
    elif isinstance(mu, GaussianMeasure):
        out = {"kind": "gaussian", "mean": [rational_to_json(v) for v in mu.mean],
               "cov": [[rational_to_json(v) for v in row] for row in mu.cov]}
    elif isinstance(mu, ProductMeasure):
        return {"kind": "product", "factors": [measure_to_json(f) for f in mu.factors]}
    elif isinstance(mu, PushforwardMeasure):
        return {"kind": "pushforward", "base": measure_to_json(mu.base), "map": linear_map_to_json(mu.map)}
    elif isinstance(mu, TabulatedMeasure):
        out = {"kind": "tabulated", "dim": mu.dim,
               "moments": [{"exp": list(e), "value": rational_to_json(v)} for e, v in sorted(mu.table.items())]}
    else:
        raise TypeError(f"no JSON form for {type(mu).__name__}")
    if mu.order_bound != float("inf"):
        out["orderBound"] = int(mu.order_bound)
    return out


def _order_bound(obj, where):
    if "orderBound" not in obj:
        return float("inf")
    nb = obj["orderBound"]
    if not isinstance(nb, int) or nb < 1:
        raise FormatError(f"{where}.orderBound: expected a positive int")
    return nb


def measure_from_json(obj, where: str = "measure") -> MomentProvider:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise FormatError(f"{where}: missing 'kind'")
    kind = obj["kind"]
    try:
        if kind == "discrete":
            atoms = obj.get("atoms")
            if not isinstance(atoms, list) or not atoms:
                raise FormatError(f"{where}.atoms: expected a nonempty list")
            parsed = []
            for k, a in enumerate(atoms):
                if not isinstance(a, dict) or not isinstance(a.get("point"), list) or "weight" not in a:
                    raise FormatError(f"{where}.atoms[{k}]: needs 'point' (list) and 'weight'")
                parsed.append(([rational_from_json(v, f"{where}.atoms[{k}].point") for v in a["point"]],
                               rational_from_json(a["weight"], f"{where}.atoms[{k}].weight")))
            return DiscreteMeasure(parsed, _order_bound(obj, where))
        if kind == "gaussian":
            mean, cov = obj.get("mean"), obj.get("cov")
            if not isinstance(mean, list) or not isinstance(cov, list):
                raise FormatError(f"{where}: gaussian needs 'mean' (list) and 'cov' (matrix)")
            return GaussianMeasure([rational_from_json(v, f"{where}.mean") for v in mean],
                                   [[rational_from_json(v, f"{where}.cov") for v in row] for row in cov],
                                   _order_bound(obj, where))
        if kind == "product":
            factors = obj.get("factors")
            if not isinstance(factors, list) or not factors:
                raise FormatError(f"{where}.factors: expected a nonempty list")
            return ProductMeasure([measure_from_json(f, f"{where}.factors[{k}]") for k, f in enumerate(factors)])
        if kind == "pushforward":
            base = measure_from_json(obj.get("base"), f"{where}.base")
            return base.pushforward(linear_map_from_json(obj.get("map"), f"{where}.map"))
        if kind == "tabulated":
            table = {tuple(e["exp"]): rational_from_json(e["value"], f"{where}.moments")
                     for e in obj.get("moments", [])}
            return TabulatedMeasure(int(obj["dim"]), table, _order_bound(obj, where))
    except FormatError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise FormatError(f"{where}: {exc}") from None
    raise FormatError(f"{where}.kind: unknown kind {kind!r}")


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, indent=2, sort_keys=True)

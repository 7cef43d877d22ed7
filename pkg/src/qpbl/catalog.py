"""Built-in spaces and self-maps, keyed by stable identifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np
from scipy.optimize import bisect

from .core import INF, ExtendedNaturals, FiniteDomain, IntervalDomain, Space, as_fraction
from .errors import BadParams, UnknownId


def _vectorized(fn):
    """Wrap a broadcasting evaluator so scalar calls return plain floats."""

    def wrapper(x, y):
        out = fn(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    wrapper.__name__ = fn.__name__
    return wrapper


@_vectorized
def squared_sum(x, y):
    return np.where(x == y, 0.0, (x + y) ** 2)


@_vectorized
def max_plus_gap(x, y):
    return np.maximum(x, y) + np.abs(x - y)


@_vectorized
def gap_plus_source(x, y):
    return np.abs(x - y) + x


def _odd(p) -> bool:
    return p != INF and p % 2 == 1


def odd_reciprocal(x, y):
    if x == INF and y == INF:
        return Fraction(0)
    if _odd(x) and _odd(y):
        return abs(Fraction(1, x) - Fraction(1, y))
    if _odd(x) and y == INF:
        return Fraction(1, x)
    if x == INF and _odd(y):
        return Fraction(1, 2 * y)
    return Fraction(1)


SEC2_TABLE = [
    [0, 1, 1],
    [2, "1/2", "1/2"],
    [3, 3, "1/2"],
]
REMARK1_TABLE = [
    [0, 1, 1],
    [1, 1, 1],
    [1, 1, 1],
]
EX510_TABLE = [
    [0, 2, 6],
    [2, 1, 5],
    [5, 8, 2],
]


def _upper(params, default):
    value = params.get("upper", default)
    if isinstance(value, str):
        value = math.inf if value.lower() in {"inf", "+inf", "infinity"} else float(value)
    value = float(value)
    if not value > 0:
        raise BadParams("upper must be positive")
    return value


def _ex22(params):
    return Space("ex2.2", IntervalDomain(0.0, _upper(params, 1.0)), squared_sum, 2.0, vectorized=True)


def _ex23(params):
    return Space("ex2.3", IntervalDomain(0.0, _upper(params, math.inf)), max_plus_gap, 1.0, vectorized=True)


def _ex24(params):
    return Space("ex2.4", IntervalDomain(0.0, _upper(params, 1.0)), gap_plus_source, 1.0, vectorized=True)


def _ex25(params):
    q = params.get("q", 2)
    q = as_fraction(q) if isinstance(q, str) else q
    if not q > 1:
        raise BadParams(f"ex2.5 needs q > 1, got {q}")
    base = params.get("base")
    if base is None:
        qf = float(q)

        @_vectorized
        def powered(x, y):
            return np.abs(x - y) ** qf

        return Space("ex2.5", IntervalDomain(0.0, _upper(params, 1.0)), powered, 2.0 ** (qf - 1),
                     vectorized=True, meta={"q": qf, "base": "abs"})
    # base metric supplied as a table: {"points": [...], "matrix": [[...]]}
    try:
        points, matrix = base["points"], base["matrix"]
    except (KeyError, TypeError) as exc:
        raise BadParams("ex2.5 base must carry points and matrix") from exc
    if isinstance(q, int) or (isinstance(q, Fraction) and q.denominator == 1):
        qi = int(q)
        powered_rows = [[as_fraction(v) ** qi for v in row] for row in matrix]
        space = Space.from_table("ex2.5", points, powered_rows, Fraction(2) ** (qi - 1))
        return Space(space.name, space.domain, space.dist, space.coefficient_s, True, False, space.table,
                     {"q": qi, "base": "table"})
    qf = float(q)
    index = {p: i for i, p in enumerate(points)}
    rows = [[float(as_fraction(v)) for v in row] for row in matrix]

    def powered_table(x, y):
        return rows[index[x]][index[y]] ** qf

    return Space("ex2.5", FiniteDomain(points), powered_table, 2.0 ** (qf - 1), meta={"q": qf, "base": "table"})


def _ex314(params):
    trunc = int(params.get("truncation", 30))
    return Space("ex3.14", ExtendedNaturals(trunc), odd_reciprocal, Fraction(2), exact=True)


def _table(name, table, s):
    def build(params):
        return Space.from_table(name, [0, 1, 2], table, s)

    return build


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    kind: str
    summary: str
    source: str
    build: Callable = field(repr=False, compare=False)


SPACES = {
    "ex2.2": CatalogEntry("ex2.2", "space", "(x+y)^2 off the diagonal, 0 on it; [0,1]; s=2",
                          "Example 2.2", _ex22),
    "ex2.3": CatalogEntry("ex2.3", "space", "max{x,y} + |x-y|; [0,inf) sampled on [0,10]; s=1",
                          "Example 2.3", _ex23),
    "ex2.4": CatalogEntry("ex2.4", "space", "|x-y| + x; [0,1]; s=1", "Example 2.4", _ex24),
    "ex2.5": CatalogEntry("ex2.5", "space", "d'(x,y)^q for a metric d', q>1; s=2^(q-1)",
                          "Example 2.5", _ex25),
    "sec2-counterexample": CatalogEntry("sec2-counterexample", "space",
                                        "3-point table, qpbl with s=1 but not qpb",
                                        "Section 2 counterexample", _table("sec2-counterexample", SEC2_TABLE, 1)),
    "remark1": CatalogEntry("remark1", "space", "3-point table with non-T0 topology; s=1",
                            "Remark 1", _table("remark1", REMARK1_TABLE, 1)),
    "ex3.9": CatalogEntry("ex3.9", "space", "ex2.3 restricted to [0,1]", "Example 3.9",
                          lambda p: _rename(_ex23({"upper": 1.0, **p}), "ex3.9")),
    "ex3.10": CatalogEntry("ex3.10", "space", "ex2.2 on [0,1]", "Example 3.10",
                           lambda p: _rename(_ex22(p), "ex3.10")),
    "ex3.14": CatalogEntry("ex3.14", "space", "N u {inf} with odd-reciprocal distance; s=2",
                           "Example 3.14", _ex314),
    "ex5.10": CatalogEntry("ex5.10", "space", "3-point table; s=8/7", "Example 5.10",
                           _table("ex5.10", EX510_TABLE, Fraction(8, 7))),
}


def _rename(space: Space, name: str) -> Space:
    return Space(name, space.domain, space.dist, space.coefficient_s, space.exact, space.vectorized,
                 space.table, space.meta)


def make_space(space_id: str, **params) -> Space:
    try:
        entry = SPACES[space_id]
    except KeyError:
        raise UnknownId(f"unknown space id {space_id!r}", id=space_id) from None
    return entry.build(params)


# ---------------------------------------------------------------------------
# Mappings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mapping:
    name: str
    forward: Callable[[Any], Any]
    domain: Any
    inverse: Callable[[Any], Any] | None = None

    def __call__(self, x):
        return self.forward(x)


def expansive_forward(x):
    return 3.0 * x * math.sqrt(1.0 + x * x)


def expansive_inverse(y, xtol: float = 1e-12):
    """Invert the strictly increasing map on [0, inf) by bracketed bisection."""
    y = float(y)
    if y < 0:
        raise BadParams("expansive map is only invertible on [0, inf)")
    if y == 0:
        return 0.0
    hi = max(1.0, y)
    while expansive_forward(hi) < y:
        hi *= 2.0
    return bisect(lambda x: expansive_forward(x) - y, 0.0, hi, xtol=xtol, maxiter=400)


def _ex510_forward(x):
    return {0: 0, 1: 0, 2: 1}[x]


MAPPINGS = {
    "map-half": CatalogEntry("map-half", "mapping", "x -> x/2 on [0,1]", "Example 5.6",
                             lambda p: Mapping("map-half", lambda x: x / 2, IntervalDomain(0.0, 1.0))),
    "map-quarter": CatalogEntry("map-quarter", "mapping", "x -> x/4 on [0,1]", "contraction demo",
                                lambda p: Mapping("map-quarter", lambda x: x / 4, IntervalDomain(0.0, 1.0))),
    "map-ex5.10": CatalogEntry("map-ex5.10", "mapping", "0->0, 1->0, 2->1", "Example 5.10",
                               lambda p: Mapping("map-ex5.10", _ex510_forward, FiniteDomain((0, 1, 2)))),
    "map-expansive": CatalogEntry("map-expansive", "mapping", "x -> 3x sqrt(1+x^2) on [0,inf)", "Example 5.15",
                                  lambda p: Mapping("map-expansive", expansive_forward,
                                                    IntervalDomain(0.0, math.inf), expansive_inverse)),
}


def make_mapping(map_id: str, **params) -> Mapping:
    try:
        entry = MAPPINGS[map_id]
    except KeyError:
        raise UnknownId(f"unknown mapping id {map_id!r}", id=map_id) from None
    return entry.build(params)


def entries() -> list[CatalogEntry]:
    return list(SPACES.values()) + list(MAPPINGS.values())


def lookup(catalog_id: str) -> CatalogEntry:
    for table in (SPACES, MAPPINGS):
        if catalog_id in table:
            return table[catalog_id]
    raise UnknownId(f"unknown catalog id {catalog_id!r}", id=catalog_id)


def default_host(map_id: str) -> Space:
    """The space each catalog mapping is studied on."""
    return {
        "map-half": lambda: make_space("ex2.2"),
        "map-quarter": lambda: make_space("ex2.2"),
        "map-ex5.10": lambda: make_space("ex5.10"),
        "map-expansive": lambda: make_space("ex2.2", upper="inf"),
    }[map_id]()

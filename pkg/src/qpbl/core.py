"""Space model and axiom verification for quasi-partial b-metric-like spaces.

A :class:`Space` pairs a domain with a directed, nonnegative distance and a
claimed coefficient ``s``. Finite tables are held as exact fractions and are
checked exhaustively with zero tolerance; interval domains are checked on a
deterministic :class:`SamplePlan` and the results are labelled as sampled
evidence.

Axioms checked (for all x, y, z):

    QPbl1  d(x, y) = 0  implies  x = y
    QPbl2  d(x, x) <= d(x, y)
    QPbl3  d(x, x) <= d(y, x)
    QPbl4  d(x, y) <= s [d(x, z) + d(z, y)] - d(z, z)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from pathlib import Path
from typing import Any, Callable, Sequence, Union

import numpy as np

from .errors import (
    AxiomPrereqFailed,
    BadParams,
    InvalidCoefficient,
    PointOutsideDomain,
    SpaceFileError,
)

INF = "inf"
"""Label of the distinguished point +infinity in :class:`ExtendedNaturals`."""

Point = Any


# ---------------------------------------------------------------------------
# Domains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteDomain:
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise BadParams("finite domain needs at least one point")
        if len(set(self.points)) != len(self.points):
            raise BadParams("duplicate point labels", points=list(self.points))

    def contains(self, p: Point) -> bool:
        try:
            return p in self.points
        except TypeError:
            return False

    def describe(self) -> dict:
        return {"kind": "finite", "points": list(self.points)}


@dataclass(frozen=True)
class IntervalDomain:
    lower: float = 0.0
    upper: float = math.inf

    def __post_init__(self):
        if not self.lower < self.upper:
            raise BadParams("interval needs lower < upper")

    def contains(self, p: Point) -> bool:
        if isinstance(p, bool) or not isinstance(p, (Real, np.floating, np.integer)):
            return False
        return bool(self.lower <= p <= self.upper)

    def describe(self) -> dict:
        return {"kind": "interval", "lower": self.lower, "upper": self.upper}


@dataclass(frozen=True)
class ExtendedNaturals:
    """The positive integers plus :data:`INF`.

    Membership is unbounded; sweeps enumerate ``1..truncation`` and ``INF``.
    """

    truncation: int = 30

    def contains(self, p: Point) -> bool:
        if p == INF:
            return True
        return isinstance(p, (int, np.integer)) and not isinstance(p, bool) and p >= 1

    def enumerate(self) -> tuple:
        return tuple(range(1, self.truncation + 1)) + (INF,)

    def describe(self) -> dict:
        return {"kind": "extended-naturals", "truncation": self.truncation}


Domain = Union[FiniteDomain, IntervalDomain, ExtendedNaturals]


# ---------------------------------------------------------------------------
# Space
# ---------------------------------------------------------------------------


def as_fraction(value) -> Fraction:
    """Exact conversion. Floats go through their decimal repr, so 0.1 -> 1/10."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise BadParams(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise BadParams(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise BadParams(f"cannot parse {value!r} as a rational") from exc
    raise BadParams(f"not a number: {value!r}")


@dataclass(frozen=True)
class Space:
    """A set with a directed distance and a claimed coefficient.

    ``exact`` spaces return :class:`~fractions.Fraction` distances and are
    compared without tolerance. ``vectorized`` evaluators accept numpy arrays
    and broadcast.
    """

    name: str
    domain: Domain
    dist: Callable[[Point, Point], Any]
    coefficient_s: Union[Fraction, float]
    exact: bool = False
    vectorized: bool = False
    table: tuple | None = field(default=None, compare=False)
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.coefficient_s >= 1:
            raise InvalidCoefficient(f"coefficient s={self.coefficient_s} < 1")

    @classmethod
    def from_table(cls, name: str, points: Sequence, matrix: Sequence[Sequence], s) -> "Space":
        points = tuple(points)
        domain = FiniteDomain(points)
        n = len(points)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise BadParams(f"matrix must be {n}x{n}")
        rows = tuple(tuple(as_fraction(v) for v in row) for row in matrix)
        if any(v < 0 for row in rows for v in row):
            raise BadParams("distances must be nonnegative")
        index = {p: i for i, p in enumerate(points)}

        def dist(x, y):
            return rows[index[x]][index[y]]

        return cls(name, domain, dist, as_fraction(s), exact=True, table=rows)

    def __call__(self, x: Point, y: Point):
        return self.dist(x, y)

    def describe(self) -> dict:
        out = {
            "name": self.name,
            "domain": self.domain.describe(),
            "s": self.coefficient_s,
            "exact": self.exact,
        }
        if self.table is not None:
            out["matrix"] = [list(r) for r in self.table]
        out.update(self.meta)
        return out


def eval(space: Space, x: Point, y: Point):  # noqa: A001 - mirrors the operation name
    """Distance from ``x`` to ``y``; raises :class:`PointOutsideDomain`."""
    for p in (x, y):
        if not space.domain.contains(p):
            raise PointOutsideDomain(f"{p!r} is not in the domain of {space.name}", point=p)
    value = space.dist(x, y)
    if isinstance(value, np.ndarray):
        value = float(value)
    elif isinstance(value, np.floating):
        value = float(value)
    return value


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SamplePlan:
    """Deterministic evaluation policy for continuous domains.

    Pairs are checked over grid plus random points; triples over the full grid
    cube plus ``random_triples`` seeded triples drawn from the whole pool.
    Unbounded intervals are truncated at ``lower + truncation``.
    """

    grid_points_per_axis: int = 101
    random_points: int = 1000
    seed: int = 0
    tolerance: float = 1e-9
    truncation: float = 10.0
    random_triples: int = 100_000

    def __post_init__(self):
        if self.grid_points_per_axis < 1:
            raise BadParams("grid_points_per_axis must be positive")
        if self.random_points < 0 or self.random_triples < 0:
            raise BadParams("random counts must be nonnegative")
        if not self.tolerance > 0:
            raise BadParams("tolerance must be positive")

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed & 0xFFFFFFFFFFFFFFFF, salt])


DEFAULT_PLAN = SamplePlan()


def interval_bounds(domain: IntervalDomain, plan: SamplePlan) -> tuple[float, float]:
    hi = domain.upper if math.isfinite(domain.upper) else domain.lower + plan.truncation
    return float(domain.lower), float(hi)


def grid_points(domain: IntervalDomain, plan: SamplePlan) -> np.ndarray:
    lo, hi = interval_bounds(domain, plan)
    n = plan.grid_points_per_axis
    if n == 1:
        return np.array([lo])
    k = np.arange(n)
    pts = lo + (hi - lo) * k / (n - 1)
    pts[-1] = hi
    return pts


def sample_points(domain: Domain, plan: SamplePlan = DEFAULT_PLAN):
    """The evaluation set and its evidence label.

    Finite domains give all points (``exhaustive``); extended naturals give the
    truncation (``truncated``); intervals give sorted grid plus seeded uniform
    points (``sampled``).
    """
    if isinstance(domain, FiniteDomain):
        return list(domain.points), "exhaustive"
    if isinstance(domain, ExtendedNaturals):
        return list(domain.enumerate()), "truncated"
    lo, hi = interval_bounds(domain, plan)
    rand = plan.rng(1).uniform(lo, hi, size=plan.random_points)
    return np.unique(np.concatenate([grid_points(domain, plan), rand])), "sampled"


# ---------------------------------------------------------------------------
# Matrix helpers
# ---------------------------------------------------------------------------


def distance_matrix(space: Space, xs, ys=None) -> np.ndarray:
    """``M[i, j] = d(xs[i], ys[j])``; object dtype for exact spaces."""
    ys = xs if ys is None else ys
    if space.vectorized:
        a = np.asarray(xs, dtype=float)
        b = np.asarray(ys, dtype=float)
        return np.asarray(space.dist(a[:, None], b[None, :]), dtype=float)
    dtype = object if space.exact else float
    out = np.empty((len(xs), len(ys)), dtype=dtype)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            out[i, j] = space.dist(x, y)
    return out


def _tol(space: Space, plan: SamplePlan):
    return Fraction(0) if space.exact else plan.tolerance


def _argmax_first(values: np.ndarray) -> tuple[Any, tuple]:
    """Maximum and the lexicographically first index attaining it."""
    flat = values.ravel()
    best = max(flat) if values.dtype == object else flat.max()
    pos = next(i for i, v in enumerate(flat) if v == best) if values.dtype == object else int(np.argmax(flat))
    return best, np.unravel_index(pos, values.shape)


def _pyval(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def to_jsonable(obj):
    """Recursively convert fractions, numpy scalars and tuples for ``json``."""
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return to_jsonable(obj.item())
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = list(obj)
        if isinstance(obj, (set, frozenset)):
            items = sorted(items, key=_label_key)
        return [to_jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return obj


def _label_key(p):
    if p == INF:
        return (1, 0, "")
    if isinstance(p, (int, float, Fraction)) and not isinstance(p, bool):
        return (0, p, "")
    return (2, 0, str(p))


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class AxiomReport:
    """Verdict for one axiom.

    ``worst_violation`` is the largest excess of left over right side, clamped
    at 0; identity axioms (QPbl1, bl1, QPb1) use 1 as an indicator. Witness
    order: pairs as ``(x, y)``, triangle axioms as the path ``(x, z, y)``.
    """

    axiom_id: str
    passed: bool
    worst_violation: Any
    witness: tuple | None = None
    evidence: str = "exhaustive"
    checked: int = 0
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "axiom_id": self.axiom_id,
            "passed": self.passed,
            "worst_violation": self.worst_violation,
            "witness": None if self.witness is None else list(self.witness),
            "evidence": self.evidence,
            "checked": self.checked,
            "note": self.note,
        }


def _report(axiom_id, worst, witness, tol, evidence, checked, note="") -> AxiomReport:
    worst = _pyval(worst)
    worst = max(worst, 0 * worst) if worst is not None else 0
    passed = bool(worst <= tol)
    return AxiomReport(
        axiom_id,
        passed,
        worst,
        None if passed else tuple(_pyval(w) for w in witness),
        evidence,
        checked,
        note,
    )


class _Sweep:
    """Precomputed pair matrix over an evaluation set plus triple index sets."""

    def __init__(self, space: Space, plan: SamplePlan, dist=None):
        self.space = space
        self.plan = plan
        self.dist = dist or space.dist
        pts, self.evidence = sample_points(space.domain, plan)
        self.points = list(pts)
        self.tol = _tol(space, plan)
        view = space if dist is None else _with_dist(space, dist)
        self.D = distance_matrix(view, self.points)
        self.diag = np.array([self.D[i, i] for i in range(len(self.points))], dtype=self.D.dtype)
        n = len(self.points)
        if self.evidence == "sampled":
            grid = grid_points(space.domain, plan)
            self.grid_idx = np.searchsorted(np.asarray(pts), grid)
            self.rand_triples = plan.rng(2).integers(0, n, size=(plan.random_triples, 3))
        else:
            self.grid_idx = np.arange(n)
            self.rand_triples = None

    def label(self, i):
        return _pyval(self.points[i])

    def pair_check(self, axiom_id, excess, note="", mask=None):
        """``excess[i, j]`` > tol is a violation at the pair (i, j)."""
        if mask is not None:
            excess = np.where(mask, excess, 0 * excess)
        worst, (i, j) = _argmax_first(excess)
        return _report(axiom_id, worst, (self.label(i), self.label(j)), self.tol, self.evidence,
                       excess.size, note)

    def triple_max(self, fn):
        """Max of ``fn(Dxy, Dxz, Dzy, dzz)`` over triples; witness is (x, z, y)."""
        g = self.grid_idx
        Dg = self.D[np.ix_(g, g)]
        dz = self.diag[g]
        cube = fn(Dg[:, :, None], Dg[:, None, :], Dg.T[None, :, :], dz[None, None, :])
        worst, (a, b, c) = _argmax_first(cube)
        best = (worst, (g[a], g[c], g[b]))
        count = cube.size
        if self.rand_triples is not None and len(self.rand_triples):
            x, y, z = self.rand_triples.T
            vals = fn(self.D[x, y], self.D[x, z], self.D[z, y], self.diag[z])
            k = int(np.argmax(vals))
            cand = (vals[k], (x[k], z[k], y[k]))
            if cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
                best = cand
            count += len(vals)
        worst, idx = best
        return worst, tuple(self.label(i) for i in idx), count


def _with_dist(space: Space, dist) -> Space:
    return Space(space.name, space.domain, dist, space.coefficient_s, space.exact, space.vectorized)


def _distinct_mask(n: int) -> np.ndarray:
    return ~np.eye(n, dtype=bool)


def _qpbl1(sw: _Sweep, axiom_id="QPbl1") -> AxiomReport:
    n = len(sw.points)
    zero = ((sw.D == 0) & _distinct_mask(n)).astype(float)
    note = "sampled evidence only" if sw.evidence == "sampled" else ""
    rep = sw.pair_check(axiom_id, zero, note)
    rep.worst_violation = 1 if not rep.passed else 0
    return rep


def _check_all(sw: _Sweep, s) -> list[AxiomReport]:
    D, diag = sw.D, sw.diag
    reports = [_qpbl1(sw)]
    reports.append(sw.pair_check("QPbl2", diag[:, None] - D))
    reports.append(sw.pair_check("QPbl3", diag[:, None] - D.T))
    worst, wit, count = sw.triple_max(lambda dxy, dxz, dzy, dzz: dxy - (s * (dxz + dzy) - dzz))
    reports.append(_report("QPbl4", worst, wit, sw.tol, sw.evidence, count))
    return reports


def _coerce_s(space: Space, s):
    if s is None:
        s = space.coefficient_s
    if not s >= 1:
        raise InvalidCoefficient(f"coefficient s={s} < 1")
    if space.exact:
        return as_fraction(s)
    return float(s)


def check_axioms(space: Space, s=None, plan: SamplePlan = DEFAULT_PLAN) -> list[AxiomReport]:
    """One report per axiom QPbl1-QPbl4 at coefficient ``s`` (default: claimed)."""
    s = _coerce_s(space, s)
    return _check_all(_Sweep(space, plan), s)


def check_qpb1(space: Space, plan: SamplePlan = DEFAULT_PLAN) -> AxiomReport:
    """QPb1: d(x,x) = d(x,y) = d(y,y) forces x = y."""
    sw = _Sweep(space, plan)
    n = len(sw.points)
    D, diag = sw.D, sw.diag
    same = (abs(diag[:, None] - D) <= sw.tol) & (abs(D - diag[None, :]) <= sw.tol)
    hit = (same.astype(bool) & _distinct_mask(n)).astype(float)
    rep = sw.pair_check("QPb1", hit)
    rep.worst_violation = 0 if rep.passed else 1
    return rep


def is_symmetric(space: Space, plan: SamplePlan = DEFAULT_PLAN) -> AxiomReport:
    """Passes iff |d(x,y) - d(y,x)| <= tolerance on every evaluated pair."""
    sw = _Sweep(space, plan)
    return sw.pair_check("symmetric", abs(sw.D - sw.D.T))


def check_bml(space: Space, s=None, plan: SamplePlan = DEFAULT_PLAN) -> list[AxiomReport]:
    """b-metric-like axioms bl1-bl3 for the space's own distance."""
    s = _coerce_s(space, s)
    sw = _Sweep(space, plan)
    reports = [_qpbl1(sw, "bl1"), sw.pair_check("bl2", abs(sw.D - sw.D.T))]
    worst, wit, count = sw.triple_max(lambda dxy, dxz, dzy, dzz: dxy - s * (dxz + dzy))
    reports.append(_report("bl3", worst, wit, sw.tol, sw.evidence, count))
    return reports


# ---------------------------------------------------------------------------
# Coefficient
# ---------------------------------------------------------------------------


@dataclass
class CoefficientEstimate:
    """Smallest s making QPbl4 hold on the evaluated triples.

    ``lower_bound`` is set whenever the evaluation set is not the whole
    domain, since unseen triples can only raise the supremum.
    """

    value: Any
    exact: bool
    lower_bound: bool
    witness: tuple | None
    evidence: str

    def __float__(self):
        return float(self.value)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "value_float": float(self.value),
            "exact": self.exact,
            "lower_bound": self.lower_bound,
            "witness": None if self.witness is None else list(self.witness),
            "evidence": self.evidence,
        }


def _ratio_fn(exact: bool):
    # Triples with d(x,z) + d(z,y) = 0 force x = z = y under QPbl1 and QPbl2,
    # so their numerator d(x,y) + d(z,z) is 0 as well; they add nothing.
    if exact:
        def fn(dxy, dxz, dzy, dzz):
            den = dxz + dzy
            num = dxy + dzz
            out = np.empty(np.broadcast(num, den).shape, dtype=object)
            num_b, den_b = np.broadcast_arrays(num, den)
            for idx in np.ndindex(out.shape):
                d = den_b[idx]
                out[idx] = Fraction(num_b[idx]) / d if d != 0 else Fraction(0)
            return out
    else:
        def fn(dxy, dxz, dzy, dzz):
            den = dxz + dzy
            num = dxy + dzz
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    return fn


def _require_prereqs(sw: _Sweep):
    for rep in _check_all(sw, 1)[:3]:
        if not rep.passed:
            raise AxiomPrereqFailed(f"{rep.axiom_id} fails", report=rep.to_dict())


def minimal_coefficient(space: Space, plan: SamplePlan = DEFAULT_PLAN) -> CoefficientEstimate:
    """Supremum over evaluated triples of (d(x,y) + d(z,z)) / (d(x,z) + d(z,y)), at least 1."""
    sw = _Sweep(space, plan)
    _require_prereqs(sw)
    worst, wit, _ = sw.triple_max(_ratio_fn(space.exact))
    worst = _pyval(worst)
    one = Fraction(1) if space.exact else 1.0
    value = worst if worst > one else one
    return CoefficientEstimate(value, space.exact, sw.evidence != "exhaustive",
                               wit if worst > one else None, sw.evidence)


def coefficient_over_points(space: Space, points: Sequence) -> Any:
    """Exhaustive version of :func:`minimal_coefficient` on an explicit point list."""
    pts = list(points)
    D = distance_matrix(space, pts)
    diag = np.array([D[i, i] for i in range(len(pts))], dtype=D.dtype)
    cube = _ratio_fn(space.exact)(D[:, :, None], D[:, None, :], D.T[None, :, :], diag[None, None, :])
    worst = _pyval(max(cube.ravel()) if cube.dtype == object else cube.max())
    one = Fraction(1) if space.exact else 1.0
    return worst if worst > one else one


# ---------------------------------------------------------------------------
# Derived b-metric-like and classification
# ---------------------------------------------------------------------------


def derive_bml(space: Space, plan: SamplePlan = DEFAULT_PLAN, check: bool = True) -> Space:
    """The symmetrization D(x, y) = d(x, y) + d(y, x) on the same domain and s."""
    if check:
        failed = [r.axiom_id for r in check_axioms(space, plan=plan) if not r.passed]
        if failed:
            raise AxiomPrereqFailed(f"{space.name} fails {', '.join(failed)}", failed=failed)
    d = space.dist

    def sym(x, y):
        return d(x, y) + d(y, x)

    table = None
    if space.table is not None:
        n = len(space.table)
        table = tuple(tuple(space.table[i][j] + space.table[j][i] for j in range(n)) for i in range(n))
    return Space(f"D[{space.name}]", space.domain, sym, space.coefficient_s, space.exact,
                 space.vectorized, table, {"derived_from": space.name})


@dataclass
class Classification:
    qpbl: bool
    qpb: bool
    symmetric: bool
    bml: bool
    s: Any
    reports: dict

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "quasi-partial b-metric-like": self.qpbl,
            "quasi-partial b-metric": self.qpb,
            "symmetric": self.symmetric,
            "b-metric-like": self.bml,
            "reports": {k: v.to_dict() for k, v in self.reports.items()},
        }


def classify(space: Space, plan: SamplePlan = DEFAULT_PLAN) -> Classification:
    """Which members of the b-metric-like family the space belongs to at its s."""
    axioms = check_axioms(space, plan=plan)
    qpb1 = check_qpb1(space, plan)
    sym = is_symmetric(space, plan)
    bml = check_bml(space, plan=plan)
    reports = {r.axiom_id: r for r in axioms + [qpb1, sym] + bml}
    qpbl = all(r.passed for r in axioms)
    qpb = qpb1.passed and all(r.passed for r in axioms[1:])
    return Classification(qpbl, qpb, sym.passed, all(r.passed for r in bml), space.coefficient_s, reports)


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------


def space_from_json(doc: dict) -> Space:
    """Build a finite space from ``{"name", "points", "matrix", "s"}``."""
    try:
        name = doc.get("name", "unnamed")
        points = doc["points"]
        matrix = doc["matrix"]
        s = doc.get("s", 1)
    except (KeyError, AttributeError) as exc:
        raise SpaceFileError(f"missing field: {exc}") from exc
    if not isinstance(points, list) or not isinstance(matrix, list):
        raise SpaceFileError("points and matrix must be lists")
    try:
        return Space.from_table(name, points, matrix, s)
    except TypeError as exc:
        raise SpaceFileError(str(exc)) from exc


def space_to_json(space: Space) -> dict:
    if space.table is None:
        raise SpaceFileError(f"{space.name} is not a finite table")
    return to_jsonable({
        "name": space.name,
        "points": list(space.domain.points),
        "matrix": [list(r) for r in space.table],
        "s": space.coefficient_s,
    })


def load_space_file(path) -> Space:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpaceFileError(f"cannot read {path}: {exc}") from exc
    return space_from_json(doc)


def save_space_file(space: Space, path) -> None:
    Path(path).write_text(json.dumps(space_to_json(space), indent=2) + "\n")

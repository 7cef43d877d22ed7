"""Open balls, the induced topology on finite spaces, and separation axioms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable

import numpy as np

from .core import (
    DEFAULT_PLAN,
    FiniteDomain,
    SamplePlan,
    Space,
    _label_key,
    derive_bml,
    sample_points,
)
from .errors import ContainmentFailed, InfiniteDomain, NonpositiveRadius, NotInBall, PointOutsideDomain


@dataclass(frozen=True)
class Ball:
    """B(x0; eps) = {y : d(x0, y) < d(x0, x0) + eps and d(y, x0) < d(x0, x0) + eps}."""

    space: Space = field(repr=False)
    center: Any
    radius: Any

    @property
    def bound(self):
        return self.space.dist(self.center, self.center) + self.radius

    def membership(self, y) -> bool:
        # strict inequalities, no tolerance
        b = self.bound
        d = self.space.dist
        return bool(d(self.center, y) < b and d(y, self.center) < b)

    __contains__ = membership

    @property
    def explicit_set(self) -> frozenset | None:
        if not isinstance(self.space.domain, FiniteDomain):
            return None
        return frozenset(p for p in self.space.domain.points if self.membership(p))

    def members(self, points) -> np.ndarray:
        """Vectorized membership over an array of points."""
        pts = list(points)
        if self.space.vectorized:
            arr = np.asarray(pts, dtype=float)
            b = self.bound
            fwd = np.asarray(self.space.dist(np.full_like(arr, self.center), arr))
            bwd = np.asarray(self.space.dist(arr, np.full_like(arr, self.center)))
            return (fwd < b) & (bwd < b)
        return np.array([self.membership(p) for p in pts], dtype=bool)


def _radius(space: Space, eps):
    if space.exact and isinstance(eps, (int, Fraction)):
        return Fraction(eps)
    return eps


def ball(space: Space, x0, eps) -> Ball:
    if not space.domain.contains(x0):
        raise PointOutsideDomain(f"{x0!r} is not in the domain of {space.name}", point=x0)
    if not eps > 0:
        raise NonpositiveRadius(f"radius must be positive, got {eps}")
    return Ball(space, x0, _radius(space, eps))


# ---------------------------------------------------------------------------
# Inner radius
# ---------------------------------------------------------------------------

ITERATION_CAP = 10**6


def _least_index(predicate: Callable[[int], bool]) -> int | None:
    for n in range(1, ITERATION_CAP + 1):
        if predicate(n):
            return n
    return None


def _case_delta(space: Space, x, eps, y):
    d = space.dist
    s = space.coefficient_s
    a, b, c, e = d(x, x), d(x, y), d(y, x), d(y, y)
    if y == x:
        return eps, "center", None
    if a == b == e:
        if s == 1:
            return eps, "case1-s1", None
        m = _least_index(lambda n: a > eps / (2 * s ** (n + 1) * (2 * s - 1)))
        if m is None:
            # the defining set is empty when d(x, x) = 0
            return eps / (2 * s), "case1-degenerate", None
        return eps / (2 * s ** (m + 1)), "case1", m
    # strict case 2 is d(x,x) < d(y,x); the boundary d(x,x) = d(y,x) is routed here too
    case = "case2" if a < c else "case2-boundary"
    if s == 1:
        gap = b + c - a
        p = _least_index(lambda n: gap > eps / 2 ** (n + 2))
        if p is None:
            return eps / 2, case + "-degenerate", None
        return eps / 2 ** (p + 1), case + "-s1", p
    gap = b + c - a / s
    r = _least_index(lambda n: gap > eps / (2 * s ** (n + 2)))
    if r is None:
        return eps / (2 * s), case + "-degenerate", None
    return eps / (2 * s ** (r + 1)), case, r


MAX_HALVINGS = 64


@dataclass
class InnerRadius:
    """The inner radius, the case-analysis value it started from, and how it was verified.

    ``halvings`` counts how often the case-analysis radius had to be halved
    before containment held on the evaluation set (0 when it held as is).
    """

    delta: Any
    case_delta: Any
    case: str
    index: int | None
    halvings: int
    evidence: str
    checked: int

    def to_dict(self) -> dict:
        return {"delta": self.delta, "delta_float": float(self.delta), "case_delta": self.case_delta,
                "case": self.case, "index": self.index, "halvings": self.halvings,
                "evidence": self.evidence, "checked": self.checked}


EDGE_POINTS = 1001


def _edge_points(space: Space, b: Ball, pts: list) -> list:
    """Dense points across each gap where membership in ``b`` flips between sorted samples.

    A sparse sample can step over a thin sliver of B(y; delta) that leaves the
    outer ball; refining every membership edge closes that gap on 1-D domains.
    """
    if not space.vectorized:
        return []
    arr = np.unique(np.asarray(pts, dtype=float))
    inside = b.members(arr)
    flips = np.nonzero(inside[1:] != inside[:-1])[0]
    extra = [np.linspace(arr[i], arr[i + 1], EDGE_POINTS) for i in flips]
    return [float(v) for v in np.concatenate(extra)] if extra else []


def inner_delta_details(space: Space, x, eps, y, plan: SamplePlan = DEFAULT_PLAN) -> InnerRadius:
    outer = ball(space, x, eps)
    if not outer.membership(y):
        raise NotInBall(f"{y!r} is not in B({x!r}; {eps})", center=x, radius=eps, point=y)
    case_delta, case, index = _case_delta(space, x, outer.radius, y)
    pts, evidence = sample_points(space.domain, plan)
    pts = list(pts) + [x, y]
    delta = case_delta
    for halvings in range(MAX_HALVINGS + 1):
        inner = ball(space, y, delta)
        check = pts + _edge_points(space, inner, pts)
        escaped = inner.members(check) & ~outer.members(check)
        if not escaped.any():
            return InnerRadius(delta, case_delta, case, index, halvings, evidence, len(check))
        bad = check[int(np.argmax(escaped))]
        delta = delta / 2
    raise ContainmentFailed(
        f"no radius down to {delta} keeps B({y!r}; .) inside B({x!r}; {eps}); escapes at {bad!r}",
        case=case, delta=case_delta, point=bad,
    )


def inner_delta(space: Space, x, eps, y, plan: SamplePlan = DEFAULT_PLAN):
    """A radius delta with B(y; delta) inside B(x; eps), verified on the evaluation set."""
    return inner_delta_details(space, x, eps, y, plan).delta


# ---------------------------------------------------------------------------
# Finite topology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteTopology:
    ground_set: tuple
    open_sets: frozenset

    def is_valid(self) -> bool:
        ground = frozenset(self.ground_set)
        opens = self.open_sets
        if frozenset() not in opens or ground not in opens:
            return False
        # on a finite family pairwise closure gives arbitrary unions and finite intersections
        return all(a | b in opens and a & b in opens for a, b in combinations(opens, 2))

    def sorted_sets(self) -> list[list]:
        sets = [sorted(s, key=_label_key) for s in self.open_sets]
        return sorted(sets, key=lambda s: (len(s), [_label_key(p) for p in s]))

    def to_dict(self) -> dict:
        return {"ground_set": sorted(self.ground_set, key=_label_key), "open_sets": self.sorted_sets()}


def _finite_points(space: Space) -> tuple:
    if not isinstance(space.domain, FiniteDomain):
        raise InfiniteDomain(f"{space.name} does not have a finite domain")
    return space.domain.points


def all_balls(space: Space) -> set[frozenset]:
    """Every distinct ball of a finite space.

    For a fixed center the ball is {y : t(y) < eps} with
    t(y) = max(d(x,y), d(y,x)) - d(x,x), so one radius just above each
    threshold, and one above the largest, enumerates them all.
    """
    points = _finite_points(space)
    d = space.dist
    balls = set()
    for x in points:
        thresholds = sorted({max(d(x, y), d(y, x)) - d(x, x) for y in points})
        radii = [(lo + hi) / 2 for lo, hi in zip(thresholds, thresholds[1:])]
        radii.append(thresholds[-1] + 1)
        if thresholds[0] > 0:
            radii.append(thresholds[0] / 2)
        for eps in radii:
            if eps > 0:
                balls.add(ball(space, x, eps).explicit_set)
    return balls


def enumerate_topology(space: Space) -> FiniteTopology:
    """The topology generated by all balls: unions of finite intersections."""
    points = _finite_points(space)
    basis = all_balls(space)
    closed = set(basis)
    frontier = list(basis)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                m = a & b
                if m not in closed:
                    closed.add(m)
                    new.append(m)
        frontier = new
    opens = {frozenset()}
    for b in closed:
        opens |= {o | b for o in opens}
    opens.add(frozenset(points))
    return FiniteTopology(tuple(points), frozenset(opens))


def basis_witness(space: Space):
    """First pair of balls whose intersection is not a union of balls, or None."""
    balls = all_balls(space)
    for a, b in combinations(sorted(balls, key=lambda s: sorted(map(_label_key, s))), 2):
        inter = a & b
        cover = frozenset().union(*(c for c in balls if c <= inter)) if inter else frozenset()
        if cover != inter:
            return a, b
    return None


SEPARATION_CLASSES = ("not-T0", "T0-only", "T1-only", "T2")


@dataclass
class Separation:
    cls: str
    witness: tuple | None

    def to_dict(self) -> dict:
        return {"class": self.cls, "witness": None if self.witness is None else list(self.witness)}


def separation_class(top: FiniteTopology) -> Separation:
    """Strongest of T0/T1/T2 satisfied; the witness is the first pair failing the next level."""
    pts = sorted(top.ground_set, key=_label_key)
    opens = list(top.open_sets)

    def has(x, y):
        return any(x in u and y not in u for u in opens)

    pairs = list(combinations(pts, 2))
    for x, y in pairs:
        if not (has(x, y) or has(y, x)):
            return Separation("not-T0", (x, y))
    for x, y in pairs:
        if not (has(x, y) and has(y, x)):
            return Separation("T0-only", (x, y))
    for x, y in pairs:
        if not any(x in u and y in v and not (u & v) for u in opens for v in opens):
            return Separation("T1-only", (x, y))
    return Separation("T2", None)


# ---------------------------------------------------------------------------
# D-ball sandwich
# ---------------------------------------------------------------------------


@dataclass
class SandwichReport:
    center: Any
    eps: Any
    delta: Any
    inner_ok: bool
    outer_ok: bool
    counterexample: Any
    evidence: str
    checked: int

    @property
    def passed(self) -> bool:
        return self.inner_ok and self.outer_ok

    def to_dict(self) -> dict:
        return {"center": self.center, "eps": self.eps, "delta": self.delta, "passed": self.passed,
                "inner_ok": self.inner_ok, "outer_ok": self.outer_ok,
                "counterexample": self.counterexample, "evidence": self.evidence, "checked": self.checked}


def dball_sandwich_check(space: Space, x, eps, plan: SamplePlan = DEFAULT_PLAN) -> SandwichReport:
    """Check B(x; eps/2) <= B_D(x; eps) <= B(x; s(eps + 2 d(x,x))) pointwise.

    B_D(x; eps) = {y : |D(x, y) - D(x, x)| < eps} for D the symmetrization.
    """
    eps = _radius(space, eps)
    D = derive_bml(space, check=False)
    delta = space.coefficient_s * (eps + 2 * space.dist(x, x))
    small = ball(space, x, eps / 2)
    large = ball(space, x, delta)
    pts, evidence = sample_points(space.domain, plan)
    pts = list(pts) + [x]
    dxx = D.dist(x, x)
    in_small = small.members(pts)
    in_large = large.members(pts)
    if space.vectorized:
        arr = np.asarray(pts, dtype=float)
        in_d = np.abs(np.asarray(D.dist(np.full_like(arr, x), arr)) - dxx) < eps
    else:
        in_d = np.array([abs(D.dist(x, y) - dxx) < eps for y in pts], dtype=bool)
    bad_inner = in_small & ~in_d
    bad_outer = in_d & ~in_large
    counter = None
    for bad in (bad_inner, bad_outer):
        if bad.any():
            counter = pts[int(np.argmax(bad))]
            break
    return SandwichReport(x, eps, delta, not bad_inner.any(), not bad_outer.any(), counter, evidence, len(pts))

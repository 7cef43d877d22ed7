"""Convergence and Cauchy diagnostics for sequences, evaluated on finite tails.

Limits are estimated on the tail window n in {N - k, ..., N} with k = N // 10.
A double limit lim_{n,m} d(x_n, x_m) is taken to exist when every pair in
the window lies within ``tol`` of every other. None of this proves
completeness of a space; it checks one sequence at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .core import DEFAULT_PLAN, SamplePlan, Space, derive_bml, distance_matrix, eval as qeval, sample_points
from .errors import BadParams, HypothesisNotMet, PointOutsideDomain


@dataclass(frozen=True)
class SequenceSpec:
    generator: Callable[[int], Any]
    horizon: int
    name: str = "sequence"

    def __post_init__(self):
        if self.horizon < 1:
            raise BadParams("horizon must be positive")

    def terms(self, start: int, stop: int | None = None) -> list:
        stop = self.horizon if stop is None else stop
        return [self.generator(n) for n in range(start, stop + 1)]

    def tail(self) -> list:
        k = max(self.horizon // 10, 1)
        return self.terms(self.horizon - k)


def constant(p, horizon: int = 10_000) -> SequenceSpec:
    return SequenceSpec(lambda n: p, horizon, f"const:{p}")


def reciprocal(horizon: int = 10_000) -> SequenceSpec:
    return SequenceSpec(lambda n: 1.0 / n, horizon, "recip")


def alternating(p, q, horizon: int = 10_000) -> SequenceSpec:
    return SequenceSpec(lambda n: p if n % 2 else q, horizon, f"alt:{p}:{q}")


def from_list(points, name: str = "list") -> SequenceSpec:
    """A finite sequence indexed from 0; the horizon is its last index."""
    pts = list(points)
    return SequenceSpec(lambda n: pts[n], len(pts) - 1, name)


def _check_domain(space: Space, points):
    for p in points:
        if not space.domain.contains(p):
            raise PointOutsideDomain(f"{p!r} is not in the domain of {space.name}", point=p)


def _row(space: Space, xs, y, forward: bool) -> np.ndarray:
    """d(x, y) (forward) or d(y, x) over a list of xs."""
    if space.vectorized:
        arr = np.asarray(xs, dtype=float)
        other = np.full_like(arr, float(y))
        return np.asarray(space.dist(arr, other) if forward else space.dist(other, arr), dtype=float)
    return np.array([float(space.dist(x, y) if forward else space.dist(y, x)) for x in xs])


def _unique(points: list) -> list:
    seen = {}
    for p in points:
        seen.setdefault(p, None)
    return list(seen)


# ---------------------------------------------------------------------------


@dataclass
class LimitProfile:
    target: Any
    forward_tail: float
    backward_tail: float
    self_distance: float
    converged: bool
    tol: float
    forward_spread: float
    backward_spread: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def limit_profile(space: Space, seq: SequenceSpec, x, tol: float = 1e-6) -> LimitProfile:
    """Does x_n -> x, i.e. d(x_n, x) -> d(x, x) and d(x, x_n) -> d(x, x)?"""
    if seq.horizon < 10:
        raise BadParams("limit_profile needs a horizon of at least 10")
    if not space.domain.contains(x):
        raise PointOutsideDomain(f"{x!r} is not in the domain of {space.name}", point=x)
    tail = seq.tail()
    _check_domain(space, tail)
    fwd = _row(space, tail, x, forward=True)
    bwd = _row(space, tail, x, forward=False)
    self_d = float(qeval(space, x, x))
    f_dev = float(np.max(np.abs(fwd - self_d)))
    b_dev = float(np.max(np.abs(bwd - self_d)))
    return LimitProfile(x, float(fwd[-1]), float(bwd[-1]), self_d, f_dev <= tol and b_dev <= tol, tol,
                        f_dev, b_dev)


def limit_targets(space: Space, seq: SequenceSpec, tol: float = 1e-6, plan: SamplePlan = DEFAULT_PLAN) -> list:
    """Every evaluated point the sequence converges to. Limits need not be unique."""
    pts, _ = sample_points(space.domain, plan)
    pts = [p.item() if hasattr(p, "item") else p for p in pts]
    return [x for x in pts if limit_profile(space, seq, x, tol).converged]


@dataclass
class CauchyProfile:
    qpbl_forward_limit: float
    qpbl_backward_limit: float
    forward_spread: float
    backward_spread: float
    is_cauchy: bool
    is_zero_cauchy: bool
    tol: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _window_matrix(space: Space, tail: list) -> np.ndarray:
    """d over every ordered pair of the tail window (deduplicated points suffice)."""
    pts = _unique(tail)
    if space.vectorized:
        return distance_matrix(space, pts)
    return np.array(distance_matrix(space, pts), dtype=float)


def cauchy_profile(space: Space, seq: SequenceSpec, tol: float = 1e-6) -> CauchyProfile:
    """Estimate both directed double limits over the tail window."""
    if seq.horizon < 10:
        raise BadParams("cauchy_profile needs a horizon of at least 10")
    tail = seq.tail()
    _check_domain(space, tail)
    M = _window_matrix(space, tail)
    # the window covers every ordered pair, so both directed spreads are the spread of M;
    # the limits are read per direction at the window's last pair
    lo, hi = float(M.min()), float(M.max())
    spread = hi - lo
    last, prev = tail[-1], tail[-2]
    fwd = float(space.dist(prev, last))
    bwd = float(space.dist(last, prev))
    is_cauchy = spread <= tol
    zero = is_cauchy and hi <= tol
    return CauchyProfile(fwd, bwd, spread, spread, is_cauchy, zero, tol)


@dataclass
class EquivalenceReport:
    qpbl: CauchyProfile
    bml: CauchyProfile

    @property
    def passed(self) -> bool:
        return self.qpbl.is_cauchy == self.bml.is_cauchy

    def to_dict(self) -> dict:
        return {"passed": self.passed, "qpbl": self.qpbl.to_dict(), "bml": self.bml.to_dict()}


def cauchy_equivalence_check(space: Space, seq: SequenceSpec, tol: float = 1e-6) -> EquivalenceReport:
    """Cauchy verdicts in the space and in its symmetrization must agree."""
    D = derive_bml(space, check=False)
    return EquivalenceReport(cauchy_profile(space, seq, tol), cauchy_profile(D, seq, 2 * tol))


@dataclass
class SandwichCheck:
    y: Any
    tail_limit: float
    lower: float
    upper: float
    holds: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class LimitSandwichReport:
    x: Any
    checks: list
    candidates: list
    unique: bool
    tol: float

    @property
    def passed(self) -> bool:
        return self.unique and all(c.holds for c in self.checks)

    def to_dict(self) -> dict:
        return {"x": self.x, "passed": self.passed, "unique": self.unique, "tol": self.tol,
                "checks": [c.to_dict() for c in self.checks], "candidates": self.candidates}


def limit_sandwich_check(space: Space, seq: SequenceSpec, x, ys, tol: float = 1e-6,
                         plan: SamplePlan = DEFAULT_PLAN) -> LimitSandwichReport:
    """Given d(x_n, x) -> 0 and d(x, x_n) -> 0, check d(x,y)/s <= lim d(x_n, y) <= s d(x,y).

    Uniqueness: every other evaluated point z meeting the same zero-limit test
    must be indistinguishable from x, d(x,z) and d(z,x) both <= 2 s tol, which
    is what QPbl4 forces through the tail.
    """
    if seq.horizon < 10:
        raise BadParams("limit_sandwich_check needs a horizon of at least 10")
    tail = seq.tail()
    _check_domain(space, tail)
    fwd = _row(space, tail, x, forward=True)
    bwd = _row(space, tail, x, forward=False)
    if not (np.max(fwd) <= tol and np.max(bwd) <= tol):
        raise HypothesisNotMet(
            f"d(x_n, {x!r}) and d({x!r}, x_n) do not tend to 0 within {tol}",
            forward_tail=float(fwd[-1]), backward_tail=float(bwd[-1]),
        )
    s = float(space.coefficient_s)
    checks = []
    for y in ys:
        if not space.domain.contains(y):
            raise PointOutsideDomain(f"{y!r} is not in the domain of {space.name}", point=y)
        limit = float(space.dist(tail[-1], y))
        dxy = float(space.dist(x, y))
        lower, upper = dxy / s, s * dxy
        checks.append(SandwichCheck(y, limit, lower, upper, lower - tol <= limit <= upper + tol))
    pts, _ = sample_points(space.domain, plan)
    candidates, unique = [], True
    last = tail[-1]
    for z in list(pts):
        if z == x:
            continue
        if float(space.dist(last, z)) <= tol and float(space.dist(z, last)) <= tol:
            candidates.append(z)
            if max(float(space.dist(x, z)), float(space.dist(z, x))) > 2 * s * tol:
                unique = False
    return LimitSandwichReport(x, checks, candidates, unique, tol)


def battery(space: Space, horizon: int = 1000) -> list[SequenceSpec]:
    """Six standard sequences for a space: two constants, 1/n-like, two alternations, a drift."""
    pts, _ = sample_points(space.domain, SamplePlan(grid_points_per_axis=11, random_points=0))
    pts = [p.item() if hasattr(p, "item") else p for p in pts]
    a, b = pts[0], pts[-1]
    mid = pts[len(pts) // 2]
    if space.vectorized:
        lo = float(a)
        width = float(b) - lo
        drift = SequenceSpec(lambda n: lo + width / n, horizon, "recip")
        slow = SequenceSpec(lambda n: lo + width / (n * n), horizon, "recip2")
    else:
        drift = SequenceSpec(lambda n: pts[min(n, len(pts) - 1)] if n < 5 else a, horizon, "eventually-const")
        slow = SequenceSpec(lambda n: pts[n % len(pts)], horizon, "cycle")
    return [
        constant(a, horizon),
        constant(mid, horizon),
        drift,
        alternating(a, b, horizon),
        alternating(mid, b, horizon),
        slow,
    ]

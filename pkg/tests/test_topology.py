import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from qpbl.catalog import make_space
from qpbl.core import SamplePlan, Space
from qpbl.errors import InfiniteDomain, NonpositiveRadius, NotInBall, PointOutsideDomain
from qpbl.topology import (
    FiniteTopology,
    all_balls,
    ball,
    basis_witness,
    dball_sandwich_check,
    enumerate_topology,
    inner_delta,
    inner_delta_details,
    separation_class,
)

FINITE = ["sec2-counterexample", "remark1", "ex5.10"]
INTERVAL = ["ex2.2", "ex2.3", "ex2.4", "ex2.5", "ex3.9", "ex3.10"]


def test_ex39_boundary():
    b = ball(make_space("ex2.3"), 0.0, 1.0)
    assert b.membership(0.49) and b.membership(0.499999)
    assert not b.membership(0.5)


def test_ex310_boundary():
    b = ball(make_space("ex2.2"), 0.0, 0.5)
    assert b.membership(0.707) and b.membership(0.70710)
    assert not b.membership(0.70711) and not b.membership(0.7072)
    assert 0.70710 < 1 / math.sqrt(2) < 0.70711


def test_center_always_member():
    for sid in FINITE + INTERVAL:
        sp = make_space(sid)
        x = 1 if sp.exact else 0.5
        assert ball(sp, x, Fraction(1, 1000) if sp.exact else 1e-3).membership(x)


def test_ball_errors():
    sp = make_space("ex2.2")
    with pytest.raises(NonpositiveRadius):
        ball(sp, 0.0, 0)
    with pytest.raises(PointOutsideDomain):
        ball(sp, 2.0, 1.0)


def test_explicit_set_matches_membership():
    for sid in FINITE:
        sp = make_space(sid)
        for x in sp.domain.points:
            for eps in (Fraction(1, 3), 1, 2, 5):
                b = ball(sp, x, eps)
                assert b.explicit_set == {y for y in sp.domain.points if b.membership(y)}


def _oracle_escape(space, x, eps, y, delta, pts):
    """Points in B(y; delta) that are not in B(x; eps), by the definition."""
    d = space.dist
    bx = d(x, x) + eps
    by = d(y, y) + delta
    return [z for z in pts if d(y, z) < by and d(z, y) < by and not (d(x, z) < bx and d(z, x) < bx)]


def test_inner_delta_y_equals_x():
    assert inner_delta(make_space("ex2.2"), 0.3, 0.5, 0.3) == 0.5


def test_inner_delta_remark1():
    sp = make_space("remark1")
    delta = inner_delta(sp, 0, 2, 1)
    assert delta > 0
    assert ball(sp, 1, delta).explicit_set <= ball(sp, 0, 2).explicit_set == {0, 1, 2}


def test_inner_delta_ex22_grid_oracle():
    sp = make_space("ex2.2")
    delta = inner_delta(sp, 0.0, 0.5, 0.5)
    grid = np.linspace(0, 1, 10_001)
    assert not _oracle_escape(sp, 0.0, 0.5, 0.5, delta, grid)


def test_inner_delta_not_in_ball():
    with pytest.raises(NotInBall):
        inner_delta(make_space("ex2.3"), 0.0, 1.0, 0.6)


def test_inner_delta_reports_halvings():
    info = inner_delta_details(make_space("ex2.3"), 0.0, 1.0, 0.45)
    assert info.delta == info.case_delta / 2 ** info.halvings
    assert info.halvings >= 1


@pytest.mark.parametrize("sid", FINITE + INTERVAL + ["ex3.14"])
def test_inner_delta_containment_50_triples(sid):
    sp = make_space(sid)
    rng = np.random.default_rng(11)
    plan = SamplePlan(grid_points_per_axis=51, random_points=150)
    if sp.exact:
        pts = list(sp.domain.points) if hasattr(sp.domain, "points") else list(sp.domain.enumerate())
    else:
        hi = min(sp.domain.upper, 10.0)
        pts = list(np.linspace(0, hi, 501))
    done = 0
    while done < 50:
        x = pts[rng.integers(len(pts))]
        eps = Fraction(int(rng.integers(1, 40)), 8) if sp.exact else float(rng.uniform(0.05, 3))
        b = ball(sp, x, eps)
        inside = [p for p in pts if b.membership(p)]
        y = inside[rng.integers(len(inside))]
        delta = inner_delta(sp, x, eps, y, plan)
        assert delta > 0
        assert not _oracle_escape(sp, x, eps, y, delta, pts)
        done += 1


def test_remark1_topology():
    top = enumerate_topology(make_space("remark1"))
    assert top.sorted_sets() == [[], [0], [0, 1, 2]]
    assert top.is_valid()
    sep = separation_class(top)
    assert sep.cls == "not-T0" and sep.witness == (1, 2)


def test_one_point_topology():
    sp = Space.from_table("pt", ["p"], [[0]], 1)
    assert enumerate_topology(sp).sorted_sets() == [[], ["p"]]


def _closure_oracle(top):
    opens = top.open_sets
    for r in range(2, len(opens) + 1):
        for fam in combinations(opens, r):
            if frozenset().union(*fam) not in opens:
                return False
    return all(a & b in opens for a, b in combinations(opens, 2))


@pytest.mark.parametrize("sid", FINITE)
def test_topology_closed(sid):
    top = enumerate_topology(make_space(sid))
    assert top.is_valid()
    assert _closure_oracle(top)
    assert frozenset() in top.open_sets and frozenset(top.ground_set) in top.open_sets


@pytest.mark.parametrize("sid", FINITE)
def test_basis_property(sid):
    assert basis_witness(make_space(sid)) is None


@pytest.mark.parametrize("sid", FINITE)
def test_topology_permutation_invariant(sid):
    sp = make_space(sid)
    pts = list(sp.domain.points)
    perm = pts[::-1]
    idx = {p: i for i, p in enumerate(pts)}
    matrix = [[sp.table[idx[a]][idx[b]] for b in perm] for a in perm]
    other = Space.from_table(sid, perm, matrix, sp.coefficient_s)
    assert enumerate_topology(other).open_sets == enumerate_topology(sp).open_sets


def test_balls_enumerated_completely():
    # brute force over a dense radius grid finds no ball the threshold method missed
    sp = make_space("ex5.10")
    found = all_balls(sp)
    for x in sp.domain.points:
        for k in range(1, 200):
            assert ball(sp, x, Fraction(k, 16)).explicit_set in found


def test_infinite_domain_rejected():
    with pytest.raises(InfiniteDomain):
        enumerate_topology(make_space("ex2.2"))


def test_separation_classes():
    t0 = FiniteTopology(("a", "b"), frozenset({frozenset(), frozenset({"a"}), frozenset({"a", "b"})}))
    assert separation_class(t0).cls == "T0-only"
    discrete = FiniteTopology(("a", "b"), frozenset({frozenset(), frozenset({"a"}), frozenset({"b"}),
                                                     frozenset({"a", "b"})}))
    assert separation_class(discrete).cls == "T2"
    # on a finite set T1 forces every singleton to be open, hence discrete and T2
    for sid in FINITE:
        assert separation_class(enumerate_topology(make_space(sid))).cls != "T1-only"
    assert separation_class(enumerate_topology(make_space("sec2-counterexample"))).cls == "T2"


@pytest.mark.parametrize("sid", FINITE + INTERVAL + ["ex3.14"])
def test_sandwich_20_combinations(sid):
    sp = make_space(sid)
    rng = np.random.default_rng(5)
    plan = SamplePlan(grid_points_per_axis=101, random_points=200)
    if sp.exact:
        pts = list(sp.domain.points) if hasattr(sp.domain, "points") else list(sp.domain.enumerate())
    else:
        pts = list(np.linspace(0, min(sp.domain.upper, 10.0), 101))
    for _ in range(20):
        x = pts[rng.integers(len(pts))]
        eps = Fraction(int(rng.integers(1, 40)), 8) if sp.exact else float(rng.uniform(0.05, 3))
        rep = dball_sandwich_check(sp, x, eps, plan)
        assert rep.passed, rep.to_dict()
        assert ball(sp, x, eps / 2).membership(x)


def test_sandwich_examples():
    assert dball_sandwich_check(make_space("ex2.2"), 0.0, 1.0, SamplePlan(grid_points_per_axis=1000)).passed
    rep = dball_sandwich_check(make_space("remark1"), 0, 1)
    assert rep.passed and rep.evidence == "exhaustive"

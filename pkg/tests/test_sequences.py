import pytest

from qpbl.catalog import SPACES, make_space
from qpbl.errors import BadParams, HypothesisNotMet, PointOutsideDomain
from qpbl.sequences import (
    SequenceSpec,
    alternating,
    battery,
    cauchy_equivalence_check,
    cauchy_profile,
    constant,
    limit_profile,
    limit_sandwich_check,
    limit_targets,
    reciprocal,
)


def test_remark1_constant_has_two_limits():
    sp = make_space("remark1")
    seq = constant(1, 1000)
    assert limit_profile(sp, seq, 1, 1e-12).converged
    assert limit_profile(sp, seq, 2, 1e-12).converged
    assert not limit_profile(sp, seq, 0, 1e-12).converged
    assert len(limit_targets(sp, seq, 1e-12)) >= 2


def test_reciprocal_converges_to_zero():
    prof = limit_profile(make_space("ex2.2"), reciprocal(10_000), 0.0, 1e-3)
    assert prof.converged
    assert prof.forward_tail == pytest.approx(1e-8)


def test_limit_profile_errors():
    with pytest.raises(PointOutsideDomain):
        limit_profile(make_space("ex2.2"), reciprocal(100), 3.0)
    with pytest.raises(BadParams):
        limit_profile(make_space("ex2.2"), reciprocal(5), 0.0)
    with pytest.raises(PointOutsideDomain):
        limit_profile(make_space("ex2.2"), SequenceSpec(lambda n: float(n), 100), 0.0)


def test_cauchy_profiles():
    p = cauchy_profile(make_space("ex2.2"), constant(0.0, 100))
    assert p.is_zero_cauchy
    p = cauchy_profile(make_space("remark1"), constant(1, 1000), 1e-12)
    assert p.is_cauchy and not p.is_zero_cauchy
    assert p.qpbl_forward_limit == p.qpbl_backward_limit == 1
    assert cauchy_profile(make_space("ex2.2"), reciprocal(10_000), 1e-3).is_zero_cauchy


def test_cauchy_equivalence_examples():
    assert cauchy_equivalence_check(make_space("ex2.2"), reciprocal(10_000), 1e-3).passed
    assert cauchy_equivalence_check(make_space("remark1"), constant(1, 1000)).passed
    rep = cauchy_equivalence_check(make_space("ex2.4"), alternating(0.0, 1.0, 1000))
    assert rep.passed and not rep.qpbl.is_cauchy and not rep.bml.is_cauchy


@pytest.mark.parametrize("sid", sorted(SPACES))
def test_cauchy_equivalence_battery(sid):
    sp = make_space(sid)
    seqs = battery(sp)
    assert len(seqs) == 6
    for seq in seqs:
        rep = cauchy_equivalence_check(sp, seq)
        assert rep.passed, (seq.name, rep.to_dict())


@pytest.mark.parametrize("sid", sorted(SPACES))
def test_constant_converges_to_itself(sid):
    sp = make_space(sid)
    for seq in battery(sp)[:2]:
        p = seq.generator(1)
        assert limit_profile(sp, seq, p, 1e-12).converged


def test_zero_cauchy_limit_has_zero_self_distance():
    sp = make_space("ex2.2")
    seq = reciprocal(10_000)
    assert cauchy_profile(sp, seq, 1e-3).is_zero_cauchy
    for x in limit_targets(sp, seq, 1e-3):
        assert sp.dist(x, x) <= 1e-3


def test_limit_sandwich_examples():
    rep = limit_sandwich_check(make_space("ex2.2"), reciprocal(10_000), 0.0, [0.5, 0.0], 1e-3)
    assert rep.passed
    c, same = rep.checks
    assert c.tail_limit == pytest.approx(0.25, abs=1e-3)
    assert (c.lower, c.upper) == (0.125, 0.5)
    assert (same.lower, same.upper) == (0.0, 0.0) and same.tail_limit == pytest.approx(0, abs=1e-3)

    rep = limit_sandwich_check(make_space("ex2.4"), reciprocal(10_000), 0.0, [1.0], 1e-3)
    c = rep.checks[0]
    assert rep.passed and c.tail_limit == pytest.approx(1.0, abs=1e-3) and c.lower == c.upper == 1.0


def test_limit_sandwich_needs_zero_limits():
    with pytest.raises(HypothesisNotMet):
        limit_sandwich_check(make_space("remark1"), constant(1, 100), 1, [0])

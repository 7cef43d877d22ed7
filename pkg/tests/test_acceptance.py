"""Acceptance criteria, one test each.

Each test records a ``CRITERION n: PASS|FAIL`` line; the lines are printed in
the pytest terminal summary (see conftest.py) and when run as a script.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np

from qpbl.catalog import MAPPINGS, SPACES, default_host, make_mapping, make_space
from qpbl.cli import run
from qpbl.core import SamplePlan, check_axioms, check_bml, derive_bml, minimal_coefficient
from qpbl.fixedpoint import (
    PSI_EX510,
    chain_bound,
    expansive_solve,
    inverse_orbit,
    linear,
    orbit,
    phi_psi_solve,
    weight_witness,
)
from qpbl.sequences import battery, cauchy_equivalence_check, constant, limit_profile
from qpbl.topology import ball, dball_sandwich_check, enumerate_topology, inner_delta, separation_class

RESULTS: list[str] = []

GRID_TOL = 1e-9          # value tolerance on grids
WEIGHT_TOL = 1e-9        # criterion 7
RESIDUAL_MAX = 1e-8      # criterion 8
INVERSE_EVALS_MAX = 200  # criterion 8
REPRODUCE_BUDGET_S = 30  # criterion 10
FINITE_TABLES = ["sec2-counterexample", "remark1", "ex5.10"]


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS.append(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    print(RESULTS[-1])
    assert ok, detail


def test_criterion_1_axioms():
    slow, failing = [], []
    for sid in SPACES:
        sp = make_space(sid)
        t = time.perf_counter()
        reports = check_axioms(sp, plan=SamplePlan(grid_points_per_axis=101, random_points=1000))
        if time.perf_counter() - t >= 1.0:
            slow.append(sid)
        if not all(r.passed for r in reports):
            failing.append(sid)
        if sp.exact and sid != "ex3.14":
            assert all(r.evidence == "exhaustive" for r in reports)
    record(1, not slow and not failing, f"{len(SPACES)} spaces, failing={failing}, over 1 s={slow}")


def test_criterion_2_minimal_coefficient():
    got = {sid: minimal_coefficient(make_space(sid)).value for sid in FINITE_TABLES}
    ex22 = minimal_coefficient(make_space("ex2.2"))
    ok = (got == {"sec2-counterexample": Fraction(1), "remark1": Fraction(1), "ex5.10": Fraction(8, 7)}
          and all(isinstance(v, Fraction) for v in got.values())
          and ex22.lower_bound and 1.9 < ex22.value <= 2.0 + GRID_TOL)
    record(2, ok, f"tables {dict((k, str(v)) for k, v in got.items())}, ex2.2 lower bound {ex22.value:.6f}")


def test_criterion_3_balls():
    b39 = ball(make_space("ex2.3"), 0.0, 1.0)
    b310 = ball(make_space("ex2.2"), 0.0, 0.5)
    got = [b39.membership(0.499999), b39.membership(0.5), b310.membership(0.70710), b310.membership(0.70711)]
    ok = got == [True, False, True, False] and 0.70710 < 1 / math.sqrt(2) < 0.70711
    record(3, ok, f"memberships {got}")


def test_criterion_4_topology():
    top = enumerate_topology(make_space("remark1"))
    sep = separation_class(top)
    ok = top.sorted_sets() == [[], [0], [0, 1, 2]] and sep.cls == "not-T0" and sep.witness == (1, 2)
    record(4, ok, f"open sets {top.sorted_sets()}, class {sep.cls}, witness {sep.witness}")


def test_criterion_5_non_unique_limits():
    sp = make_space("remark1")
    seq = constant(1, 1000)
    got = {t: limit_profile(sp, seq, t, 1e-12).converged for t in (1, 2)}
    record(5, all(got.values()), f"x_n = 1 converges to {got}")


def test_criterion_6_ex510():
    cert = phi_psi_solve(make_space("ex5.10"), make_mapping("map-ex5.10"), linear("1/2"), PSI_EX510, 2)
    table = cert.hypothesis_report[0].detail["table"]
    want = [0, Fraction(5, 8), Fraction(19, 8), Fraction(5, 8), Fraction(3, 16), Fraction(31, 16),
            Fraction(31, 16), Fraction(13, 4), Fraction(5, 8)]
    rhs = [row["rhs"] for row in table]
    ok = (rhs == want and all(isinstance(r, Fraction) or r == 0 for r in rhs)
          and all(row["holds"] for row in table) and cert.point == 0 and cert.iterations <= 3)
    record(6, ok, f"rhs {[str(r) for r in rhs]}, fixed point {cert.point} after {cert.iterations} iterations")


def test_criterion_7_weight_series():
    sp, m = make_space("ex2.2"), make_mapping("map-half")
    errs = {x: abs(weight_witness(sp, m, x, 200).series_value - 3 * x * x) for x in (0.1, 0.5, 1.0)}
    record(7, max(errs.values()) <= WEIGHT_TOL, f"|series - 3x^2| = {errs}")


def test_criterion_8_expansive():
    sp, m = default_host("map-expansive"), make_mapping("map-expansive")
    plan = SamplePlan(grid_points_per_axis=50, random_points=0)
    cert = expansive_solve(sp, m, x0=1.0, K=Fraction(9, 2), plan=plan)
    expansion = next(c for c in cert.hypothesis_report if c.name == "expansion")
    ok = (expansion.passed and expansion.detail["pairs"] == 2500 and abs(cert.point) < 1e-5
          and cert.residual_forward < RESIDUAL_MAX and cert.residual_backward < RESIDUAL_MAX
          and cert.evaluations < INVERSE_EVALS_MAX)
    record(8, ok, f"point {cert.point:.3e}, residuals {cert.residual_forward:.2e}/{cert.residual_backward:.2e}, "
                  f"{cert.evaluations} inverse evaluations")


def _points(sp):
    if sp.exact:
        return list(sp.domain.points) if hasattr(sp.domain, "points") else list(sp.domain.enumerate())
    return list(np.linspace(0, min(sp.domain.upper, 10.0), 401))


def test_criterion_9_property_suites():
    rng = np.random.default_rng(2024)
    counts = {"chain": 0, "sandwich": 0, "bml": 0, "inner": 0, "equivalence": 0}
    bad = []
    # chain bound over catalog orbits, m <= 20
    for mid in MAPPINGS:
        m, sp = make_mapping(mid), default_host(mid)
        if mid == "map-expansive":
            seqs = [orbit(m, 0.0, 20)] + [inverse_orbit(m, x, 20) for x in (0.5, 1.0, 5.0, 10.0)]
        elif mid == "map-ex5.10":
            seqs = [orbit(m, x, 20) for x in (0, 1, 2)]
        else:
            seqs = [orbit(m, x, 20) for x in (0.0, 0.25, 0.5, 1.0)]
        for seq in seqs:
            for hi in range(1, 21):
                for lo in range(hi):
                    counts["chain"] += 1
                    if not chain_bound(sp, seq, lo, hi).holds:
                        bad.append(("chain", mid, lo, hi))
    plan = SamplePlan(grid_points_per_axis=101, random_points=200)
    for sid in SPACES:
        sp = make_space(sid)
        pts = _points(sp)
        for _ in range(20):
            x = pts[rng.integers(len(pts))]
            eps = Fraction(int(rng.integers(1, 40)), 8) if sp.exact else float(rng.uniform(0.05, 3))
            counts["sandwich"] += 1
            if not dball_sandwich_check(sp, x, eps, plan).passed:
                bad.append(("sandwich", sid, x, eps))
        reports = check_bml(derive_bml(sp))
        counts["bml"] += sum(r.checked for r in reports)
        if not all(r.passed for r in reports):
            bad.append(("bml", sid))
        for _ in range(50):
            x = pts[rng.integers(len(pts))]
            eps = Fraction(int(rng.integers(1, 40)), 8) if sp.exact else float(rng.uniform(0.05, 3))
            b = ball(sp, x, eps)
            inside = [p for p in pts if b.membership(p)]
            y = inside[rng.integers(len(inside))]
            delta = inner_delta(sp, x, eps, y, plan)
            inner = ball(sp, y, delta)
            counts["inner"] += 1
            if any(inner.membership(z) and not b.membership(z) for z in pts):
                bad.append(("inner", sid, x, eps, y))
        for seq in battery(sp):
            counts["equivalence"] += 1
            if not cauchy_equivalence_check(sp, seq).passed:
                bad.append(("equivalence", sid, seq.name))
    ok = not bad and counts["chain"] >= 1000 and counts["sandwich"] == 20 * len(SPACES) \
        and counts["inner"] == 50 * len(SPACES) and counts["equivalence"] == 6 * len(SPACES)
    record(9, ok, f"cases {counts}, failures {bad[:5]}")


def test_criterion_10_reproduce_all():
    t = time.perf_counter()
    code, rep = run(["reproduce", "--all"])
    elapsed = time.perf_counter() - t
    ok = code == 0 and elapsed < REPRODUCE_BUDGET_S and rep["payload"]["count"] >= 14
    record(10, ok, f"exit {code}, {rep['payload']['count']} examples in {elapsed:.1f} s")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(((k, v) for k, v in globals().items() if k.startswith("test_criterion_")),
                           key=lambda kv: int(kv[0].split("_")[2])):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)

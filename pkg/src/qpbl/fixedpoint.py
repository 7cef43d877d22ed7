"""Fixed-point solvers with machine-checked hypotheses.

Four solvers share one shape: verify the theorem's hypotheses (exhaustively
on finite domains, on a sample grid otherwise), iterate, certify the limit,
then re-run from seeded restarts to probe uniqueness.

* :func:`phi_contraction_solve`: d(Tx, Ty) <= phi(d(x, y)) with sum s^n phi^n(t) finite.
* :func:`phi_psi_solve`: phi(d(Tx, Ty)) <= phi(d(x, y))/s - psi(d(x, y)).
* :func:`expansive_solve`: surjective expanding maps, iterated through their inverse.
* :func:`weight_witness`: the Caristi-type weight built from the orbit displacement series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .catalog import Mapping
from .core import DEFAULT_PLAN, FiniteDomain, SamplePlan, Space, as_fraction, distance_matrix, sample_points
from .errors import (
    BadParams,
    DomainEscape,
    HypothesisFailed,
    LambdaOutOfRange,
    MaxIterExceeded,
    NoInverse,
    SeriesDiverging,
)
from .sequences import SequenceSpec, from_list

PROPERTIES = frozenset({"continuous", "monotone-nondecreasing", "linear", "zero-iff-zero", "subadditive"})


# ---------------------------------------------------------------------------
# Scalar functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarFunction:
    evaluator: Callable[[Any], Any]
    declared_properties: frozenset = frozenset()
    name: str = "f"

    def __post_init__(self):
        unknown = set(self.declared_properties) - PROPERTIES
        if unknown:
            raise BadParams(f"unknown properties {sorted(unknown)}")

    def __call__(self, t):
        return self.evaluator(t)

    def iterate(self, t, n: int):
        for _ in range(n):
            t = self.evaluator(t)
        return t


def linear(slope) -> ScalarFunction:
    c = as_fraction(slope) if isinstance(slope, (str, int, Fraction)) else float(slope)
    if c < 0:
        raise BadParams("slope must be nonnegative")
    props = {"continuous", "monotone-nondecreasing", "linear", "subadditive"}
    if c > 0:
        props.add("zero-iff-zero")

    def f(t):
        return c * t if isinstance(t, Fraction) or not isinstance(c, Fraction) else float(c) * t

    return ScalarFunction(f, frozenset(props), f"linear:{slope}")


def _psi_ex510(t):
    quarter = Fraction(1, 4) if isinstance(t, Fraction) else 0.25
    return t * t * quarter if t <= 1 else quarter


PSI_EX510 = ScalarFunction(_psi_ex510, frozenset({"continuous", "monotone-nondecreasing", "zero-iff-zero"}),
                           "psi-ex5.10")


def parse_scalar(text: str) -> ScalarFunction:
    """``linear:<c>`` (alias ``lambda:<c>``) or ``psi-ex5.10``."""
    kind, _, arg = text.partition(":")
    if kind in {"linear", "lambda"} and arg:
        return linear(arg)
    if text in {"psi-ex5.10", "ex5.10-psi", "ex5.10"}:
        return PSI_EX510
    raise BadParams(f"unknown scalar function {text!r}")


# ---------------------------------------------------------------------------
# Hypothesis checks
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    evidence: str = "exhaustive"

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "evidence": self.evidence, "detail": self.detail}


def _t_grid(tmax: float, n: int = 1000) -> np.ndarray:
    return np.linspace(tmax / n, tmax, n)


def check_properties(f: ScalarFunction, tmax: float = 10.0, n: int = 1000) -> list[CheckResult]:
    """Spot-check the declared properties on an n-point grid of (0, tmax]."""
    ts = _t_grid(tmax, n)
    vals = np.array([float(f(t)) for t in ts])
    out = []
    props = f.declared_properties
    if "zero-iff-zero" in props:
        zero = float(f(0.0))
        ok = zero == 0 and bool(np.all(vals > 0))
        out.append(CheckResult(f"{f.name}:zero-iff-zero", ok, {"f(0)": zero, "min_positive": float(vals.min())},
                               "sampled"))
    if "monotone-nondecreasing" in props:
        drops = np.diff(vals)
        k = int(np.argmin(drops))
        out.append(CheckResult(f"{f.name}:monotone", bool(drops[k] >= 0),
                               {"worst_drop": float(min(drops[k], 0.0)), "at": float(ts[k])}, "sampled"))
    if "linear" in props:
        worst = 0.0
        for a in (0.5, 2.0, 3.0):
            scaled = np.array([float(f(a * t)) for t in ts])
            worst = max(worst, float(np.max(np.abs(scaled - a * vals))))
        out.append(CheckResult(f"{f.name}:linear", worst <= 1e-9 * max(1.0, float(np.max(np.abs(vals)))),
                               {"worst_residual": worst}, "sampled"))
    if "subadditive" in props:
        sums = np.array([float(f(t + u)) for t, u in zip(ts, ts[::-1])])
        excess = float(np.max(sums - (vals + vals[::-1])))
        out.append(CheckResult(f"{f.name}:subadditive", excess <= 1e-9, {"worst_excess": excess}, "sampled"))
    return out


class _Pairs:
    """Sample points with their images and the distance matrices a check needs."""

    def __init__(self, space: Space, mapping: Mapping, plan: SamplePlan):
        pts, self.evidence = sample_points(space.domain, plan)
        self.space = space
        self.points = [p.item() if hasattr(p, "item") else p for p in pts]
        self.images = [mapping.forward(p) for p in self.points]
        self.tol = Fraction(0) if space.exact else plan.tolerance
        self._cache = {}

    def d(self, left: str, right: str) -> np.ndarray:
        """Matrix M[i, j] = d(L_i, R_j) with L, R in {"x", "T"}."""
        key = (left, right)
        if key not in self._cache:
            pick = {"x": self.points, "T": self.images}
            self._cache[key] = distance_matrix(self.space, pick[left], pick[right])
        return self._cache[key]

    def diag(self, left: str, right: str) -> np.ndarray:
        M = self.d(left, right)
        return np.array([M[i, i] for i in range(len(self.points))], dtype=M.dtype)

    def worst(self, name: str, excess: np.ndarray, detail: dict | None = None) -> CheckResult:
        """excess[i, j] > tol is a violation at pair (x_i, x_j)."""
        flat = excess.ravel()
        if excess.dtype == object:
            k = max(range(len(flat)), key=lambda i: (flat[i], -i))
        else:
            k = int(np.argmax(flat))
        i, j = np.unravel_index(k, excess.shape)
        worst = flat[k]
        info = {"worst_excess": max(worst, 0 * worst), "pairs": excess.size}
        if worst > self.tol:
            info["witness"] = [self.points[i], self.points[j]]
        info.update(detail or {})
        return CheckResult(name, bool(worst <= self.tol), info, self.evidence)


def _apply(f: ScalarFunction, M: np.ndarray) -> np.ndarray:
    if M.dtype == object:
        out = np.empty(M.shape, dtype=object)
        for idx in np.ndindex(M.shape):
            out[idx] = f(M[idx])
        return out
    try:
        out = np.asarray(f(M), dtype=float)
        if out.shape == M.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda t: float(f(float(t))), otypes=[float])(M)


def series_probe(f: ScalarFunction, s: float, t: float, terms: int = 200, window: int = 50) -> CheckResult:
    """Ratio test for sum s^n f^n(t): consecutive ratios <= 1 - 1e-6 over the last ``window`` terms."""
    s = float(s)
    vals, cur = [], float(t)
    for n in range(1, terms + 1):
        cur = float(f(cur))
        vals.append(s ** n * cur)
    tail = vals[-(window + 1):]
    ratios = [b / a for a, b in zip(tail, tail[1:]) if a > 0]
    if not ratios:
        # terms reached exactly zero: the series is a finite sum
        return CheckResult(f"series@{t:g}", True, {"max_ratio": 0.0, "terms": terms}, "probe")
    worst = max(ratios)
    return CheckResult(f"series@{t:g}", worst <= 1 - 1e-6,
                       {"max_ratio": worst, "partial_sum": math.fsum(vals), "terms": terms}, "probe")


def _raise_if_failed(checks: list[CheckResult]):
    for c in checks:
        if not c.passed:
            raise HypothesisFailed(f"hypothesis {c.name} fails", check=c.name, detail=c.detail,
                                   report=[x.to_dict() for x in checks])


# ---------------------------------------------------------------------------
# Orbits and certificates
# ---------------------------------------------------------------------------


def orbit(mapping: Mapping, x0, n: int) -> SequenceSpec:
    """x_k = T^k x0 for k = 0..n."""
    if n < 1:
        raise BadParams("orbit length must be at least 1")
    pts = [x0]
    for _ in range(n):
        nxt = mapping.forward(pts[-1])
        if not mapping.domain.contains(nxt):
            raise DomainEscape(f"iterate {nxt!r} leaves the domain of {mapping.name}", point=nxt)
        pts.append(nxt)
    return from_list(pts, f"orbit:{mapping.name}:{x0}")


def inverse_orbit(mapping: Mapping, x0, n: int) -> SequenceSpec:
    """x_0 = x0, x_{k+1} = T^{-1} x_k."""
    if mapping.inverse is None:
        raise NoInverse(f"{mapping.name} has no inverse")
    pts = [x0]
    for _ in range(n):
        pts.append(mapping.inverse(pts[-1]))
    return from_list(pts, f"inverse-orbit:{mapping.name}:{x0}")


@dataclass
class FixedPointCertificate:
    point: Any
    residual_forward: Any
    residual_backward: Any
    self_distance: Any
    iterations: int
    hypothesis_report: list
    unique_among_restarts: bool
    theorem: str = ""
    evaluations: int = 0
    restarts: list = field(default_factory=list)
    tol: Any = 0
    notes: list = field(default_factory=list)
    trajectory: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "point": self.point,
            "residual_forward": self.residual_forward,
            "residual_backward": self.residual_backward,
            "self_distance": self.self_distance,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "tol": self.tol,
            "unique_among_restarts": self.unique_among_restarts,
            "restarts": self.restarts,
            "hypothesis_report": [c.to_dict() for c in self.hypothesis_report],
            "notes": self.notes,
        }


def _displacement(space: Space, a, b):
    return space.dist(a, b) + space.dist(b, a)


def _picard(space: Space, step: Callable, x0, tol, max_iter: int, domain) -> tuple:
    """Iterate x <- step(x) until the symmetric displacement d(x, x') + d(x', x) <= tol.

    Returns (point, iterations, evaluations, trajectory) where iterations
    counts accepted moves and evaluations counts calls of ``step``.
    """
    x = x0
    trajectory = [x0]
    for k in range(max_iter + 1):
        nxt = step(x)
        if not domain.contains(nxt) or not space.domain.contains(nxt):
            raise DomainEscape(f"iterate {nxt!r} leaves the domain", point=nxt, iteration=k)
        if _displacement(space, x, nxt) <= tol:
            return x, nxt, k, k + 1, trajectory
        x = nxt
        trajectory.append(x)
    raise MaxIterExceeded(f"no convergence within {max_iter} iterations", last=x)


def _restart_points(space: Space, plan: SamplePlan, count: int = 5) -> list:
    rng = plan.rng(7)
    pts, _ = sample_points(space.domain, plan)
    if isinstance(space.domain, FiniteDomain):
        return [pts[int(i)] for i in rng.integers(0, len(pts), size=count)]
    arr = np.asarray(pts, dtype=float)
    return [float(v) for v in rng.uniform(arr.min(), arr.max(), size=count)]


def _close_points(space: Space, a, b, tol) -> bool:
    if a == b:
        return True
    return max(space.dist(a, b), space.dist(b, a)) <= 10 * tol


def _certify(space: Space, mapping: Mapping, z, iterations, evaluations, checks, tol, theorem,
             restart_fn, plan, trajectory, notes) -> FixedPointCertificate:
    tz = mapping.forward(z)
    restarts = []
    for start in _restart_points(space, plan):
        try:
            restarts.append(restart_fn(start))
        except (MaxIterExceeded, DomainEscape) as exc:
            notes.append(f"restart from {start!r} failed: {exc}")
            restarts.append(None)
    unique = all(r is not None and _close_points(space, z, r, tol) for r in restarts)
    return FixedPointCertificate(
        z, space.dist(z, tz), space.dist(tz, z), space.dist(z, z), iterations, checks, unique, theorem,
        evaluations, restarts, tol, notes, trajectory,
    )


def _default_tol(space: Space, tol):
    if tol is None:
        tol = 1e-10
    return as_fraction(tol) if space.exact and not isinstance(tol, float) else tol


# ---------------------------------------------------------------------------
# Contraction solvers
# ---------------------------------------------------------------------------


def contraction_hypotheses(space: Space, mapping: Mapping, phi: ScalarFunction, x0,
                           plan: SamplePlan = DEFAULT_PLAN) -> list[CheckResult]:
    pairs = _Pairs(space, mapping, plan)
    dxy = pairs.d("x", "x")
    dT = pairs.d("T", "T")
    checks = [pairs.worst("contraction", dT - _apply(phi, dxy))]
    tmax = max(float(np.max(dxy)), 1.0)
    ts = _t_grid(tmax)
    ratio = np.array([float(phi(t)) for t in ts]) - ts
    k = int(np.argmax(ratio))
    checks.append(CheckResult("phi(t)<t", bool(ratio[k] < 0), {"worst": float(ratio[k]), "at": float(ts[k])},
                              "sampled"))
    checks.extend(check_properties(phi, tmax))
    s = float(space.coefficient_s)
    t0 = float(space.dist(x0, mapping.forward(x0)))
    for t in sorted({t0, 1.0}):
        if t > 0:
            checks.append(series_probe(phi, s, t))
    return checks


def phi_contraction_solve(space: Space, mapping: Mapping, phi: ScalarFunction, x0, tol=None,
                          max_iter: int = 100_000, plan: SamplePlan = DEFAULT_PLAN) -> FixedPointCertificate:
    """Picard iteration under d(Tx, Ty) <= phi(d(x, y)).

    Zero-completeness of the space is assumed, not checked. phi(t) < t is
    grid-checked only.
    """
    tol = _default_tol(space, tol)
    checks = contraction_hypotheses(space, mapping, phi, x0, plan)
    _raise_if_failed(checks)

    def run(start):
        return _picard(space, mapping.forward, start, tol, max_iter, mapping.domain)

    z, _, k, evals, traj = run(x0)
    notes = ["0-completeness assumed", "phi(t) < t checked on a grid only", "continuity of phi declared, not checked"]
    return _certify(space, mapping, z, k, evals, checks, tol, "phi-contraction",
                    lambda s0: run(s0)[0], plan, traj, notes)


def lambda_contraction_solve(space: Space, mapping: Mapping, lam, x0, tol=None, max_iter: int = 100_000,
                             plan: SamplePlan = DEFAULT_PLAN) -> FixedPointCertificate:
    """The linear special case phi(t) = lam t with 0 <= lam < 1/s."""
    s = space.coefficient_s
    if isinstance(lam, str):
        lam = as_fraction(lam)
    if not (0 <= float(lam) < 1 / float(s)):
        raise LambdaOutOfRange(f"need 0 <= lambda < 1/s = {1 / float(s):g}, got {lam}")
    if float(lam) == 0:
        phi = ScalarFunction(lambda t: 0 * t, frozenset({"continuous", "monotone-nondecreasing", "linear"}), "zero")
    else:
        phi = linear(lam)
    cert = phi_contraction_solve(space, mapping, phi, x0, tol, max_iter, plan)
    cert.theorem = "lambda-contraction"
    return cert


def phi_psi_hypotheses(space: Space, mapping: Mapping, phi: ScalarFunction, psi: ScalarFunction,
                       plan: SamplePlan = DEFAULT_PLAN) -> list[CheckResult]:
    pairs = _Pairs(space, mapping, plan)
    dxy = pairs.d("x", "x")
    dT = pairs.d("T", "T")
    s = space.coefficient_s
    lhs = _apply(phi, dT)
    rhs = _apply(phi, dxy) / s - _apply(psi, dxy)
    detail = {}
    if pairs.evidence == "exhaustive":
        detail["table"] = [
            {"x": pairs.points[i], "y": pairs.points[j], "lhs": lhs[i, j], "rhs": rhs[i, j],
             "holds": bool(lhs[i, j] <= rhs[i, j])}
            for i in range(len(pairs.points)) for j in range(len(pairs.points))
        ]
    checks = [pairs.worst("contraction", lhs - rhs, detail)]
    tmax = max(float(np.max(dxy)), 1.0)
    for f, need in ((phi, {"linear", "monotone-nondecreasing", "zero-iff-zero"}),
                    (psi, {"monotone-nondecreasing", "zero-iff-zero"})):
        missing = need - set(f.declared_properties)
        checks.append(CheckResult(f"{f.name}:declared", not missing, {"missing": sorted(missing)}, "declared"))
        checks.extend(check_properties(f, tmax))
    ts = _t_grid(tmax)
    excess = np.array([float(phi(psi(t))) - float(psi(t)) for t in ts])
    k = int(np.argmax(excess))
    checks.append(CheckResult("phi(psi(t))<=psi(t)", bool(excess[k] <= 1e-12),
                              {"worst": float(excess[k]), "at": float(ts[k])}, "sampled"))
    return checks


def phi_psi_solve(space: Space, mapping: Mapping, phi: ScalarFunction, psi: ScalarFunction, x0, tol=None,
                  max_iter: int = 100_000, plan: SamplePlan = DEFAULT_PLAN) -> FixedPointCertificate:
    """Picard iteration under phi(d(Tx, Ty)) <= phi(d(x, y))/s - psi(d(x, y))."""
    tol = _default_tol(space, tol)
    checks = phi_psi_hypotheses(space, mapping, phi, psi, plan)
    _raise_if_failed(checks)

    def run(start):
        return _picard(space, mapping.forward, start, tol, max_iter, mapping.domain)

    z, _, k, evals, traj = run(x0)
    return _certify(space, mapping, z, k, evals, checks, tol, "phi-psi", lambda s0: run(s0)[0], plan, traj,
                    ["0-completeness assumed"])


# ---------------------------------------------------------------------------
# Expansive maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpansiveParams:
    a1: float
    a2: float
    a3: float
    a4: float

    def derived_lambda(self, s: float) -> float:
        return (1 + self.a4 - self.a3) / (self.a1 + self.a2 + self.a4 / s)

    def checks(self, s: float) -> list[CheckResult]:
        a1, a2, a3, a4 = self.a1, self.a2, self.a3, self.a4
        lam = self.derived_lambda(s)
        rows = [
            ("a_i>0", min(a1, a2, a3, a4) > 0, {"a": [a1, a2, a3, a4]}),
            ("1+a4-a3>0", 1 + a4 - a3 > 0, {"value": 1 + a4 - a3}),
            ("s(a1+a2)+2s^2(a3-a4)+a4>2s^2", s * (a1 + a2) + 2 * s * s * (a3 - a4) + a4 > 2 * s * s,
             {"lhs": s * (a1 + a2) + 2 * s * s * (a3 - a4) + a4, "rhs": 2 * s * s}),
            ("a1+a4>=1", a1 + a4 >= 1, {"value": a1 + a4}),
            ("0<lambda<1/(2s)", 0 < lam < 1 / (2 * s), {"lambda": lam, "bound": 1 / (2 * s)}),
        ]
        return [CheckResult(name, bool(ok), detail, "parameters") for name, ok, detail in rows]


def expansion_hypotheses(space: Space, mapping: Mapping, params: ExpansiveParams | None = None, K=None,
                         plan: SamplePlan = DEFAULT_PLAN) -> list[CheckResult]:
    s = float(space.coefficient_s)
    if (params is None) == (K is None):
        raise BadParams("give exactly one of params or K")
    checks = []
    if mapping.inverse is None:
        raise NoInverse(f"{mapping.name} has no inverse")
    if K is not None:
        checks.append(CheckResult("K>2s", bool(float(K) > 2 * s), {"K": float(K), "2s": 2 * s}, "parameters"))
    else:
        checks.extend(params.checks(s))
    pairs = _Pairs(space, mapping, plan)
    sym = pairs.d("x", "x") + pairs.d("x", "x").T
    lhs = pairs.d("T", "T")
    if K is not None:
        rhs = (K if space.exact else float(K)) * sym
    else:
        fx = pairs.diag("x", "T") + pairs.diag("T", "x")
        cross = pairs.d("x", "T") + pairs.d("T", "x").T
        rhs = params.a1 * sym + params.a2 * fx[:, None] + params.a3 * fx[None, :] + params.a4 * cross
    checks.append(pairs.worst("expansion", rhs - lhs))
    if not isinstance(space.domain, FiniteDomain):
        ys = np.asarray(pairs.points, dtype=float)
        err = max(abs(mapping.forward(mapping.inverse(float(y))) - float(y)) for y in ys)
        checks.append(CheckResult("inverse-roundtrip", bool(err <= 1e-9), {"worst": err}, pairs.evidence))
    return checks


def expansive_solve(space: Space, mapping: Mapping, params: ExpansiveParams | None = None, x0=None, tol=None,
                    max_iter: int = 100_000, plan: SamplePlan = DEFAULT_PLAN, K=None) -> FixedPointCertificate:
    """Reverse Picard iteration x_{k+1} = T^{-1}(x_k) for an expanding surjection.

    Pass ``params`` for the four-coefficient form or ``K`` for
    d(Tx, Ty) >= K [d(x, y) + d(y, x)] with K > 2s.
    """
    if mapping.inverse is None:
        raise NoInverse(f"{mapping.name} has no inverse")
    tol = _default_tol(space, tol)
    checks = expansion_hypotheses(space, mapping, params, K, plan)
    _raise_if_failed(checks)

    def run(start):
        if _displacement(space, start, mapping.forward(start)) <= tol:
            return start, 0, 0, [start]
        x, nxt, k, evals, traj = _picard(space, mapping.inverse, start, tol, max_iter, mapping.domain)
        # stop rule fired on (x, T^{-1} x); T^{-1} x is the certified point
        return nxt, k + 1, evals, traj + [nxt]

    z, k, evals, traj = run(x0)
    theorem = "expansive-k" if K is not None else "expansive"
    return _certify(space, mapping, z, k, evals, checks, tol, theorem, lambda s0: run(s0)[0], plan, traj,
                    ["0-completeness assumed", "surjectivity taken from the supplied inverse"])


# ---------------------------------------------------------------------------
# Weight witness and lemma utilities
# ---------------------------------------------------------------------------


@dataclass
class WeightWitness:
    series_value: float
    tail_bound: float
    ratio: float
    phi_witness: list
    inequality_verified: bool
    terms: list

    def to_dict(self) -> dict:
        return {"series_value": self.series_value, "tail_bound": self.tail_bound, "ratio": self.ratio,
                "phi_witness": self.phi_witness[:20], "inequality_verified": self.inequality_verified}


def weight_witness(space: Space, mapping: Mapping, x0, n_terms: int = 200) -> WeightWitness:
    """Partial sums of sum_k d(T^k x0, T^{k+1} x0) and the weight they define.

    phi(T^j x0) = sum_{k >= j} d(T^k x0, T^{k+1} x0), truncated at ``n_terms``.
    Along the orbit d(x, Tx) = phi(x) - phi(Tx) by telescoping.
    """
    if n_terms < 10:
        raise BadParams("need at least 10 terms")
    pts = orbit(mapping, x0, n_terms).terms(0)
    terms = [float(space.dist(a, b)) for a, b in zip(pts, pts[1:])]
    window = [t for t in terms[-20:]]
    ratios = [b / a for a, b in zip(window, window[1:]) if a > 0]
    ratio = max(ratios) if ratios else 0.0
    if ratio >= 1:
        raise SeriesDiverging(f"displacement ratio {ratio:g} >= 1", ratio=ratio)
    tail = terms[-1] * ratio / (1 - ratio) if ratio else 0.0
    suffix = np.cumsum(np.asarray(terms[::-1]))[::-1]
    values = [float(v) for v in suffix] + [0.0]
    verified = all(t <= values[j] - values[j + 1] + 1e-12 * max(1.0, values[0]) for j, t in enumerate(terms))
    witness = [(pts[j], values[j]) for j in range(len(values))]
    return WeightWitness(math.fsum(terms), tail, ratio, witness, verified, terms)


@dataclass
class ChainBound:
    bound_forward: Any
    bound_backward: Any
    actual_forward: Any
    actual_backward: Any
    holds: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def chain_bound(space: Space, seq: SequenceSpec, n: int, m: int, tol: float = 1e-9) -> ChainBound:
    """d(x_n, x_m) <= sum_{k=n}^{m-1} s^k d(x_k, x_{k+1}), and the reversed clause."""
    if not (0 <= n < m <= seq.horizon):
        raise IndexError(f"need 0 <= n < m <= {seq.horizon}, got n={n}, m={m}")
    xs = seq.terms(n, m)
    s = space.coefficient_s
    d = space.dist
    fwd = sum(s ** (n + i) * d(xs[i], xs[i + 1]) for i in range(m - n))
    bwd = sum(s ** (n + i) * d(xs[i + 1], xs[i]) for i in range(m - n))
    af, ab = d(xs[0], xs[-1]), d(xs[-1], xs[0])
    slack = 0 if space.exact else tol
    return ChainBound(fwd, bwd, af, ab, bool(af <= fwd + slack and ab <= bwd + slack))


@dataclass
class DecayBound:
    premise_holds: bool
    bound: float
    actual: float
    holds: bool
    premise_witness: int | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def decay_bound(space: Space, seq: SequenceSpec, lam, n: int, m: int, tol: float = 1e-9) -> DecayBound:
    """Geometric decay bound (2 s lam)^n / (1 - 2 s lam) * (d(y0,y1) + d(y1,y0)) / 2 on d(y_n, y_m)."""
    s = float(space.coefficient_s)
    lam = float(lam)
    if not (0 < lam < 1 / (2 * s)):
        raise LambdaOutOfRange(f"need 0 < lambda < 1/(2s) = {1 / (2 * s):g}, got {lam}")
    if not (0 <= n < m <= seq.horizon):
        raise IndexError(f"need 0 <= n < m <= {seq.horizon}, got n={n}, m={m}")
    ys = seq.terms(0, m)
    d = lambda a, b: float(space.dist(a, b))  # noqa: E731
    witness = None
    for k in range(1, m):
        prev = d(ys[k - 1], ys[k]) + d(ys[k], ys[k - 1])
        if d(ys[k], ys[k + 1]) > lam * prev + tol or d(ys[k + 1], ys[k]) > lam * prev + tol:
            witness = k
            break
    q = 2 * s * lam
    bound = q ** n / (1 - q) * (d(ys[0], ys[1]) + d(ys[1], ys[0])) / 2
    actual = d(ys[n], ys[m])
    premise = witness is None
    return DecayBound(premise, bound, actual, premise and actual <= bound + tol, witness)

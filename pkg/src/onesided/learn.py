"""Learners: the disjunction eliminator, the reliable hinge-loss LP learner
with rounding and derandomization, the weight-capped L1 learner, the fully
reliable combiner, and sample-size planning.

The reliable fit solves, over polynomial coefficients of degree <= d and
weight <= W,

    minimize   sum over true-labeled examples of (1 - p(x_i))_+
    subject to p(x_i) <= -1 + eps   for every false-labeled example,

(the negative-side learner mirrors every role).  The weight cap is encoded
with split variables u_S >= +-c_S and sum u_S <= W, which keeps the
objective exactly the hinge sum.  Duplicate sample points are merged into
weighted rows before solving; the optimum is unchanged.

Derandomization always uses a fresh calibration sample, never training data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lp as lpmod
from .cube import LabeledSample, Disjunction, PartialHypothesis, as_bits
from .errors import InfeasibleError, InputError, ResourceLimitError, SolverError
from .poly import SparsePolynomial, monomials_upto, sparse_eval_batch

POSITIVE, NEGATIVE = "positive", "negative"

#: Calibration sample must have at least CALIBRATION_FACTOR / eps^2 examples.
CALIBRATION_FACTOR = 2.0

#: Default cap on the number of monomial features in a fit.
FEATURE_CAP = 8192


def chop(a: float) -> float:
    """Clamp to [-1, 1] (identity inside, sign outside)."""
    return -1.0 if a < -1.0 else (1.0 if a > 1.0 else float(a))


# ---------------------------------------------------------------------------
# Hypothesis and report types


@dataclass(frozen=True)
class ReliableHypothesis:
    """A polynomial with a rounding scheme.

    ``thresholded`` mode answers sgn-style by comparing H(x) = chop(p(x))
    against the calibrated threshold: the positive-side learner answers +1
    iff H(x) > t, the negative-side learner +1 iff H(x) >= t (the exact
    mirror).  ``randomized`` mode defers to :func:`randomized_round` with an
    explicit uniform draw.  ``clamp=False`` skips the chop (used by the
    agnostic learner, which thresholds the raw polynomial).
    """

    p: SparsePolynomial
    sign: str = POSITIVE
    mode: str = "thresholded"
    threshold: float | None = None
    calibration_m: int | None = None
    clamp: bool = True

    @property
    def n(self) -> int:
        return self.p.n

    def _h(self, values: np.ndarray) -> np.ndarray:
        return np.clip(values, -1.0, 1.0) if self.clamp else values

    def decide(self, x) -> int:
        if self.mode != "thresholded":
            raise InputError("randomized hypotheses need randomized_round(p, x, u)")
        v = self._h(np.array([float(self.p.eval(as_bits(x, self.n)))]))[0]
        if self.sign == POSITIVE:
            return 1 if v > self.threshold else -1
        return 1 if v >= self.threshold else -1

    def decide_batch(self, X: np.ndarray) -> np.ndarray:
        if self.mode != "thresholded":
            raise InputError("randomized hypotheses need randomized_round(p, x, u)")
        v = self._h(sparse_eval_batch(self.p, X))
        hit = v > self.threshold if self.sign == POSITIVE else v >= self.threshold
        return np.where(hit, 1, -1).astype(np.int8)

    def to_json(self) -> dict:
        from .poly import sparse_to_json

        return {
            "polynomial": sparse_to_json(self.p),
            "sign": self.sign,
            "mode": self.mode,
            "threshold": self.threshold,
            "calibration_m": self.calibration_m,
            "clamp": self.clamp,
        }


@dataclass(frozen=True)
class FitReport:
    objective_value: float
    constraints_active: int
    eps: float | None
    W: float
    d: int
    m: int
    lp_status: str


@dataclass(frozen=True)
class SamplePlan:
    m: int
    term_rademacher: float
    term_confidence: float


# ---------------------------------------------------------------------------
# The eliminator for disjunctions


def learn_disjunction_positive(s: LabeledSample) -> Disjunction:
    """Keep every literal no false-labeled example satisfies.

    Starts from the disjunction over all 2n literals and, for each example
    labeled -1, drops the literals that example satisfies.  The output
    classifies every sample negative as -1 and is maximal: re-adding any
    dropped literal fires on some sample negative.
    """
    if s.n < 1:
        raise InputError("need dimension >= 1")
    neg = s.points[s.labels == -1]
    keep: list[int] = []
    for j in range(1, s.n + 1):
        col = neg[:, j - 1] if neg.size else np.empty(0)
        if not (col == 1).any():
            keep.append(j)
        if not (col == -1).any():
            keep.append(-j)
    return Disjunction(s.n, tuple(sorted(keep, key=lambda l: (abs(l), -l))))


# ---------------------------------------------------------------------------
# LP fits


def _dedup(points: np.ndarray, labels: np.ndarray):
    """Distinct points with per-label counts (merging keeps LP optima exact)."""
    distinct, inverse = np.unique(points, axis=0, return_inverse=True)
    k = distinct.shape[0]
    pos = np.zeros(k, dtype=np.int64)
    negc = np.zeros(k, dtype=np.int64)
    np.add.at(pos, inverse[labels == 1], 1)
    np.add.at(negc, inverse[labels == -1], 1)
    return distinct, pos, negc


def _features(X: np.ndarray, monos) -> np.ndarray:
    phi = np.ones((X.shape[0], len(monos)), dtype=np.float64)
    for j, mono in enumerate(monos):
        if mono:
            phi[:, j] = X[:, [v - 1 for v in mono]].prod(axis=1)
    return phi


def _weight_rows(nmono: int, nvars: int, W: float) -> list[lpmod.Constraint]:
    rows = []
    for j in range(nmono):
        r1 = np.zeros(nvars)
        r1[j] = 1.0
        r1[nmono + j] = -1.0
        rows.append(lpmod.Constraint(r1, lpmod.LE, 0.0))  # c_S - u_S <= 0
        r2 = np.zeros(nvars)
        r2[j] = -1.0
        r2[nmono + j] = -1.0
        rows.append(lpmod.Constraint(r2, lpmod.LE, 0.0))  # -c_S - u_S <= 0
    cap = np.zeros(nvars)
    cap[nmono:2 * nmono] = 1.0
    rows.append(lpmod.Constraint(cap, lpmod.LE, float(W)))  # sum u_S <= W
    return rows


def _extract_poly(n: int, monos, coeffs: np.ndarray) -> SparsePolynomial:
    return SparsePolynomial(n, {m: float(c) for m, c in zip(monos, coeffs) if abs(c) > 1e-12})


def reliable_fit(
    s: LabeledSample,
    d: int,
    W: float,
    eps: float,
    sign: str = POSITIVE,
    feature_cap: int = FEATURE_CAP,
) -> tuple[SparsePolynomial, FitReport]:
    """Solve the hinge-loss LP with hard constraints on the protected side."""
    if sign not in (POSITIVE, NEGATIVE):
        raise InputError(f"sign must be positive or negative, got {sign!r}")
    if not 0 < eps < 1:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    if s.m < 1:
        raise InputError("cannot fit an empty sample")
    monos = monomials_upto(s.n, d)
    if len(monos) > feature_cap:
        raise ResourceLimitError(f"{len(monos)} monomial features exceed cap {feature_cap}")
    distinct, pos, negc = _dedup(s.points, s.labels)
    phi = _features(distinct, monos)
    M = len(monos)

    if sign == POSITIVE:
        hinge_idx = np.flatnonzero(pos)      # xi_j >= 1 - p(x_j), weighted by pos count
        hard_idx = np.flatnonzero(negc)      # p(x_j) <= -1 + eps
        hinge_sign, hard_rel, hard_rhs = +1.0, lpmod.LE, -1.0 + eps
        hinge_counts = pos[hinge_idx]
    else:
        hinge_idx = np.flatnonzero(negc)     # xi_j >= 1 + p(x_j), weighted by neg count
        hard_idx = np.flatnonzero(pos)       # p(x_j) >= 1 - eps
        hinge_sign, hard_rel, hard_rhs = -1.0, lpmod.GE, 1.0 - eps
        hinge_counts = negc[hinge_idx]

    nh = len(hinge_idx)
    nvars = 2 * M + nh
    cons: list[lpmod.Constraint] = []
    for slot, j in enumerate(hinge_idx):
        row = np.zeros(nvars)
        row[:M] = hinge_sign * phi[j]
        row[2 * M + slot] = 1.0
        cons.append(lpmod.Constraint(row, lpmod.GE, 1.0))  # xi + sign*p >= 1
    for j in hard_idx:
        row = np.zeros(nvars)
        row[:M] = phi[j]
        cons.append(lpmod.Constraint(row, hard_rel, hard_rhs))
    cons.extend(_weight_rows(M, nvars, W))

    objective = np.zeros(nvars)
    objective[2 * M:] = hinge_counts.astype(np.float64)
    bounds = [(None, None)] * M + [(0.0, None)] * M + [(0.0, None)] * nh
    program = lpmod.LinearProgram(objective, tuple(cons), tuple(bounds))
    sol = lpmod.solve(program)
    if sol.status == "infeasible":
        raise InfeasibleError(f"hinge LP infeasible (weight cap W={W} too small for eps={eps})")
    if sol.status != "optimal":
        raise SolverError(f"hinge LP ended with status {sol.status}")
    active = sum(1 for c in cons if abs(float(c.coeffs @ sol.values) - c.bound) <= 1e-7)
    poly = _extract_poly(s.n, monos, sol.values[:M])
    report = FitReport(max(0.0, sol.objective_value), active, eps, float(W), d, s.m, sol.status)
    return poly, report


def agnostic_l1_fit(
    s: LabeledSample,
    d: int,
    W: float,
    feature_cap: int = FEATURE_CAP,
) -> tuple[SparsePolynomial, FitReport]:
    """Minimize sum_i |p(x_i) - y_i| subject to weight(p) <= W."""
    if s.m < 1:
        raise InputError("cannot fit an empty sample")
    monos = monomials_upto(s.n, d)
    if len(monos) > feature_cap:
        raise ResourceLimitError(f"{len(monos)} monomial features exceed cap {feature_cap}")
    rows = np.hstack([s.points, s.labels[:, None]])
    distinct, counts = np.unique(rows, axis=0, return_counts=True)
    X, y = distinct[:, :-1], distinct[:, -1].astype(np.float64)
    phi = _features(X, monos)
    M, k = len(monos), X.shape[0]
    nvars = 2 * M + k
    cons: list[lpmod.Constraint] = []
    for j in range(k):
        up = np.zeros(nvars)
        up[:M] = phi[j]
        up[2 * M + j] = -1.0
        cons.append(lpmod.Constraint(up, lpmod.LE, y[j]))    # p - e <= y
        dn = np.zeros(nvars)
        dn[:M] = -phi[j]
        dn[2 * M + j] = -1.0
        cons.append(lpmod.Constraint(dn, lpmod.LE, -y[j]))   # -p - e <= -y
    cons.extend(_weight_rows(M, nvars, W))
    objective = np.zeros(nvars)
    objective[2 * M:] = counts.astype(np.float64)
    bounds = [(None, None)] * M + [(0.0, None)] * M + [(0.0, None)] * k
    sol = lpmod.solve(lpmod.LinearProgram(objective, tuple(cons), tuple(bounds)))
    if sol.status == "infeasible":
        raise InfeasibleError("L1 LP infeasible")
    if sol.status != "optimal":
        raise SolverError(f"L1 LP ended with status {sol.status}")
    active = sum(1 for c in cons if abs(float(c.coeffs @ sol.values) - c.bound) <= 1e-7)
    poly = _extract_poly(s.n, monos, sol.values[:M])
    report = FitReport(max(0.0, sol.objective_value), active, None, float(W), d, s.m, sol.status)
    return poly, report


# ---------------------------------------------------------------------------
# Rounding, derandomization, threshold selection


def randomized_round(p: SparsePolynomial, x, u: float) -> int:
    """+1 with probability (1 + chop(p(x)))/2, decided by the supplied draw u."""
    v = float(p.eval(as_bits(x, p.n)))
    if v <= -1.0:
        return -1
    if v >= 1.0:
        return 1
    return 1 if u < (1.0 + v) / 2.0 else -1


def derandomize(
    p: SparsePolynomial,
    fresh: LabeledSample,
    eps: float,
    sign: str = POSITIVE,
) -> ReliableHypothesis:
    """Pick the calibrated threshold over H(x) = chop(p(x)) on a fresh sample.

    Positive side: the smallest t (among observed H values and +-inf
    sentinels) whose empirical false-positive rate is at most eps; the +inf
    sentinel (hypothesis identically -1) always qualifies, so this never
    fails.  Negative side is the exact mirror: the largest t with empirical
    false-negative rate at most eps under the H >= t convention.
    """
    if sign not in (POSITIVE, NEGATIVE):
        raise InputError(f"sign must be positive or negative, got {sign!r}")
    if not 0 < eps < 1:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    need = math.ceil(CALIBRATION_FACTOR / eps**2)
    if fresh.m < need:
        raise InputError(f"calibration sample of {fresh.m} examples; need >= {need} for eps={eps}")
    H = np.clip(sparse_eval_batch(p, fresh.points), -1.0, 1.0)
    y = fresh.labels
    m = fresh.m
    candidates = [-math.inf] + [float(v) for v in np.unique(H)] + [math.inf]
    if sign == POSITIVE:
        neg_sorted = np.sort(H[y == -1])
        for t in candidates:  # ascending; false_+ is non-increasing in t
            fp = (neg_sorted.size - np.searchsorted(neg_sorted, t, side="right")) / m
            if fp <= eps:
                return ReliableHypothesis(p, POSITIVE, "thresholded", t, m)
    else:
        pos_sorted = np.sort(H[y == 1])
        for t in reversed(candidates):  # descending; false_- is non-decreasing in t
            fn = np.searchsorted(pos_sorted, t, side="left") / m
            if fn <= eps:
                return ReliableHypothesis(p, NEGATIVE, "thresholded", t, m)
    raise AssertionError("sentinel threshold always satisfies the bound")


def choose_error_threshold(values: np.ndarray, labels: np.ndarray) -> float:
    """Threshold minimizing empirical error of +1 iff value > t (ties: smaller t)."""
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels)
    candidates = [-math.inf] + [float(v) for v in np.unique(values)] + [math.inf]
    best_t, best_err = None, None
    for t in candidates:
        pred = np.where(values > t, 1, -1)
        err = float(np.count_nonzero(pred != labels)) / labels.size
        if best_err is None or err < best_err - 1e-15:
            best_t, best_err = t, err
    return best_t


# ---------------------------------------------------------------------------
# End-to-end learners


def learn_reliable(
    s: LabeledSample,
    d: int,
    W: float,
    eps: float,
    sign: str,
    fresh: LabeledSample,
) -> tuple[ReliableHypothesis, FitReport]:
    """Hinge-loss fit followed by threshold calibration on the fresh sample."""
    poly, report = reliable_fit(s, d, W, eps, sign)
    return derandomize(poly, fresh, eps, sign), report


def agreement_hypothesis(h_pos, h_neg, n: int) -> PartialHypothesis:
    """Answer the shared value where both classifiers agree, abstain otherwise."""

    def decide(x) -> int:
        a, b = h_pos.decide(x), h_neg.decide(x)
        return a if a == b else 0

    def decide_batch(X: np.ndarray) -> np.ndarray:
        a, b = h_pos.decide_batch(X), h_neg.decide_batch(X)
        return np.where(a == b, a, 0).astype(np.int8)

    return PartialHypothesis(n, decide, decide_batch)


def learn_fully_reliable(
    s: LabeledSample,
    d: int,
    W: float,
    eps: float,
    fresh: LabeledSample,
) -> tuple[PartialHypothesis, dict[str, FitReport]]:
    """Agreement of the two one-sided learners, each run at eps/4."""
    h_pos, rep_pos = learn_reliable(s, d, W, eps / 4.0, POSITIVE, fresh)
    h_neg, rep_neg = learn_reliable(s, d, W, eps / 4.0, NEGATIVE, fresh)
    return agreement_hypothesis(h_pos, h_neg, s.n), {POSITIVE: rep_pos, NEGATIVE: rep_neg}


def learn_agnostic_l1(
    s: LabeledSample,
    d: int,
    W: float,
    fresh: LabeledSample,
) -> tuple[ReliableHypothesis, FitReport]:
    """Weight-capped L1 fit, thresholded on fresh data to minimize error."""
    poly, report = agnostic_l1_fit(s, d, W)
    t = choose_error_threshold(sparse_eval_batch(poly, fresh.points), fresh.labels)
    return ReliableHypothesis(poly, POSITIVE, "thresholded", t, fresh.m, clamp=False), report


# ---------------------------------------------------------------------------
# Sample-size formulas (natural logarithms throughout)


def plan_samples(n: int, d: int, W: float, eps: float, delta: float) -> SamplePlan:
    """m = max(512/eps^4 * W^2 d ln(2n), 64/eps^2 * (W+1)^2 ln(1/delta))."""
    if n < 1 or d < 1 or W <= 0:
        raise InputError("n, d must be >= 1 and W > 0")
    if not 0 < eps <= 1 or not 0 < delta < 1:
        raise InputError("need eps in (0, 1] and delta in (0, 1)")
    term1 = 512.0 / eps**4 * W**2 * d * math.log(2 * n)
    term2 = 64.0 / eps**2 * (W + 1) ** 2 * math.log(1.0 / delta)
    return SamplePlan(math.ceil(max(term1, term2)), term1, term2)


def rademacher_bound(W: float, d: int, n: int, m: float) -> float:
    """W * sqrt(2 d ln(2n) / m) for degree-d weight-W polynomials on the cube."""
    if m < 1:
        raise InputError("need m >= 1")
    return W * math.sqrt(2.0 * d * math.log(2 * n) / m)

"""Threshold decision rules and error probability for BPSK discrimination.

Convention: decide the theta = 0 hypothesis iff the observed count (or
photocurrent) n satisfies n >= threshold; ties go to theta = 0. The error
probability is then

    PE = p0 * P(n < t | theta=0) + p1 * (1 - P(n < t | theta=pi)).

The balance threshold is the root of
h(t) = p0 * P(n < t | 0) - p1 * (1 - P(n < t | pi)), which equates the two
error terms. h is monotone nondecreasing, so bisection finds it. The
balance root is not always the PE minimizer when priors are unequal, so
optimal_threshold also compares it against the trivial always-decide-one-
symbol rules and returns the best of the three; a nonzero residual flags
that a boundary rule won.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DegenerateInputError, InvalidParameterError
from .photostats import GaussianParams, NegBinParams, gaussian_cdf, nb_cdf
from .receivers import (
    BALANCED_BPSK,
    IDLER_PORT,
    RETURN_PORT,
    ChannelParams,
    ModeStats,
    oh_mode_stats,
    opa_mode_stats,
    opc_mode_stats,
)

NEGATIVE_BINOMIAL = "negative_binomial"
GAUSSIAN_APPROX = "gaussian_approx"
_KINDS = (NEGATIVE_BINOMIAL, GAUSSIAN_APPROX)

OPA_RETURN = "opa_return"
OPA_IDLER = "opa_idler"
OPC = "opc"
OH = "oh"
RECEIVERS = (OPA_RETURN, OPA_IDLER, OPC, OH)

# counting statistics only exist on the amplifier ports
_COUNTING_RECEIVERS = (OPA_RETURN, OPA_IDLER)

_BRACKET_SIGMAS = 10.0
_BALANCE_TOL = 1e-9


@dataclass(frozen=True)
class Priors:
    p0: float
    p1: float

    def __post_init__(self) -> None:
        if not (0.0 < self.p0 < 1.0 and 0.0 < self.p1 < 1.0):
            raise InvalidParameterError(
                f"priors must lie in (0, 1), got p0={self.p0}, p1={self.p1}"
            )
        if abs(self.p0 + self.p1 - 1.0) > 1e-12:
            raise InvalidParameterError(
                f"priors must sum to 1, got p0={self.p0}, p1={self.p1}"
            )

    @classmethod
    def from_p0(cls, p0: float) -> "Priors":
        return cls(p0, 1.0 - p0)


EQUAL_PRIORS = Priors(0.5, 0.5)
DEFAULT_UNEQUAL_PRIORS = Priors(0.45, 0.55)


@dataclass(frozen=True)
class DetectionModel:
    """Pairs a receiver with a counting model (exact vs Gaussian)."""

    kind: str
    receiver: str

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise InvalidParameterError(
                f"kind must be one of {_KINDS}, got kind={self.kind!r}"
            )
        if self.receiver not in RECEIVERS:
            raise InvalidParameterError(
                f"receiver must be one of {RECEIVERS}, got receiver={self.receiver!r}"
            )
        if self.kind == NEGATIVE_BINOMIAL and self.receiver not in _COUNTING_RECEIVERS:
            raise InvalidParameterError(
                f"receiver {self.receiver!r} measures a signed photocurrent; "
                f"only {_COUNTING_RECEIVERS} support the negative_binomial kind"
            )


@dataclass(frozen=True)
class ThresholdResult:
    """Chosen threshold plus the balance-condition value there.

    |residual| <= the solver tolerance when the balance root itself was
    returned; a larger residual flags a degenerate or boundary-rule result.
    """

    threshold: float
    residual: float


def receiver_mode_stats(model: DetectionModel, p: ChannelParams) -> tuple[ModeStats, ModeStats]:
    """Per-mode statistics under each hypothesis for the model's receiver."""
    if model.receiver == OPA_RETURN:
        return (opa_mode_stats(p, RETURN_PORT, 0.0), opa_mode_stats(p, RETURN_PORT, math.pi))
    if model.receiver == OPA_IDLER:
        return (opa_mode_stats(p, IDLER_PORT, 0.0), opa_mode_stats(p, IDLER_PORT, math.pi))
    if model.receiver == OPC:
        return (opc_mode_stats(p, 0.0), opc_mode_stats(p, math.pi))
    return (oh_mode_stats(p, BALANCED_BPSK, 0.0), oh_mode_stats(p, BALANCED_BPSK, math.pi))


def _prob_below(threshold: float, model: DetectionModel, p: ChannelParams,
                stats: ModeStats) -> float:
    """P(n < threshold) for the total over all modes under one hypothesis."""
    if math.isinf(threshold):
        return 1.0 if threshold > 0 else 0.0
    if model.kind == NEGATIVE_BINOMIAL:
        if threshold <= 0.0:
            return 0.0
        top = math.ceil(threshold) - 1
        return nb_cdf(top, NegBinParams(modes=p.modes, mean_per_mode=stats.mean))
    g = GaussianParams(mean=p.modes * stats.mean, std=math.sqrt(p.modes) * stats.std)
    return gaussian_cdf(threshold, g)


def _conditional_errors(threshold: float, model: DetectionModel, p: ChannelParams,
                        stats0: ModeStats, stats_pi: ModeStats) -> tuple[float, float]:
    e0 = _prob_below(threshold, model, p, stats0)
    e1 = 1.0 - _prob_below(threshold, model, p, stats_pi)
    return e0, e1


def error_probability(priors: Priors, threshold: float, model: DetectionModel,
                      p: ChannelParams) -> float:
    stats0, stats_pi = receiver_mode_stats(model, p)
    e0, e1 = _conditional_errors(threshold, model, p, stats0, stats_pi)
    return priors.p0 * e0 + priors.p1 * e1


def equal_prior_threshold_gaussian(stats0: ModeStats, stats_pi: ModeStats,
                                   modes: int) -> float:
    """Closed-form equal-prior balance threshold for the Gaussian model."""
    if stats0.mean < stats_pi.mean:
        raise InvalidParameterError(
            f"stats0.mean must be >= stats_pi.mean, got {stats0.mean} < {stats_pi.mean}"
        )
    denom = stats0.std + stats_pi.std
    if denom == 0.0:
        raise DegenerateInputError(
            "both hypotheses have zero spread; no informative threshold exists"
        )
    return modes * (stats_pi.std * stats0.mean + stats0.std * stats_pi.mean) / denom


def _bracket(stats0: ModeStats, stats_pi: ModeStats, modes: int) -> tuple[float, float]:
    rm = math.sqrt(modes)
    lo = modes * stats_pi.mean - _BRACKET_SIGMAS * rm * stats_pi.std
    hi = modes * stats0.mean + _BRACKET_SIGMAS * rm * stats0.std
    return lo, hi


def _balance(priors: Priors, threshold: float, model: DetectionModel, p: ChannelParams,
             stats0: ModeStats, stats_pi: ModeStats) -> float:
    e0, e1 = _conditional_errors(threshold, model, p, stats0, stats_pi)
    return priors.p0 * e0 - priors.p1 * e1


def _majority_rule(priors: Priors, model: DetectionModel) -> float:
    # no informative threshold: always decide the prior-majority symbol
    if priors.p1 >= priors.p0:
        return math.inf
    return 0.0 if model.kind == NEGATIVE_BINOMIAL else -math.inf


def threshold_balance_root(priors: Priors, model: DetectionModel,
                           p: ChannelParams) -> ThresholdResult:
    """Root of the balance condition h, without the boundary-rule comparison.

    Gaussian: bisection until the bracket stops splitting in floating point.
    Counting model: the smallest integer with h >= 0 (the balance cannot
    hold exactly on a lattice). If h has one sign over the whole bracket,
    the bracket endpoint with the smaller PE is returned; its residual is
    then far from zero, which marks the result as a fallback.
    """
    stats0, stats_pi = receiver_mode_stats(model, p)
    lo, hi = _bracket(stats0, stats_pi, p.modes)

    def h(t: float) -> float:
        return _balance(priors, t, model, p, stats0, stats_pi)

    if model.kind == NEGATIVE_BINOMIAL:
        ilo = max(0, math.ceil(lo))
        ihi = max(ilo, math.floor(hi))
        if h(ilo) >= 0.0:
            best = ilo
        elif h(ihi) < 0.0:
            best = _min_pe_choice(priors, [float(ilo), float(ihi)], model, p,
                                  stats0, stats_pi)
        else:
            a, b = ilo, ihi
            while b - a > 1:
                mid = (a + b) // 2
                if h(mid) < 0.0:
                    a = mid
                else:
                    b = mid
            best = b
        return ThresholdResult(threshold=float(best), residual=h(float(best)))

    hlo, hhi = h(lo), h(hi)
    if hlo > 0.0 or hhi < 0.0:
        t = _min_pe_choice(priors, [lo, hi], model, p, stats0, stats_pi)
        return ThresholdResult(threshold=t, residual=h(t))
    a, b = lo, hi
    for _ in range(300):
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            break
        if h(mid) < 0.0:
            a = mid
        else:
            b = mid
    root = 0.5 * (a + b)
    return ThresholdResult(threshold=root, residual=h(root))


def _min_pe_choice(priors: Priors, candidates: list[float], model: DetectionModel,
                   p: ChannelParams, stats0: ModeStats, stats_pi: ModeStats) -> float:
    best_t = candidates[0]
    best_pe = math.inf
    for t in candidates:
        e0, e1 = _conditional_errors(t, model, p, stats0, stats_pi)
        pe = priors.p0 * e0 + priors.p1 * e1
        if pe < best_pe:
            best_t, best_pe = t, pe
    return best_t


def optimal_threshold(priors: Priors, model: DetectionModel,
                      p: ChannelParams) -> ThresholdResult:
    """Decision threshold minimizing PE among the balance root and the
    trivial boundary rules.

    Counting model: PE is minimized over every integer threshold inside
    the bisection bracket. Gaussian: the balance root is compared against
    the two bracket endpoints. The majority rule (ignore the data, decide
    the likelier symbol) always competes as a candidate, which keeps
    PE <= min(p0, p1) even at skewed priors where every data-dependent
    rule loses; its threshold is infinite except for counting with
    p0 > p1, where threshold 0 accepts every count.

    When the two hypotheses have identical statistics, the majority rule
    is returned directly; the residual flags it.
    """
    stats0, stats_pi = receiver_mode_stats(model, p)
    majority = _majority_rule(priors, model)

    if stats0.mean == stats_pi.mean and stats0.std == stats_pi.std:
        return ThresholdResult(
            threshold=majority,
            residual=_balance(priors, majority, model, p, stats0, stats_pi),
        )

    lo, hi = _bracket(stats0, stats_pi, p.modes)
    if model.kind == NEGATIVE_BINOMIAL:
        ilo = max(0, math.ceil(lo))
        ihi = max(ilo, math.floor(hi))
        best_t = float(ilo)
        best_pe = math.inf
        for t in range(ilo, ihi + 1):
            e0, e1 = _conditional_errors(float(t), model, p, stats0, stats_pi)
            pe = priors.p0 * e0 + priors.p1 * e1
            if pe < best_pe:
                best_t, best_pe = float(t), pe
        e0, e1 = _conditional_errors(majority, model, p, stats0, stats_pi)
        if priors.p0 * e0 + priors.p1 * e1 < best_pe:
            best_t = majority
        return ThresholdResult(
            threshold=best_t,
            residual=_balance(priors, best_t, model, p, stats0, stats_pi),
        )

    root = threshold_balance_root(priors, model, p)
    t = _min_pe_choice(priors, [root.threshold, lo, hi, majority],
                       model, p, stats0, stats_pi)
    return ThresholdResult(
        threshold=t, residual=_balance(priors, t, model, p, stats0, stats_pi)
    )


def pe_sweep(p: ChannelParams, m_values: list[int], priors_list: list[Priors],
             models: list[DetectionModel]) -> list[dict]:
    """PE at the optimal threshold over a grid of mode counts.

    Rows are ordered by (receiver, p0, M, kind) so curves for one receiver
    stay contiguous.
    """
    if not m_values or not priors_list or not models:
        raise InvalidParameterError("m_values, priors_list and models must be nonempty")
    rows = []
    for model in models:
        for priors in priors_list:
            for m in m_values:
                params = replace(p, modes=m)
                thr = optimal_threshold(priors, model, params)
                pe = error_probability(priors, thr.threshold, model, params)
                rows.append({
                    "M": m,
                    "receiver": model.receiver,
                    "model": model.kind,
                    "p0": priors.p0,
                    "threshold": thr.threshold,
                    "pe": pe,
                })
    rows.sort(key=lambda r: (r["receiver"], r["p0"], r["M"], r["model"]))
    return rows


def pe_surface(p: ChannelParams, model: DetectionModel, p0_grid: list[float],
               nth_grid: list[float]) -> list[list[float]]:
    """PE over a (prior, threshold) grid, row-major by p0."""
    if not p0_grid or not nth_grid:
        raise InvalidParameterError("p0_grid and nth_grid must be nonempty")
    stats0, stats_pi = receiver_mode_stats(model, p)
    surface = []
    for p0 in p0_grid:
        priors = Priors.from_p0(p0)
        row = []
        for t in nth_grid:
            e0, e1 = _conditional_errors(t, model, p, stats0, stats_pi)
            row.append(priors.p0 * e0 + priors.p1 * e1)
        surface.append(row)
    return surface

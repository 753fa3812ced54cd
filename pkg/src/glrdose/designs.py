"""Transition rules of the classical interval designs and their evidence levels.

Each interval design partitions the observed DLT rate at the current dose
into escalate / stay / de-escalate regions.  Evaluating the single-dose
likelihood ratio at the region boundaries yields the "effective" evidence
cut-points (k1, k2) that a likelihood-based rule would need in order to make
the same decisions, which puts all of these designs on one comparison scale.

Boundary conventions are uniform: escalate when the observed rate is at or
below the escalation boundary, de-escalate when at or above the
de-escalation boundary, stay in between.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .evidence import (
    Action,
    DoseData,
    TransitionDecision,
    glr_single,
    log_glr_continuous,
    validate_rate,
)
from .numerics import bisect, reg_inc_beta

__all__ = [
    "EquivalenceInterval",
    "BoinParams",
    "DecisionBoundaries",
    "EffectiveK",
    "KRange",
    "default_equivalence_interval",
    "default_boin_params",
    "boin_boundaries",
    "teqr_boundaries",
    "teqr_decision",
    "i3plus3_boundaries",
    "mtpi_boundaries",
    "decision_from_boundaries",
    "i3plus3_decision",
    "mtpi_decision",
    "mtpi_upm",
    "effective_k",
    "three_plus_three_decision",
    "three_plus_three_k_ranges",
]


@dataclass(frozen=True)
class EquivalenceInterval:
    """The "stay" interval around the target rate used by TEQR, mTPI and i3+3."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not 0.0 < self.lower < self.upper < 1.0:
            raise ValueError(
                f"need 0 < lower < upper < 1, got ({self.lower}, {self.upper})"
            )


@dataclass(frozen=True)
class BoinParams:
    """BOIN's under- and over-dosing rates, bracketing the target."""

    phi1: float
    phi2: float


@dataclass(frozen=True)
class DecisionBoundaries:
    """Cut rates on the observed-rate axis: escalate at or below the first,
    de-escalate at or above the second.

    A de-escalation boundary above 1 encodes an empty de-escalation region
    (i3+3 produces one at a single observed patient).
    """

    escalate_at_or_below: float
    deescalate_at_or_above: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.escalate_at_or_below <= 1.0:
            raise ValueError(
                f"escalation boundary must lie in [0, 1], got {self.escalate_at_or_below}"
            )
        if not self.escalate_at_or_below <= self.deescalate_at_or_above:
            raise ValueError(
                "boundaries must satisfy escalate <= de-escalate, got "
                f"({self.escalate_at_or_below}, {self.deescalate_at_or_above})"
            )


@dataclass(frozen=True)
class EffectiveK:
    """Evidence cut-points that replicate a boundary pair at a given n."""

    k1: float
    k2: float


@dataclass(frozen=True)
class KRange:
    """Half-open evidence ranges (low, high] compatible with a discrete rule."""

    k1_low: float
    k1_high: float
    k2_low: float
    k2_high: float

    def __post_init__(self) -> None:
        if not (self.k1_low < self.k1_high and self.k2_low < self.k2_high):
            raise ValueError("each cut-point range must have low < high")


def default_equivalence_interval(phi: float) -> EquivalenceInterval:
    """The symmetric target +- 0.05 interval, common practice for these designs."""
    validate_rate(phi)
    return EquivalenceInterval(phi - 0.05, phi + 0.05)


def default_boin_params(phi: float) -> BoinParams:
    """The defaults recommended by Liu & Yuan (2015): 0.6 and 1.4 times target."""
    validate_rate(phi)
    return BoinParams(0.6 * phi, 1.4 * phi)


def boin_boundaries(phi: float, params: BoinParams | None = None) -> DecisionBoundaries:
    """BOIN's optimal interval boundaries (Liu & Yuan, 2015).

    The boundaries depend only on the target and the bracketing rates, not on
    the number of patients observed.
    """
    validate_rate(phi)
    if params is None:
        params = default_boin_params(phi)
    p1, p2 = params.phi1, params.phi2
    if not 0.0 < p1 < phi < p2 < 1.0:
        raise ValueError(f"need 0 < phi1 < phi < phi2 < 1, got ({p1}, {phi}, {p2})")
    lam_e = math.log((1.0 - p1) / (1.0 - phi)) / math.log(
        phi * (1.0 - p1) / (p1 * (1.0 - phi))
    )
    lam_d = math.log((1.0 - phi) / (1.0 - p2)) / math.log(
        p2 * (1.0 - phi) / (phi * (1.0 - p2))
    )
    return DecisionBoundaries(lam_e, lam_d)


def teqr_boundaries(ei: EquivalenceInterval) -> DecisionBoundaries:
    """TEQR (Blanchard & Longmate, 2011): boundaries at the stay interval's edges."""
    return DecisionBoundaries(ei.lower, ei.upper)


def teqr_decision(data: DoseData, ei: EquivalenceInterval) -> TransitionDecision:
    """TEQR transition rule on accumulated counts.

    The stay interval is closed: a rate exactly on an edge stays, per the
    design's published formulation.  (The likelihood mapping in effective_k
    evaluates the evidence at the edge either way.)
    """
    rate = data.rate
    if rate < ei.lower:
        return TransitionDecision(Action.ESCALATE)
    if rate > ei.upper:
        return TransitionDecision(Action.DE_ESCALATE)
    return TransitionDecision(Action.STAY)


def i3plus3_boundaries(n: int, ei: EquivalenceInterval) -> DecisionBoundaries:
    """Continuous form of the i3+3 rule (Liu, Wang & Ji, 2020) at sample size n.

    i3+3 de-escalates above the stay interval only when removing a single DLT
    would not put the rate below the interval, which lifts the de-escalation
    boundary to ei.lower + 1/n whenever the interval is narrower than one
    patient's worth of rate.
    """
    if n < 1:
        raise ValueError(f"need at least one treated patient, got n={n}")
    return DecisionBoundaries(ei.lower, max(ei.upper, ei.lower + 1.0 / n))


def decision_from_boundaries(bounds: DecisionBoundaries, p_hat: float) -> Action:
    if p_hat <= bounds.escalate_at_or_below:
        return Action.ESCALATE
    if p_hat >= bounds.deescalate_at_or_above:
        return Action.DE_ESCALATE
    return Action.STAY


def i3plus3_decision(data: DoseData, ei: EquivalenceInterval) -> TransitionDecision:
    """i3+3 transition rule on accumulated counts at the current dose.

    The stay interval is closed, and a rate above it still stays when
    removing one DLT would put it strictly below the interval (the design's
    guard against overreacting to a single event at small n).
    """
    rate = data.rate
    if rate < ei.lower:
        return TransitionDecision(Action.ESCALATE)
    if rate > ei.upper and (data.x - 1) / data.n >= ei.lower:
        return TransitionDecision(Action.DE_ESCALATE)
    return TransitionDecision(Action.STAY)


def mtpi_upm(a: float, b: float, ei: EquivalenceInterval) -> tuple[float, float, float]:
    """Posterior probability per unit length of the three action intervals
    (below, inside, above the stay interval) under a Beta(a, b) posterior."""
    f_lo = reg_inc_beta(a, b, ei.lower)
    f_hi = reg_inc_beta(a, b, ei.upper)
    return (
        f_lo / ei.lower,
        (f_hi - f_lo) / (ei.upper - ei.lower),
        (1.0 - f_hi) / (1.0 - ei.upper),
    )


def _upm_argmax(upm_escalate: float, upm_stay: float, upm_deescalate: float) -> Action:
    # Ties resolve to the middle action; they only occur on measure-zero inputs.
    if upm_stay >= upm_escalate and upm_stay >= upm_deescalate:
        return Action.STAY
    if upm_escalate > upm_deescalate:
        return Action.ESCALATE
    return Action.DE_ESCALATE


def mtpi_decision(
    data: DoseData, phi: float, ei: EquivalenceInterval | None = None
) -> TransitionDecision:
    """mTPI rule (Ji et al., 2010): act on the interval holding the highest
    posterior probability per unit length, under a uniform prior."""
    if data.n < 1:
        raise ValueError("mTPI decision undefined without any treated patients")
    if ei is None:
        ei = default_equivalence_interval(phi)
    upm = mtpi_upm(data.x + 1.0, data.n - data.x + 1.0, ei)
    return TransitionDecision(_upm_argmax(*upm))


def mtpi_boundaries(
    n: int, phi: float, ei: EquivalenceInterval | None = None
) -> DecisionBoundaries:
    """Observed-rate boundaries where the mTPI argmax switches, by bisection.

    The posterior shape parameters follow the continuous extension
    (n * p_hat + 1, n * (1 - p_hat) + 1), so the boundaries apply to any
    observed rate rather than only multiples of 1/n.  Resolved to 1e-8.
    """
    if n < 1:
        raise ValueError(f"need at least one treated patient, got n={n}")
    validate_rate(phi)
    if ei is None:
        ei = default_equivalence_interval(phi)

    def argmax_at(p_hat: float) -> Action:
        return _upm_argmax(*mtpi_upm(n * p_hat + 1.0, n * (1.0 - p_hat) + 1.0, ei))

    eps = 1e-9
    escalate = bisect(
        lambda p: 1.0 if argmax_at(p) is Action.ESCALATE else -1.0, eps, phi, tol=1e-8
    )
    deescalate = bisect(
        lambda p: -1.0 if argmax_at(p) is Action.DE_ESCALATE else 1.0,
        phi,
        1.0 - eps,
        tol=1e-8,
    )
    return DecisionBoundaries(escalate, deescalate)


def effective_k(bounds: DecisionBoundaries, n: int, phi: float) -> EffectiveK:
    """Evidence cut-points a likelihood rule needs to replicate the boundaries.

    k1 is the likelihood ratio at the escalation boundary (the weakest
    favorable evidence that still escalates); k2 is the reciprocal ratio at
    the de-escalation boundary.  Both equal 1 when the boundaries collapse
    onto the target rate.
    """
    k1 = math.exp(log_glr_continuous(bounds.escalate_at_or_below, n, phi))
    k2 = math.exp(-log_glr_continuous(bounds.deescalate_at_or_above, n, phi))
    return EffectiveK(k1, k2)


def three_plus_three_decision(data: DoseData) -> TransitionDecision:
    """Classical 3+3 decisions at the two per-dose sample sizes it produces."""
    if data.n == 3:
        if data.x == 0:
            return TransitionDecision(Action.ESCALATE)
        if data.x == 1:
            return TransitionDecision(Action.STAY)
        return TransitionDecision(Action.DE_ESCALATE)
    if data.n == 6:
        if data.x <= 1:
            return TransitionDecision(Action.ESCALATE)
        return TransitionDecision(Action.DE_ESCALATE)
    raise ValueError(f"the 3+3 design only evaluates 3 or 6 patients, got n={data.n}")


def _three_plus_three_outcomes() -> list[tuple[DoseData, Action]]:
    # States reachable at a dose: a first cohort of 3, expanded to 6 after
    # exactly one DLT (so 6-patient states carry 1 to 4 events).
    states = [DoseData(3, x) for x in range(4)] + [DoseData(6, x) for x in range(1, 5)]
    return [(d, three_plus_three_decision(d).action) for d in states]


def three_plus_three_k_ranges(phi: float) -> KRange:
    """Evidence cut-point ranges replicating every reachable 3+3 decision.

    Escalating outcomes cap k1 from above (it can be no larger than their
    weakest evidence) while every other outcome must fall short of k1;
    de-escalating outcomes cap k2 while staying outcomes must survive it.
    Returns half-open (low, high] ranges; raises when no cut-points can
    reproduce the decisions at this target rate.
    """
    validate_rate(phi)
    outcomes = [(glr_single(d, phi).value, action) for d, action in _three_plus_three_outcomes()]
    escalate = [g for g, a in outcomes if a is Action.ESCALATE]
    non_escalate = [g for g, a in outcomes if a is not Action.ESCALATE]
    deescalate = [g for g, a in outcomes if a is Action.DE_ESCALATE]
    kept = [g for g, a in outcomes if a is not Action.DE_ESCALATE]

    k1_high = min(escalate)
    k1_low = max([1.0] + non_escalate)
    k2_high = min(1.0 / g for g in deescalate)
    k2_low = max([1.0] + [1.0 / g for g in kept if g < 1.0])
    if not (k1_low < k1_high and k2_low < k2_high):
        raise ValueError(
            f"no evidence cut-points reproduce the 3+3 decisions at phi={phi}"
        )
    return KRange(k1_low, k1_high, k2_low, k2_high)

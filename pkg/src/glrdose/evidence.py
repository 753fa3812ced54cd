"""Likelihood-ratio evidence for dose-limiting toxicity data at a single dose.

The scientific question at a dose is whether its true DLT rate exceeds the
target rate ``phi``.  Under a binomial likelihood the evidence comparing
"at or below target" against "above target" is a generalized likelihood
ratio: values above 1 favor the dose being tolerable, values below 1 favor
it being too toxic.  Everything here is computed in log space so that the
all-events and no-events cohorts common at sample sizes 3-6 never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "Action",
    "DoseData",
    "EvidenceCutoffs",
    "GlrValue",
    "TransitionDecision",
    "ELIMINATION_GLR_CUTOFF",
    "validate_rate",
    "log_glr_continuous",
    "glr_single",
    "transition_decision",
    "eliminate_glr",
]

# Evidence level at which a dose (and everything above it) is dropped outright.
ELIMINATION_GLR_CUTOFF = 1.0 / 3.87


class Action(Enum):
    """Dose transition actions."""

    ESCALATE = "escalate"
    STAY = "stay"
    DE_ESCALATE = "de-escalate"


@dataclass(frozen=True)
class DoseData:
    """DLT outcomes at one dose: ``x`` events among ``n`` treated patients."""

    n: int
    x: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.x < 0:
            raise ValueError(f"counts must be nonnegative, got n={self.n}, x={self.x}")
        if self.x > self.n:
            raise ValueError(f"DLT count {self.x} exceeds patient count {self.n}")

    @property
    def rate(self) -> float:
        """Observed DLT rate x/n."""
        if self.n == 0:
            raise ValueError("observed rate undefined with no treated patients")
        return self.x / self.n


@dataclass(frozen=True)
class EvidenceCutoffs:
    """Evidence required to escalate (k1) and to de-escalate (k2); both >= 1."""

    k1: float
    k2: float

    def __post_init__(self) -> None:
        if not (self.k1 >= 1.0 and self.k2 >= 1.0):
            raise ValueError(f"cutoffs must be >= 1, got k1={self.k1}, k2={self.k2}")


@dataclass(frozen=True)
class GlrValue:
    """A likelihood ratio carried on both scales, with value = exp(log_value)."""

    value: float
    log_value: float

    @classmethod
    def from_log(cls, log_value: float) -> "GlrValue":
        return cls(math.exp(log_value), log_value)


@dataclass(frozen=True)
class TransitionDecision:
    """A transition action, optionally flagging the current dose for removal."""

    action: Action
    eliminate_current: bool = False

    def __post_init__(self) -> None:
        if self.eliminate_current and self.action is not Action.DE_ESCALATE:
            raise ValueError("eliminating the current dose implies de-escalation")


def validate_rate(phi: float, name: str = "phi") -> float:
    if not 0.0 < phi < 1.0:
        raise ValueError(f"{name} must lie strictly inside (0, 1), got {phi}")
    return float(phi)


def _weighted_log_ratio(weight: float, num: float, den: float) -> float:
    # weight * log(num / den) under the 0 * log 0 = 0 convention
    if weight == 0.0:
        return 0.0
    return weight * (math.log(num) - math.log(den))


def log_glr_continuous(p_hat: float, n: int, phi: float) -> float:
    """Log evidence for "rate <= phi" over "rate > phi" at observed rate p_hat.

    The DLT count is treated as the possibly non-integer quantity n * p_hat,
    which makes the curve well defined for every p_hat in [0, 1].  It is
    strictly decreasing in p_hat, crosses zero exactly at p_hat = phi, and
    its slope scales linearly with n.
    """
    validate_rate(phi)
    if n < 1:
        raise ValueError(f"need at least one treated patient, got n={n}")
    if not 0.0 <= p_hat <= 1.0:
        raise ValueError(f"observed rate must lie in [0, 1], got {p_hat}")
    if p_hat == phi:
        return 0.0
    divergence = n * (
        _weighted_log_ratio(p_hat, p_hat, phi)
        + _weighted_log_ratio(1.0 - p_hat, 1.0 - p_hat, 1.0 - phi)
    )
    return divergence if p_hat < phi else -divergence


def glr_single(data: DoseData, phi: float) -> GlrValue:
    """Binomial likelihood-ratio evidence at one dose.

    Equals 1 exactly when the observed rate hits the target.  Rejects empty
    data: no transition decision is ever requested before a cohort completes.
    """
    if data.n < 1:
        raise ValueError("GLR undefined without any treated patients")
    return GlrValue.from_log(log_glr_continuous(data.x / data.n, data.n, phi))


def transition_decision(glr: GlrValue, cuts: EvidenceCutoffs) -> TransitionDecision:
    """Three-way rule: escalate on strong enough favorable evidence, de-escalate
    on strong enough unfavorable evidence, stay otherwise.

    Boundaries are inclusive: evidence exactly at a cutoff triggers the move.
    """
    if glr.value >= cuts.k1:
        return TransitionDecision(Action.ESCALATE)
    if glr.value <= 1.0 / cuts.k2:
        return TransitionDecision(Action.DE_ESCALATE)
    return TransitionDecision(Action.STAY)


def eliminate_glr(data: DoseData, phi: float) -> bool:
    """Whether single-dose evidence against tolerability is decisive enough to
    drop the dose entirely."""
    return glr_single(data, phi).value <= ELIMINATION_GLR_CUTOFF

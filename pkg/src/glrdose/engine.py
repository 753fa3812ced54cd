"""Trial simulation and live-conduct state machine.

A trial walks a ladder of doses one cohort at a time: outcomes accumulate at
the current dose, the design's transition rule picks the next dose, and an
overdose-control check can remove the current dose together with everything
above it.  A study is a batch of independently seeded trials over freshly
drawn toxicity scenarios, summarized by selection accuracy, the share of
over-treated patients, and average enrollment.

Reproducibility: trial i of a study draws from a dedicated RNG stream keyed
by (seed, i), so study results are identical for any worker count and any
chunking of the trial range.  Within a trial the stream is consumed in a
fixed order: scenario rates first, then one uniform per potential patient.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .designs import (
    BoinParams,
    EquivalenceInterval,
    boin_boundaries,
    decision_from_boundaries,
    default_boin_params,
    default_equivalence_interval,
    i3plus3_decision,
    mtpi_decision,
    teqr_decision,
)
from .evidence import (
    Action,
    DoseData,
    EvidenceCutoffs,
    GlrValue,
    TransitionDecision,
    eliminate_glr,
    glr_single,
    transition_decision,
    validate_rate,
)
from .isotonic import _log_glr_iso_counts, estimate_mtd
from .numerics import beta_tail_exceeds

__all__ = [
    "DesignKind",
    "DesignSpec",
    "Scenario",
    "StudyConfig",
    "TrialState",
    "StepOutcome",
    "TrialRecord",
    "StudyMetrics",
    "TrialStoppedError",
    "ELIMINATION_POSTERIOR_THRESHOLD",
    "scenario_gen",
    "decide_single",
    "check_elimination",
    "step",
    "run_trial",
    "run_study",
]

# Posterior Pr(rate > target) beyond which non-likelihood designs drop a dose.
ELIMINATION_POSTERIOR_THRESHOLD = 0.95

# Overdose control needs at least a smallest-cohort's worth of data to act.
_ELIMINATION_MIN_N = 3


class TrialStoppedError(RuntimeError):
    """Raised when a cohort is recorded against a trial that already stopped."""


class DesignKind(str, Enum):
    GLR_SD = "glr-sd"
    GLR_ISO = "glr-iso"
    BOIN = "boin"
    TEQR = "teqr"
    MTPI = "mtpi"
    I3PLUS3 = "i3plus3"


_GLR_KINDS = (DesignKind.GLR_SD, DesignKind.GLR_ISO)


@dataclass(frozen=True)
class DesignSpec:
    """A transition-rule choice plus its parameters.

    Likelihood designs carry evidence cutoffs (k1, k2); interval designs may
    carry an explicit equivalence interval or BOIN bracket, otherwise the
    conventional defaults are derived from the target rate at run time.
    """

    kind: DesignKind
    k1: float | None = None
    k2: float | None = None
    ei: EquivalenceInterval | None = None
    boin: BoinParams | None = None

    def __post_init__(self) -> None:
        if self.kind in _GLR_KINDS:
            if self.k1 is None or self.k2 is None:
                raise ValueError(f"{self.kind.value} requires both k1 and k2")
            if self.k1 < 1.0 or self.k2 < 1.0:
                raise ValueError(
                    f"evidence cutoffs must be >= 1, got k1={self.k1}, k2={self.k2}"
                )

    @classmethod
    def glr_sd(cls, k1: float, k2: float) -> "DesignSpec":
        return cls(DesignKind.GLR_SD, k1=k1, k2=k2)

    @classmethod
    def glr_iso(cls, k1: float, k2: float) -> "DesignSpec":
        return cls(DesignKind.GLR_ISO, k1=k1, k2=k2)

    @classmethod
    def boin_default(cls) -> "DesignSpec":
        return cls(DesignKind.BOIN)

    @classmethod
    def teqr_default(cls) -> "DesignSpec":
        return cls(DesignKind.TEQR)

    @classmethod
    def mtpi_default(cls) -> "DesignSpec":
        return cls(DesignKind.MTPI)

    @classmethod
    def i3plus3_default(cls) -> "DesignSpec":
        return cls(DesignKind.I3PLUS3)

    def cutoffs(self) -> EvidenceCutoffs:
        if self.kind not in _GLR_KINDS:
            raise ValueError(f"{self.kind.value} has no evidence cutoffs")
        return EvidenceCutoffs(self.k1, self.k2)

    def equivalence_interval(self, phi: float) -> EquivalenceInterval:
        return self.ei if self.ei is not None else default_equivalence_interval(phi)

    def boin_params(self, phi: float) -> BoinParams:
        return self.boin if self.boin is not None else default_boin_params(phi)

    def label(self) -> str:
        if self.kind in _GLR_KINDS:
            return f"{self.kind.value}(k1={self.k1:g},k2={self.k2:g})"
        return self.kind.value

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.k1 is not None:
            out["k1"] = self.k1
        if self.k2 is not None:
            out["k2"] = self.k2
        if self.ei is not None:
            out["ei_lower"] = self.ei.lower
            out["ei_upper"] = self.ei.upper
        if self.boin is not None:
            out["phi1"] = self.boin.phi1
            out["phi2"] = self.boin.phi2
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "DesignSpec":
        try:
            kind = DesignKind(raw["kind"])
        except (KeyError, ValueError):
            raise ValueError(f"unknown design kind: {raw.get('kind')!r}") from None
        ei = None
        if "ei_lower" in raw or "ei_upper" in raw:
            ei = EquivalenceInterval(raw["ei_lower"], raw["ei_upper"])
        boin = None
        if "phi1" in raw or "phi2" in raw:
            boin = BoinParams(raw["phi1"], raw["phi2"])
        return cls(kind, k1=raw.get("k1"), k2=raw.get("k2"), ei=ei, boin=boin)


@dataclass(frozen=True)
class Scenario:
    """A true toxicity profile: monotone per-dose rates and the implied MTD."""

    true_rates: tuple[float, ...]
    phi: float
    true_mtd: int  # 1-based; 0 when every dose is above target

    def __post_init__(self) -> None:
        if not self.true_rates:
            raise ValueError("a scenario needs at least one dose")
        validate_rate(self.phi)
        previous = 0.0
        for rate in self.true_rates:
            if not 0.0 < rate < 1.0:
                raise ValueError(f"true rates must lie strictly in (0, 1), got {rate}")
            if rate < previous:
                raise ValueError("true rates must be nondecreasing in dose")
            previous = rate
        implied = max(
            (i + 1 for i, rate in enumerate(self.true_rates) if rate <= self.phi),
            default=0,
        )
        if self.true_mtd != implied:
            raise ValueError(
                f"true_mtd {self.true_mtd} contradicts the rates (expected {implied})"
            )


def scenario_gen(num_doses: int, phi: float, rng: np.random.Generator) -> Scenario:
    """Random monotone profile: sorted uniform draws on (0, 2 * phi).

    Requires phi below one half so the draws stay inside the unit interval.
    """
    if num_doses < 1:
        raise ValueError(f"need at least one dose, got {num_doses}")
    validate_rate(phi)
    if phi >= 0.5:
        raise ValueError(
            f"scenario generation needs a target below 0.5 (draws span (0, 2*phi)), got {phi}"
        )
    rates = rng.uniform(0.0, 2.0 * phi, num_doses)
    rates.sort()
    true_mtd = int(np.searchsorted(rates, phi, side="right"))
    return Scenario(tuple(rates.tolist()), phi, true_mtd)


@dataclass(frozen=True)
class StudyConfig:
    design: DesignSpec
    num_doses: int
    phi: float
    n_trials: int
    seed: int = 0
    cohort_size: int = 3
    max_cohorts: int | None = None  # defaults to two cohorts per dose

    def __post_init__(self) -> None:
        if self.num_doses < 1:
            raise ValueError(f"need at least one dose, got {self.num_doses}")
        if self.cohort_size < 1:
            raise ValueError(f"cohort size must be >= 1, got {self.cohort_size}")
        if self.n_trials < 1:
            raise ValueError(f"need at least one trial, got {self.n_trials}")
        if self.max_cohorts is not None and self.max_cohorts < 1:
            raise ValueError(f"max cohorts must be >= 1, got {self.max_cohorts}")
        validate_rate(self.phi)

    @property
    def resolved_max_cohorts(self) -> int:
        return self.max_cohorts if self.max_cohorts is not None else 2 * self.num_doses


@dataclass(frozen=True)
class TrialState:
    """Complete state of an in-progress trial."""

    num_doses: int
    current_dose: int  # 1-based
    per_dose: tuple[DoseData, ...]
    eliminated_at_or_above: int | None = None
    cohorts_treated: int = 0
    stopped: bool = False

    @classmethod
    def fresh(cls, num_doses: int) -> "TrialState":
        if num_doses < 1:
            raise ValueError(f"need at least one dose, got {num_doses}")
        return cls(num_doses, 1, tuple(DoseData(0, 0) for _ in range(num_doses)))


@dataclass(frozen=True)
class StepOutcome:
    """What one recorded cohort produced: the decision, the evidence behind
    it, and where the trial goes next."""

    decision: TransitionDecision
    glr: GlrValue  # single-dose evidence at the dose just treated
    joint_glr: GlrValue | None  # joint evidence, for joint-likelihood designs
    dose_treated: int
    next_dose: int
    stopped: bool


def decide_single(spec: DesignSpec, phi: float, n: int, x: int) -> Action:
    """The transition action a design takes on accumulated counts at one dose.

    For the joint-likelihood design this is its single-dose restriction, used
    for tabulation; live decisions come from the joint rule in step().
    """
    if spec.kind in _GLR_KINDS:
        return transition_decision(glr_single(DoseData(n, x), phi), spec.cutoffs()).action
    if spec.kind is DesignKind.BOIN:
        return decision_from_boundaries(boin_boundaries(phi, spec.boin_params(phi)), x / n)
    ei = spec.equivalence_interval(phi)
    if spec.kind is DesignKind.TEQR:
        return teqr_decision(DoseData(n, x), ei).action
    if spec.kind is DesignKind.I3PLUS3:
        return i3plus3_decision(DoseData(n, x), ei).action
    if spec.kind is DesignKind.MTPI:
        return mtpi_decision(DoseData(n, x), phi, ei).action
    raise ValueError(f"unhandled design kind {spec.kind}")


def check_elimination(spec: DesignSpec, phi: float, n: int, x: int) -> bool:
    """Overdose-control check on accumulated counts at one dose.

    Inactive until the dose has at least three patients.  Likelihood designs
    use the decisive-evidence ratio; the others use the uniform-prior
    posterior tail.
    """
    if n < _ELIMINATION_MIN_N:
        return False
    if spec.kind in _GLR_KINDS:
        return eliminate_glr(DoseData(n, x), phi)
    return beta_tail_exceeds(DoseData(n, x), phi, ELIMINATION_POSTERIOR_THRESHOLD)


def step(
    state: TrialState,
    spec: DesignSpec,
    phi: float,
    dlt_count: int,
    cohort_size: int = 3,
    max_cohorts: int | None = None,
) -> tuple[TrialState, StepOutcome]:
    """Record one cohort at the current dose and apply the transition rule.

    Elimination removes the current dose and everything above it and forces
    de-escalation; the trial stops when the lowest dose is eliminated or the
    cohort budget is exhausted.  Escalation is clamped below eliminated or
    nonexistent doses, and de-escalation at the lowest dose becomes a stay.
    """
    if state.stopped:
        raise TrialStoppedError("cannot record a cohort on a stopped trial")
    if cohort_size < 1:
        raise ValueError(f"cohort size must be >= 1, got {cohort_size}")
    if not 0 <= dlt_count <= cohort_size:
        raise ValueError(f"DLT count must lie in 0..{cohort_size}, got {dlt_count}")
    validate_rate(phi)

    dose = state.current_dose
    index = dose - 1
    old = state.per_dose[index]
    updated = DoseData(old.n + cohort_size, old.x + dlt_count)
    per_dose = state.per_dose[:index] + (updated,) + state.per_dose[index + 1 :]

    glr = glr_single(updated, phi)
    joint: GlrValue | None = None
    if spec.kind is DesignKind.GLR_ISO:
        joint = GlrValue.from_log(
            _log_glr_iso_counts(
                [d.n for d in per_dose], [d.x for d in per_dose], index, phi
            )
        )
        action = transition_decision(joint, spec.cutoffs()).action
    else:
        action = decide_single(spec, phi, updated.n, updated.x)

    eliminated = check_elimination(spec, phi, updated.n, updated.x)
    elim_bound = state.eliminated_at_or_above
    if eliminated:
        elim_bound = dose if elim_bound is None else min(elim_bound, dose)
        decision = TransitionDecision(Action.DE_ESCALATE, eliminate_current=True)
    else:
        decision = TransitionDecision(action)

    top = state.num_doses if elim_bound is None else elim_bound - 1
    stopped = False
    if decision.eliminate_current and dose == 1:
        next_dose = 1
        stopped = True
    elif decision.action is Action.ESCALATE:
        next_dose = min(dose + 1, top)
    elif decision.action is Action.DE_ESCALATE:
        next_dose = max(dose - 1, 1)
    else:
        next_dose = dose

    cohorts = state.cohorts_treated + 1
    if max_cohorts is not None and cohorts >= max_cohorts:
        stopped = True

    new_state = TrialState(
        num_doses=state.num_doses,
        current_dose=next_dose,
        per_dose=per_dose,
        eliminated_at_or_above=elim_bound,
        cohorts_treated=cohorts,
        stopped=stopped,
    )
    return new_state, StepOutcome(decision, glr, joint, dose, next_dose, stopped)


@dataclass(frozen=True)
class TrialRecord:
    """One simulated trial: the cohort path, final counts and estimates."""

    scenario: Scenario
    cohorts: tuple[tuple[int, int], ...]  # (dose, dlt_count) per cohort
    per_dose: tuple[DoseData, ...]
    estimated_mtd: int
    estimated_mtd_untried_rule: int  # alternate rule: untried gaps may qualify
    stopped_all_toxic: bool
    n_treated: int
    n_over_treated: int


@dataclass(frozen=True)
class StudyMetrics:
    """Operating characteristics aggregated over a study's trials."""

    pct_mtd: float
    pct_ot: float  # over-treated patients pooled over all patients
    n_ave: float
    n_trials: int
    pct_ot_trial_mean: float  # sensitivity variant: average of per-trial shares
    pct_mtd_untried_rule: float


# ---------------------------------------------------------------------------
# Fast per-study decision tables.
#
# For every design except the joint-likelihood one, the decision and the
# elimination check depend only on the accumulated (n, x) at the current
# dose, so a study can tabulate them once for every reachable state.

_ACTION_CODE = {Action.ESCALATE: 1, Action.STAY: 0, Action.DE_ESCALATE: -1}

_tables_cache: dict = {}


def _decision_tables(
    spec: DesignSpec, phi: float, cohort_size: int, max_cohorts: int
) -> tuple[list[list[int]] | None, list[list[bool]]]:
    key = (spec, phi, cohort_size, max_cohorts)
    cached = _tables_cache.get(key)
    if cached is not None:
        return cached
    decisions: list[list[int]] | None = None
    if spec.kind is not DesignKind.GLR_ISO:
        decisions = []
        for k in range(1, max_cohorts + 1):
            n = k * cohort_size
            decisions.append(
                [_ACTION_CODE[decide_single(spec, phi, n, x)] for x in range(n + 1)]
            )
    eliminations = []
    for k in range(1, max_cohorts + 1):
        n = k * cohort_size
        eliminations.append(
            [check_elimination(spec, phi, n, x) for x in range(n + 1)]
        )
    _tables_cache[key] = (decisions, eliminations)
    return decisions, eliminations


def run_trial(
    config: StudyConfig, scenario: Scenario, rng: np.random.Generator
) -> TrialRecord:
    """Simulate one complete trial under the given scenario.

    Starts at the lowest dose; each cohort's DLT count is binomial in the
    dose's true rate; ends on lowest-dose elimination or cohort exhaustion,
    then estimates the MTD from all accumulated data.
    """
    if len(scenario.true_rates) != config.num_doses:
        raise ValueError(
            f"scenario has {len(scenario.true_rates)} doses, config expects "
            f"{config.num_doses}"
        )
    spec = config.design
    phi = config.phi
    cohort = config.cohort_size
    max_cohorts = config.resolved_max_cohorts
    num_doses = config.num_doses
    decisions, eliminations = _decision_tables(spec, phi, cohort, max_cohorts)
    joint = spec.kind is DesignKind.GLR_ISO

    # One uniform per potential patient slot; summing threshold crossings per
    # cohort gives the binomial draw while keeping the stream layout fixed.
    draws = (
        rng.random((max_cohorts, cohort, num_doses))
        < np.asarray(scenario.true_rates)
    ).sum(axis=1).tolist()

    ns = [0] * num_doses
    xs = [0] * num_doses
    dose = 0  # 0-based during the loop
    elim_at = num_doses  # first eliminated 0-based index; num_doses = none
    treated = 0
    over = 0
    true_mtd = scenario.true_mtd
    cohorts: list[tuple[int, int]] = []
    stopped_all_toxic = False

    for m in range(max_cohorts):
        y = draws[m][dose]
        ns[dose] += cohort
        xs[dose] += y
        treated += cohort
        if dose + 1 > true_mtd:
            over += cohort
        cohorts.append((dose + 1, y))

        k = ns[dose] // cohort - 1
        n_at = ns[dose]
        x_at = xs[dose]
        if eliminations[k][x_at]:
            elim_at = dose
            if dose == 0:
                stopped_all_toxic = True
                break
            dose -= 1
            continue
        if joint:
            log_joint = _log_glr_iso_counts(ns, xs, dose, phi)
            if log_joint >= math.log(spec.k1):
                code = 1
            elif log_joint <= -math.log(spec.k2):
                code = -1
            else:
                code = 0
        else:
            code = decisions[k][x_at]
        if code == 1:
            if dose + 1 < min(num_doses, elim_at):
                dose += 1
        elif code == -1:
            if dose > 0:
                dose -= 1

    per_dose = tuple(DoseData(n, x) for n, x in zip(ns, xs))
    if stopped_all_toxic:
        est = est_untried = 0
    else:
        est = estimate_mtd(per_dose, phi)
        est_untried = estimate_mtd(per_dose, phi, include_untried_gaps=True)
    return TrialRecord(
        scenario=scenario,
        cohorts=tuple(cohorts),
        per_dose=per_dose,
        estimated_mtd=est,
        estimated_mtd_untried_rule=est_untried,
        stopped_all_toxic=stopped_all_toxic,
        n_treated=treated,
        n_over_treated=over,
    )


def _trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial_index])


def _simulate_range(config: StudyConfig, start: int, stop: int) -> tuple:
    matches = 0
    matches_untried = 0
    treated = 0
    over = 0
    ot_share_sum = 0.0
    for i in range(start, stop):
        rng = _trial_rng(config.seed, i)
        scenario = scenario_gen(config.num_doses, config.phi, rng)
        record = run_trial(config, scenario, rng)
        if record.estimated_mtd == scenario.true_mtd:
            matches += 1
        if record.estimated_mtd_untried_rule == scenario.true_mtd:
            matches_untried += 1
        treated += record.n_treated
        over += record.n_over_treated
        ot_share_sum += record.n_over_treated / record.n_treated
    return matches, matches_untried, treated, over, ot_share_sum


def run_study(config: StudyConfig, n_jobs: int = 1) -> StudyMetrics:
    """Monte Carlo operating characteristics over freshly drawn scenarios.

    Deterministic for a fixed seed: results do not depend on n_jobs or on
    how the trial range is chunked.
    """
    n = config.n_trials
    if n_jobs is None or n_jobs < 1:
        n_jobs = 1
    if n_jobs == 1:
        parts = [_simulate_range(config, 0, n)]
    else:
        chunk = max(1, math.ceil(n / (n_jobs * 4)))
        ranges = [(s, min(s + chunk, n)) for s in range(0, n, chunk)]
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(
                pool.map(_simulate_range, [config] * len(ranges), *zip(*ranges))
            )
    matches = sum(p[0] for p in parts)
    matches_untried = sum(p[1] for p in parts)
    treated = sum(p[2] for p in parts)
    over = sum(p[3] for p in parts)
    ot_share_sum = math.fsum(p[4] for p in parts)
    return StudyMetrics(
        pct_mtd=100.0 * matches / n,
        pct_ot=100.0 * over / treated,
        n_ave=treated / n,
        n_trials=n,
        pct_ot_trial_mean=100.0 * ot_share_sum / n,
        pct_mtd_untried_rule=100.0 * matches_untried / n,
    )

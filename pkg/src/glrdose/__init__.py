"""glrdose: likelihood-evidence toolkit for dose-finding interval designs.

Measures the evidence in accumulating DLT data with generalized likelihood
ratios, expresses the classical interval designs (BOIN, TEQR, mTPI, i3+3,
3+3) in common evidence units, simulates operating characteristics, and
supports live trial conduct through a CLI and an HTTP service.
"""

from .designs import (
    BoinParams,
    DecisionBoundaries,
    EffectiveK,
    EquivalenceInterval,
    KRange,
    boin_boundaries,
    decision_from_boundaries,
    default_boin_params,
    default_equivalence_interval,
    effective_k,
    i3plus3_boundaries,
    i3plus3_decision,
    mtpi_boundaries,
    mtpi_decision,
    teqr_boundaries,
    teqr_decision,
    three_plus_three_decision,
    three_plus_three_k_ranges,
)
from .engine import (
    DesignKind,
    DesignSpec,
    Scenario,
    StepOutcome,
    StudyConfig,
    StudyMetrics,
    TrialRecord,
    TrialState,
    TrialStoppedError,
    check_elimination,
    decide_single,
    run_study,
    run_trial,
    scenario_gen,
    step,
)
from .evidence import (
    ELIMINATION_GLR_CUTOFF,
    Action,
    DoseData,
    EvidenceCutoffs,
    GlrValue,
    TransitionDecision,
    eliminate_glr,
    glr_single,
    log_glr_continuous,
    transition_decision,
)
from .isotonic import (
    Side,
    constrained_sup_loglik,
    estimate_mtd,
    glr_iso,
    joint_loglik,
    pava_mle,
)
from .numerics import beta_tail_exceeds, bisect, reg_inc_beta
from .reports import OutputTable, format_glr

__version__ = "0.1.0"

__all__ = [
    "Action",
    "BoinParams",
    "DecisionBoundaries",
    "DesignKind",
    "DesignSpec",
    "DoseData",
    "EffectiveK",
    "ELIMINATION_GLR_CUTOFF",
    "EquivalenceInterval",
    "EvidenceCutoffs",
    "GlrValue",
    "KRange",
    "OutputTable",
    "Scenario",
    "Side",
    "StepOutcome",
    "StudyConfig",
    "StudyMetrics",
    "TransitionDecision",
    "TrialRecord",
    "TrialState",
    "TrialStoppedError",
    "beta_tail_exceeds",
    "bisect",
    "boin_boundaries",
    "check_elimination",
    "constrained_sup_loglik",
    "decide_single",
    "decision_from_boundaries",
    "default_boin_params",
    "default_equivalence_interval",
    "effective_k",
    "eliminate_glr",
    "estimate_mtd",
    "format_glr",
    "glr_iso",
    "glr_single",
    "i3plus3_boundaries",
    "i3plus3_decision",
    "joint_loglik",
    "log_glr_continuous",
    "mtpi_boundaries",
    "mtpi_decision",
    "pava_mle",
    "reg_inc_beta",
    "run_study",
    "run_trial",
    "scenario_gen",
    "step",
    "teqr_boundaries",
    "teqr_decision",
    "three_plus_three_decision",
    "three_plus_three_k_ranges",
    "transition_decision",
]

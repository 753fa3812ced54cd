"""Tabular outputs: evidence tables, transition tables, design comparisons,
figure data series, and study summaries.

Tables are small header+rows containers that render to CSV, JSON or aligned
text.  Cells are formatted at build time (default: two decimals for evidence
quantities, one for operating characteristics) so that emitted CSV
round-trips exactly as printed.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .designs import (
    EquivalenceInterval,
    boin_boundaries,
    default_equivalence_interval,
    effective_k,
    i3plus3_boundaries,
    mtpi_boundaries,
    teqr_boundaries,
    three_plus_three_k_ranges,
)
from .engine import (
    Action,
    DesignKind,
    DesignSpec,
    StudyConfig,
    check_elimination,
    decide_single,
    run_study,
    scenario_gen,
)
from .evidence import (
    DoseData,
    EvidenceCutoffs,
    glr_single,
    log_glr_continuous,
    transition_decision,
)

__all__ = [
    "OutputTable",
    "format_glr",
    "glr_report",
    "glr_table",
    "decision_table",
    "effective_k_table",
    "log_glr_curve_data",
    "scenario_sample_data",
    "study_grid",
    "study_grid_table",
]

RECIPROCAL_FLOOR = 0.01  # below this a ratio prints as "<1/100"

_INTERVAL_DESIGNS = ("boin", "teqr", "mtpi", "i3plus3")


@dataclass
class OutputTable:
    headers: list[str]
    rows: list[tuple] = field(default_factory=list)

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.headers):
                raise ValueError(
                    f"row arity {len(row)} does not match {len(self.headers)} headers"
                )

    def append(self, *cells) -> None:
        if len(cells) != len(self.headers):
            raise ValueError(
                f"row arity {len(cells)} does not match {len(self.headers)} headers"
            )
        self.rows.append(tuple(cells))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.headers)
        writer.writerows(self.rows)
        return buf.getvalue()

    def to_json(self) -> str:
        records = [dict(zip(self.headers, row)) for row in self.rows]
        return json.dumps(records, indent=2) + "\n"

    def to_text(self) -> str:
        cells = [self.headers] + [[str(c) for c in row] for row in self.rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(self.headers))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"

    def render(self, fmt: str = "text") -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        if fmt == "text":
            return self.to_text()
        raise ValueError(f"unknown output format: {fmt!r}")


def format_glr(value: float, decimals: int = 2) -> str:
    """Tabular display convention for likelihood ratios: values below one are
    shown as reciprocals ("1/3.16"), and decisively small ones as "<1/100"."""
    if value <= 0.0:
        raise ValueError(f"likelihood ratio must be positive, got {value}")
    if value < RECIPROCAL_FLOOR:
        return f"<1/{1.0 / RECIPROCAL_FLOOR:.0f}"
    if value < 1.0:
        return f"1/{1.0 / value:.{decimals}f}"
    return f"{value:.{decimals}f}"


def glr_report(
    n: int,
    x: int,
    phi: float,
    k1: float | None = None,
    k2: float | None = None,
    decimals: int = 2,
) -> OutputTable:
    """Single-line evidence report, with a decision when cutoffs are given."""
    glr = glr_single(DoseData(n, x), phi)
    headers = ["n", "x", "phi", "glr", "log_glr", "display"]
    row = [n, x, phi, round(glr.value, 6), round(glr.log_value, 6), format_glr(glr.value, decimals)]
    if k1 is not None and k2 is not None:
        headers.append("decision")
        row.append(transition_decision(glr, EvidenceCutoffs(k1, k2)).action.value)
    return OutputTable(headers, [tuple(row)])


def glr_table(phi: float, n_min: int = 3, n_max: int = 6, decimals: int = 2) -> OutputTable:
    """Evidence for every (n, x) outcome grid at one target rate."""
    if not 1 <= n_min <= n_max <= 50:
        raise ValueError(f"need 1 <= n_min <= n_max <= 50, got ({n_min}, {n_max})")
    table = OutputTable(["n", "x", "glr", "display"])
    for n in range(n_min, n_max + 1):
        for x in range(n + 1):
            glr = glr_single(DoseData(n, x), phi)
            table.append(n, x, round(glr.value, 6), format_glr(glr.value, decimals))
    return table


def decision_table(
    spec: DesignSpec | None,
    phi: float,
    n_max: int = 12,
    k1: float | None = None,
    k2: float | None = None,
) -> OutputTable:
    """Pre-tabulated transitions for every sample size up to n_max.

    Columns give the largest DLT count that still escalates, the stay range,
    and the smallest counts that de-escalate and that eliminate the dose;
    blank cells mean the region is empty at that n.  Pass either a design
    spec or explicit evidence cutoffs.
    """
    if spec is None:
        if k1 is None or k2 is None:
            raise ValueError("pass a design spec or both k1 and k2")
        spec = DesignSpec.glr_sd(k1, k2)
    if not 1 <= n_max <= 50:
        raise ValueError(f"need 1 <= n_max <= 50, got {n_max}")
    table = OutputTable(
        ["n", "escalate_max_x", "stay_min_x", "stay_max_x", "deescalate_min_x", "eliminate_min_x"]
    )
    for n in range(1, n_max + 1):
        actions = [decide_single(spec, phi, n, x) for x in range(n + 1)]
        esc = [x for x, a in enumerate(actions) if a is Action.ESCALATE]
        stay = [x for x, a in enumerate(actions) if a is Action.STAY]
        deesc = [x for x, a in enumerate(actions) if a is Action.DE_ESCALATE]
        elim = [x for x in range(n + 1) if check_elimination(spec, phi, n, x)]
        table.append(
            n,
            esc[-1] if esc else "",
            stay[0] if stay else "",
            stay[-1] if stay else "",
            deesc[0] if deesc else "",
            elim[0] if elim else "",
        )
    return table


def _design_boundaries(design: str, n: int, phi: float, ei: EquivalenceInterval):
    if design == "boin":
        return boin_boundaries(phi)
    if design == "teqr":
        return teqr_boundaries(ei)
    if design == "mtpi":
        return mtpi_boundaries(n, phi, ei)
    if design == "i3plus3":
        return i3plus3_boundaries(n, ei)
    raise ValueError(f"unknown design: {design!r}")


def effective_k_table(
    design: str,
    phi: float,
    n_values: tuple[int, ...] = (3, 4, 5, 6),
    decimals: int = 2,
) -> OutputTable:
    """Effective evidence cut-points of a named design over sample sizes.

    design may be one of boin/teqr/mtpi/i3plus3, "3plus3" for the classical
    rule's compatible ranges, or "all" for everything at once.
    """
    table = OutputTable(["design", "n", "k1", "k2"])
    designs = list(_INTERVAL_DESIGNS) + ["3plus3"] if design == "all" else [design]
    ei = default_equivalence_interval(phi)
    for name in designs:
        if name == "3plus3":
            r = three_plus_three_k_ranges(phi)
            table.append(
                name,
                "3,6",
                f"{r.k1_low:.{decimals}f}-{r.k1_high:.{decimals}f}",
                f"{r.k2_low:.{decimals}f}-{r.k2_high:.{decimals}f}",
            )
            continue
        for n in n_values:
            k = effective_k(_design_boundaries(name, n, phi, ei), n, phi)
            table.append(name, n, f"{k.k1:.{decimals}f}", f"{k.k2:.{decimals}f}")
    return table


def log_glr_curve_data(
    phi: float = 0.25, ns: tuple[int, ...] = (3, 6), points: int = 201
) -> OutputTable:
    """Log evidence as a function of the observed rate, one series per n."""
    if points < 2:
        raise ValueError(f"need at least two grid points, got {points}")
    headers = ["p_hat"] + [f"log_glr_n{n}" for n in ns]
    table = OutputTable(headers)
    for p_hat in np.linspace(0.0, 1.0, points):
        p = float(p_hat)
        table.append(round(p, 10), *(round(log_glr_continuous(p, n, phi), 10) for n in ns))
    return table


def scenario_sample_data(
    num_doses: int = 6, phi: float = 0.25, n_sets: int = 10, seed: int = 0
) -> OutputTable:
    """Seeded sample of random monotone toxicity profiles, in long format."""
    table = OutputTable(["set", "dose", "true_rate"])
    for k in range(n_sets):
        rng = np.random.default_rng([seed, k])
        scenario = scenario_gen(num_doses, phi, rng)
        for dose, rate in enumerate(scenario.true_rates, start=1):
            table.append(k + 1, dose, round(rate, 10))
    return table


def study_grid(
    designs: list[DesignSpec],
    doses: list[int],
    phis: list[float],
    n_trials: int,
    seed: int = 0,
    cohort_size: int = 3,
    n_jobs: int = 1,
):
    """Run a study for every design x dose-count x target combination.

    Yields (config, metrics) pairs in a fixed order.  Every cell uses the
    same base seed, so designs face identical scenario and outcome streams
    (common random numbers).
    """
    for num_doses in doses:
        for spec in designs:
            for phi in phis:
                config = StudyConfig(
                    design=spec,
                    num_doses=num_doses,
                    phi=phi,
                    n_trials=n_trials,
                    seed=seed,
                    cohort_size=cohort_size,
                )
                yield config, run_study(config, n_jobs=n_jobs)


def study_grid_table(
    designs: list[DesignSpec],
    doses: list[int],
    phis: list[float],
    n_trials: int,
    seed: int = 0,
    cohort_size: int = 3,
    n_jobs: int = 1,
    decimals: int = 1,
) -> OutputTable:
    """Operating characteristics table over a design/dose/target grid."""
    table = OutputTable(
        ["D", "design", "k1", "k2", "phi", "pct_mtd", "pct_ot", "n_ave"]
    )
    for config, metrics in study_grid(
        designs, doses, phis, n_trials, seed, cohort_size, n_jobs
    ):
        spec = config.design
        table.append(
            config.num_doses,
            spec.kind.value,
            "" if spec.k1 is None else f"{spec.k1:g}",
            "" if spec.k2 is None else f"{spec.k2:g}",
            config.phi,
            f"{metrics.pct_mtd:.{decimals}f}",
            f"{metrics.pct_ot:.{decimals}f}",
            f"{metrics.n_ave:.{decimals}f}",
        )
    return table

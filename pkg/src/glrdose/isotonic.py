"""Joint toxicity inference across doses under a monotone dose-rate model.

True DLT rates are assumed nondecreasing in dose.  The constrained maximum
likelihood estimate is the weighted isotonic regression of the observed
rates, computed by pool-adjacent-violators with patient counts as weights
(exact for binomial likelihoods, which are an exponential family).

Hypothesis-constrained maxima cap or floor one dose's rate at the target.
Because the feasible set is convex and the log likelihood concave, an active
bound pins the constrained dose exactly at the target; the remaining doses
then split into an independent head (capped above) and tail (floored below),
each solvable by pool-adjacent-violators followed by a constant-bound clip.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from enum import Enum
from typing import Sequence

from .evidence import DoseData, GlrValue, validate_rate

__all__ = [
    "Side",
    "TrialData",
    "joint_loglik",
    "pava_mle",
    "constrained_sup_loglik",
    "glr_iso",
    "estimate_mtd",
]

TrialData = Sequence[DoseData]  # per-dose outcomes in escalation order


class Side(Enum):
    """Which half of the rate axis a constrained maximization is taken over."""

    AT_MOST = "at-most"
    AT_LEAST = "at-least"


def _binom_loglik_term(n: int, x: int, p: float) -> float:
    total = 0.0
    if x > 0:
        if p <= 0.0:
            return -math.inf
        total += x * math.log(p)
    if n - x > 0:
        if p >= 1.0:
            return -math.inf
        total += (n - x) * math.log(1.0 - p)
    return total


def joint_loglik(rates: Sequence[float], data: TrialData) -> float:
    """Sum of per-dose binomial log likelihoods.

    Returns -inf when a degenerate rate (0 or 1) contradicts the observed
    counts; doses with no patients contribute nothing.
    """
    if len(rates) != len(data):
        raise ValueError(
            f"got {len(rates)} rates for {len(data)} doses; lengths must match"
        )
    return sum(_binom_loglik_term(d.n, d.x, p) for p, d in zip(rates, data))


def _pava(values: list[float], weights: list[float]) -> list[float]:
    # Weighted pool-adjacent-violators; exact pooling by weighted means.
    blocks: list[list[float]] = []  # [weighted sum, weight, count]
    for v, w in zip(values, weights):
        s, wt, cnt = v * w, w, 1
        while blocks and blocks[-1][0] * wt > s * blocks[-1][1]:
            ps, pw, pc = blocks.pop()
            s += ps
            wt += pw
            cnt += pc
        blocks.append([s, wt, cnt])
    fitted: list[float] = []
    for s, wt, cnt in blocks:
        fitted.extend([s / wt] * cnt)
    return fitted


def _tried_indices(ns: Sequence[int]) -> list[int]:
    return [i for i, n in enumerate(ns) if n > 0]


def _pava_counts(ns: Sequence[int], xs: Sequence[int], tried: list[int]) -> list[float]:
    return _pava([xs[i] / ns[i] for i in tried], [float(ns[i]) for i in tried])


def _fill_untried(
    fitted: list[float], tried: list[int], num_doses: int
) -> list[float]:
    # Untried doses inherit the nearest treated dose below (or the first
    # treated value); this keeps the report monotone without touching the
    # likelihood.
    out: list[float] = []
    current = fitted[0]
    pos = 0
    for i in range(num_doses):
        if pos < len(tried) and tried[pos] == i:
            current = fitted[pos]
            pos += 1
        out.append(current)
    return out


def pava_mle(data: TrialData) -> list[float]:
    """Monotone maximum-likelihood rates: weighted isotonic regression of the
    observed per-dose rates with patient counts as weights."""
    if not data:
        raise ValueError("at least one dose is required")
    ns = [d.n for d in data]
    xs = [d.x for d in data]
    tried = _tried_indices(ns)
    if not tried:
        raise ValueError("no treated patients at any dose")
    return _fill_untried(_pava_counts(ns, xs, tried), tried, len(data))


def _sup_loglik_counts(
    ns: Sequence[int], xs: Sequence[int], dose_index: int, phi: float, at_most: bool
) -> float:
    """Constrained supremum on parallel count arrays; dose_index is 0-based."""
    tried = _tried_indices(ns)
    if not tried:
        raise ValueError("no treated patients at any dose")
    fitted = _pava_counts(ns, xs, tried)

    if at_most:
        # The constraint caps every treated dose at or below dose_index.
        pos = bisect_right(tried, dose_index) - 1
        active = pos >= 0 and fitted[pos] > phi
    else:
        # The constraint floors every treated dose at or above dose_index.
        pos = bisect_left(tried, dose_index)
        active = pos < len(tried) and fitted[pos] < phi

    if not active:
        return sum(
            _binom_loglik_term(ns[i], xs[i], p) for i, p in zip(tried, fitted)
        )

    # Bound is active: the nearest constrained treated dose sits exactly at
    # the target; doses below it are capped there, doses above floored there.
    head = tried[:pos]
    tail = tried[pos + 1 :]
    anchor = tried[pos]
    total = _binom_loglik_term(ns[anchor], xs[anchor], phi)
    if head:
        for i, p in zip(head, _pava_counts(ns, xs, head)):
            total += _binom_loglik_term(ns[i], xs[i], min(p, phi))
    if tail:
        for i, p in zip(tail, _pava_counts(ns, xs, tail)):
            total += _binom_loglik_term(ns[i], xs[i], max(p, phi))
    return total


def _check_dose_index(data: TrialData, dose: int) -> int:
    if not 1 <= dose <= len(data):
        raise ValueError(f"dose must lie in 1..{len(data)}, got {dose}")
    return dose - 1


def constrained_sup_loglik(
    data: TrialData, dose: int, phi: float, side: Side
) -> float:
    """Largest joint log likelihood over monotone rates with the given dose
    (1-based) capped at the target (AT_MOST) or floored there (AT_LEAST)."""
    index = _check_dose_index(data, dose)
    validate_rate(phi)
    ns = [d.n for d in data]
    xs = [d.x for d in data]
    return _sup_loglik_counts(ns, xs, index, phi, side is Side.AT_MOST)


def _log_glr_iso_counts(
    ns: Sequence[int], xs: Sequence[int], dose_index: int, phi: float
) -> float:
    return _sup_loglik_counts(ns, xs, dose_index, phi, True) - _sup_loglik_counts(
        ns, xs, dose_index, phi, False
    )


def glr_iso(data: TrialData, dose: int, phi: float) -> GlrValue:
    """Joint-likelihood evidence that the given dose's rate is at or below the
    target, borrowing strength across doses through monotonicity.

    Reduces exactly to the single-dose ratio when only one dose has data.
    """
    index = _check_dose_index(data, dose)
    validate_rate(phi)
    if data[index].n < 1:
        raise ValueError(f"no treated patients at dose {dose}")
    ns = [d.n for d in data]
    xs = [d.x for d in data]
    return GlrValue.from_log(_log_glr_iso_counts(ns, xs, index, phi))


def estimate_mtd(data: TrialData, phi: float, include_untried_gaps: bool = False) -> int:
    """Highest dose whose monotone-MLE rate stays at or below the target.

    Returns the 1-based dose index, or 0 when no dose qualifies.  By default
    only doses that treated patients are eligible; with include_untried_gaps,
    untried doses below the highest treated one may qualify through their
    interpolated fit.  Doses above the highest treated dose never qualify.
    """
    validate_rate(phi)
    ns = [d.n for d in data]
    xs = [d.x for d in data]
    tried = _tried_indices(ns)
    if not tried:
        raise ValueError("no treated patients at any dose")
    fitted = _fill_untried(_pava_counts(ns, xs, tried), tried, len(data))
    if include_untried_gaps:
        eligible = range(tried[-1] + 1)
    else:
        eligible = tried
    best = 0
    for i in eligible:
        if fitted[i] <= phi:
            best = i + 1
    return best

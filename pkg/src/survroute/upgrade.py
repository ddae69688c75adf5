"""Budgeted reliability upgrades over a set of links.

Two continuous upgrade models for links with failure probabilities p_e:

* additive — spend u_e probability units, success becomes 1 - p_e + u_e,
  capped at 1 (u_e <= p_e).  Maximizing the product of successes is the
  classic water-filling problem: pour budget into the worst links until
  their post-upgrade success levels meet at a common waterline 1/lambda.
* multiplicative — scale success by (1 + u_e), capped at 1
  (u_e <= p_e/(1-p_e)).  The log-objective sum(ln(1+u_e)) has identical
  marginals for every link, so the optimum is an equal split — except that
  links with small caps (the already-reliable ones) saturate first and drop
  out, leaving the rest to share the remainder equally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .critical import CriticalCandidateSet, iawspl
from .network import Network

BUDGET_TOL = 1e-12


@dataclass(frozen=True)
class UpgradeVector:
    """Per-link upgrade amounts plus whatever budget could not be spent
    (nonzero only when every link saturated).  ``water_level`` carries the
    common post-upgrade success level of the additive optimum's interior
    links; the multiplicative mode leaves it None."""

    upgrades: tuple[float, ...]
    residual_budget: float
    water_level: float | None = None


def _check_inputs(probs: Sequence[float], budget: float) -> None:
    if budget < 0.0:
        raise ValueError(f"budget must be nonnegative, got {budget}")
    for p in probs:
        if not (0.0 < p < 1.0):
            raise ValueError(f"failure probability {p} outside (0, 1)")


def additive_upgrade(probs: Sequence[float], budget: float) -> UpgradeVector:
    """Water-filling: u_e(lambda) = clamp(1/lambda - (1 - p_e), 0, p_e) with
    lambda tuned so the whole affordable budget is spent."""
    _check_inputs(probs, budget)
    probs = list(probs)
    if not probs:
        return UpgradeVector((), budget, None)
    if budget == 0.0:
        return UpgradeVector(tuple(0.0 for _ in probs), 0.0, None)
    total_caps = sum(probs)
    if budget >= total_caps:
        # Full protection affordable: every link reaches success 1.
        return UpgradeVector(tuple(probs), budget - total_caps, 1.0)

    def spend(lam: float) -> float:
        level = 1.0 / lam
        return sum(min(max(level - (1.0 - p), 0.0), p) for p in probs)

    lo, hi = 1.0, 1.0 / (1.0 - max(probs))
    # spend() decreases monotonically in lambda: spend(lo) = sum(p) > budget
    # here, spend(hi) = 0 <= budget.  Bisect to the 1e-12 region and take the
    # under-spending side so the residual stays nonnegative.
    for _ in range(200):
        if hi - lo <= 1e-15:
            break
        mid = 0.5 * (lo + hi)
        if spend(mid) > budget:
            lo = mid
        else:
            hi = mid
    level = 1.0 / hi
    ups = tuple(min(max(level - (1.0 - p), 0.0), p) for p in probs)
    return UpgradeVector(ups, budget - sum(ups), level)


def multiplicative_upgrade(probs: Sequence[float], budget: float) -> UpgradeVector:
    """Equal split with saturation: shares grow as capped links drop out."""
    _check_inputs(probs, budget)
    probs = list(probs)
    ups = [0.0 for _ in probs]
    if not probs:
        return UpgradeVector((), budget, None)
    caps = [p / (1.0 - p) for p in probs]
    remaining = list(range(len(probs)))
    left = budget
    while remaining:
        share = left / len(remaining)
        # Saturation order: the most reliable remaining link (smallest cap;
        # ties to the lowest index) leaves first.
        tightest = min(remaining, key=lambda i: (probs[i], i))
        if share <= caps[tightest]:
            for i in remaining:
                ups[i] = share
            left = 0.0
            break
        ups[tightest] = caps[tightest]
        left -= caps[tightest]
        remaining.remove(tightest)
    return UpgradeVector(tuple(ups), left, None)


def upgraded_factor(probs: Sequence[float], vec: UpgradeVector, mode: str) -> float:
    """Product of post-upgrade success probabilities."""
    if mode == "additive":
        return math.prod(1.0 - p + u for p, u in zip(probs, vec.upgrades))
    if mode == "multiplicative":
        return math.prod(min((1.0 + u) * (1.0 - p), 1.0) for p, u in zip(probs, vec.upgrades))
    raise ValueError(f"mode must be 'additive' or 'multiplicative', got {mode!r}")


def design_pipeline(
    net: Network, source: str, target: str, budget: float, mode: str
) -> tuple[CriticalCandidateSet, UpgradeVector, float]:
    """Find the critical candidate links, upgrade them under the budget, and
    report the resulting survivability factor over that set (1.0 when the
    set is empty)."""
    cands = iawspl(net, source, target)
    probs = [net.link(u, v).fail_prob for u, v in cands.links]
    if mode == "additive":
        vec = additive_upgrade(probs, budget)
    elif mode == "multiplicative":
        vec = multiplicative_upgrade(probs, budget)
    else:
        raise ValueError(f"mode must be 'additive' or 'multiplicative', got {mode!r}")
    return cands, vec, upgraded_factor(probs, vec, mode)

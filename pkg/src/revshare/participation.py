"""Entry decisions: which developers clear their outside option at a given
commission rate, and the participation count N(alpha).

Entry uses a weak inequality (profit >= reservation) so the zero-reservation
boundary case enters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .best_response import BestResponse, solve_effort, solve_effort_policy
from .model import CommissionPolicy, DeveloperProfile, DomainError


@dataclass(frozen=True)
class ParticipationResult:
    entrants: Tuple[str, ...]
    count: int
    entry_profits: Dict[str, float]
    responses: Dict[str, BestResponse]  # entrants only


def developer_profit(profile: DeveloperProfile, response: BestResponse,
                     policy: CommissionPolicy | None = None) -> float:
    """Net profit including the developer's share of any ad revenue."""
    pi = response.net_profit
    if profile.ad_revenue > 0:
        ad_share = policy.ad_share if policy is not None and policy.ad_share else 0.0
        pi += (1.0 - ad_share) * profile.ad_revenue
    return pi


def participate(population: Sequence[DeveloperProfile], alpha: float,
                policy: CommissionPolicy | None = None) -> ParticipationResult:
    """Evaluate entry for every developer at commission rate alpha (or under
    a full policy schedule when one is given)."""
    entrants: List[str] = []
    profits: Dict[str, float] = {}
    responses: Dict[str, BestResponse] = {}
    for profile in sorted(population, key=lambda p: p.id):
        if policy is not None and not policy.is_flat:
            br = solve_effort_policy(profile, policy)
        else:
            br = solve_effort(profile, alpha)
        pi = developer_profit(profile, br, policy)
        if pi >= profile.reservation_profit:
            entrants.append(profile.id)
            profits[profile.id] = pi
            responses[profile.id] = br
    return ParticipationResult(entrants=tuple(entrants), count=len(entrants),
                               entry_profits=profits, responses=responses)


def participation_curve(population: Sequence[DeveloperProfile],
                        alpha_grid: Sequence[float]) -> List[Tuple[float, int]]:
    """N(alpha) over a sorted grid; the curve must be non-increasing under a
    flat commission and is asserted as such."""
    if any(a2 < a1 for a1, a2 in zip(alpha_grid, alpha_grid[1:])):
        raise DomainError("alpha_grid must be sorted ascending")
    if alpha_grid and (alpha_grid[0] < 0 or alpha_grid[-1] > 1):
        raise DomainError("alpha_grid must lie in [0,1]")
    curve = [(a, participate(population, a).count) for a in alpha_grid]
    for (a1, n1), (a2, n2) in zip(curve, curve[1:]):
        if n2 > n1:
            raise AssertionError(
                f"participation increased from N({a1})={n1} to N({a2})={n2}")
    return curve

"""Outer Stackelberg stage: pick the commission rate maximizing platform
profit, anticipating developer best responses and entry.

Profit over alpha can jump where entrants exit, so the search is a dense
coarse grid (global coverage) followed by shrinking-grid refinement around
the best bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from .best_response import BestResponse
from .model import (
    CommissionPolicy,
    DomainError,
    LINEAR_EFFORT,
    PlatformParams,
    QUADRATIC,
)
from .participation import participate



@dataclass(frozen=True)
class EquilibriumReport:
    alpha_star: float
    platform_profit: float
    n_entrants: int
    per_developer: Tuple[Tuple[str, BestResponse], ...]
    diagnostics: dict = field(default_factory=dict)
    analytic_alpha: Optional[float] = None
    degenerate: bool = False


def _effective_policy(policy: Optional[CommissionPolicy],
                      alpha: Optional[float]) -> CommissionPolicy:
    if policy is None:
        policy = CommissionPolicy.flat(alpha if alpha is not None else 0.0)
    if alpha is not None:
        if not policy.is_flat:
            raise DomainError("alpha override applies to flat policies only")
        policy = CommissionPolicy.flat(alpha, ad_share=policy.ad_share,
                                       activity_threshold=policy.activity_threshold)
    return policy


def platform_profit(params: PlatformParams,
                    policy: Optional[CommissionPolicy] = None,
                    alpha: Optional[float] = None) -> float:
    """Total platform profit: commission plus ad share minus serving cost,
    summed over entrants in developer-id order."""
    pol = _effective_policy(policy, alpha)
    result = participate(params.population, pol.rate if pol.is_flat else 0.0,
                         policy=pol)
    by_id = {p.id: p for p in params.population}
    total = 0.0
    for dev_id in result.entrants:
        br = result.responses[dev_id]
        profile = by_id[dev_id]
        if br.usage < pol.activity_threshold:
            commission = 0.0  # below activity threshold: cost absorbed
        else:
            commission = pol.commission(br.gross_revenue)
        ad = (pol.ad_share or 0.0) * profile.ad_revenue
        total += commission + ad - params.marginal_cost * br.usage
    return total


def _canonical_alpha(params: PlatformParams,
                     policy: Optional[CommissionPolicy]) -> Optional[float]:
    """Closed-form optimum for a single linear-revenue/quadratic-cost
    developer with no outside option: alpha* = (1 + c/A)/2."""
    if policy is not None and (not policy.is_flat or policy.ad_share
                               or policy.activity_threshold):
        return None
    if len(params.population) != 1:
        return None
    p = params.population[0]
    if (p.tech.family == LINEAR_EFFORT and p.tech.usage_per_revenue is None
            and p.cost.family == QUADRATIC and p.reservation_profit == 0
            and p.ad_revenue == 0 and params.marginal_cost < p.tech.scale):
        return 0.5 * (1.0 + params.marginal_cost / p.tech.scale)
    return None


def optimize_alpha(params: PlatformParams,
                   policy: Optional[CommissionPolicy] = None,
                   grid_step: float = 1e-3,
                   refine_tol: float = 1e-8) -> EquilibriumReport:
    """Maximize platform profit over flat commission rates in [0, 1].

    Ties between equal-profit optima break toward the smallest alpha. When
    no rate earns a positive profit the report is flagged degenerate and
    carries the argmax anyway.
    """
    if policy is not None and not policy.is_flat:
        raise DomainError("optimize_alpha searches flat rates; evaluate "
                          "degressive schedules with platform_profit directly")

    def profit_at(a: float) -> float:
        return platform_profit(params, policy, alpha=a)

    n = int(round(1.0 / grid_step))
    grid = [i / n for i in range(n + 1)]
    samples = []
    best_a, best_pi = 0.0, -math.inf
    for a in grid:  # ascending, so the first max wins ties toward small alpha
        pi = profit_at(a)
        res = participate(params.population, a,
                          policy=_effective_policy(policy, a))
        samples.append((a, pi, res.count))
        if pi > best_pi:
            best_a, best_pi = a, pi

    # profit can jump where entrants exit, so refine by shrinking grids
    # rather than golden section (which assumes continuity at the peak)
    lo = max(0.0, best_a - grid_step)
    hi = min(1.0, best_a + grid_step)
    alpha_star, pi_star = best_a, best_pi
    iterations = 0
    while hi - lo > refine_tol:
        iterations += 1
        step = (hi - lo) / 16
        for j in range(17):
            a = lo + j * step
            pi = profit_at(a)
            if pi > pi_star or (pi == pi_star and a < alpha_star):
                alpha_star, pi_star = a, pi
        lo = max(lo, alpha_star - step)
        hi = min(hi, alpha_star + step)

    res = participate(params.population, alpha_star,
                      policy=_effective_policy(policy, alpha_star))
    per_dev = tuple((i, res.responses[i]) for i in res.entrants)
    return EquilibriumReport(
        alpha_star=alpha_star,
        platform_profit=pi_star,
        n_entrants=res.count,
        per_developer=per_dev,
        diagnostics={"grid_size": len(grid), "refine_iterations": iterations,
                     "samples": samples},
        analytic_alpha=_canonical_alpha(params, policy),
        degenerate=pi_star <= 0.0,
    )


def profit_curve(params: PlatformParams, alpha_grid: Sequence[float],
                 policy: Optional[CommissionPolicy] = None
                 ) -> List[Tuple[float, float, int]]:
    """(alpha, profit, entrant count) samples for plotting/export."""
    if any(a2 < a1 for a1, a2 in zip(alpha_grid, alpha_grid[1:])):
        raise DomainError("alpha_grid must be sorted ascending")
    out = []
    for a in alpha_grid:
        pi = platform_profit(params, policy, alpha=a)
        n = participate(params.population, a,
                        policy=_effective_policy(policy, a)).count
        out.append((a, pi, n))
    return out


def marginal_decomposition(params: PlatformParams, alpha: float, h: float = 1e-4,
                           reservation_cdf: Optional[Callable[[float], float]] = None
                           ) -> Tuple[float, float]:
    """Split dProfit/dalpha into the extensive (entry) and intensive
    (per-entrant margin) terms by central finite differences.

    With a known reservation-profit distribution the entry derivative uses
    the smoothed expected count instead of raw integer differencing.
    """
    if not (0 < alpha < 1):
        raise DomainError("alpha must be interior for the decomposition")
    if h <= 0 or alpha - h < 0 or alpha + h > 1:
        raise DomainError("step h leaves [0,1]")

    def count_and_margin(a: float) -> Tuple[float, float]:
        res = participate(params.population, a)
        if res.count == 0:
            return 0.0, 0.0
        margin = sum(a * br.gross_revenue - params.marginal_cost * br.usage
                     for br in (res.responses[i] for i in res.entrants))
        return float(res.count), margin / res.count

    def smooth_count(a: float) -> float:
        total = 0.0
        for p in sorted(params.population, key=lambda q: q.id):
            res = participate([p], a)
            pi = res.entry_profits.get(p.id)
            if pi is None:  # non-entrant: recompute unconditional profit
                from .best_response import solve_effort
                pi = solve_effort(p, a).net_profit
            total += reservation_cdf(pi)
        return total

    n_fn = smooth_count if reservation_cdf is not None else (
        lambda a: count_and_margin(a)[0])
    n_mid, m_mid = count_and_margin(alpha)
    if reservation_cdf is not None:
        n_mid = smooth_count(alpha)
    n_prime = (n_fn(alpha + h) - n_fn(alpha - h)) / (2 * h)
    m_prime = (count_and_margin(alpha + h)[1]
               - count_and_margin(alpha - h)[1]) / (2 * h)
    return n_prime * m_mid, n_mid * m_prime

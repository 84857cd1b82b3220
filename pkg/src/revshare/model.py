"""Core market primitives: revenue technologies, effort costs, commission
policies and the platform/developer parameter records.

Everything here is plain validated data plus pointwise evaluation; no
optimization logic lives in this module. All types are frozen dataclasses
and safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

# Revenue families
LINEAR_EFFORT = "linear"
POWER_EFFORT = "power"
LINEAR_DEMAND = "linear_demand"
REVENUE_FAMILIES = (LINEAR_EFFORT, POWER_EFFORT, LINEAR_DEMAND)

# Effort-cost families
QUADRATIC = "quadratic"
POWER_CONVEX = "power_convex"
COST_FAMILIES = (QUADRATIC, POWER_CONVEX)


class DomainError(ValueError):
    """Raised when an argument is outside a function's mathematical domain."""


@dataclass(frozen=True)
class RevenueTechnology:
    """How a developer's effort (and optionally a posted price) turns into
    gross revenue and platform usage.

    Families:
      linear        R = A * e,             q = e
      power         R = A * e**beta,       q = e          (beta in (0,1])
      linear_demand R = p * max(0, a + b*e - d*p), q = usage_per_revenue * R

    ``usage_per_revenue`` may also be set on the effort families to link
    usage to revenue instead of effort.
    """

    family: str
    scale: float = 1.0                      # A
    beta: float = 1.0                       # elasticity, power family
    demand_base: float = 0.0                # a
    demand_quality: float = 0.0             # b
    demand_slope: float = 1.0               # d
    usage_per_revenue: Optional[float] = None  # kappa_q, requests per currency unit

    def __post_init__(self):
        if self.family not in REVENUE_FAMILIES:
            raise DomainError(f"unknown revenue family {self.family!r}")
        if self.scale <= 0:
            raise DomainError("scale must be positive")
        if self.family == POWER_EFFORT and not (0 < self.beta <= 1):
            raise DomainError("beta must be in (0, 1]")
        if self.family == LINEAR_DEMAND:
            if self.demand_base < 0 or self.demand_quality < 0:
                raise DomainError("demand_base and demand_quality must be >= 0")
            if self.demand_slope <= 0:
                raise DomainError("demand_slope must be positive")
            if self.usage_per_revenue is None:
                raise DomainError("linear_demand requires usage_per_revenue")
        if self.usage_per_revenue is not None and self.usage_per_revenue < 0:
            raise DomainError("usage_per_revenue must be >= 0")

    @property
    def needs_price(self) -> bool:
        return self.family == LINEAR_DEMAND


@dataclass(frozen=True)
class EffortCost:
    """Convex cost of effort, zero at zero effort.

    quadratic:     phi(e) = k*e^2 / 2
    power_convex:  phi(e) = k*e^m / m, m >= 2
    """

    family: str = QUADRATIC
    k: float = 1.0
    exponent: float = 2.0

    def __post_init__(self):
        if self.family not in COST_FAMILIES:
            raise DomainError(f"unknown cost family {self.family!r}")
        if self.k <= 0:
            raise DomainError("cost scale k must be positive")
        if self.family == POWER_CONVEX and self.exponent < 2:
            raise DomainError("exponent must be >= 2")


@dataclass(frozen=True)
class DeveloperProfile:
    """One developer: technology, effort cost and outside option."""

    id: str
    tech: RevenueTechnology
    cost: EffortCost
    reservation_profit: float = 0.0
    ad_revenue: float = 0.0  # exogenous per-period ad revenue, shared via ad_share

    def __post_init__(self):
        if not math.isfinite(self.reservation_profit) or self.reservation_profit < 0:
            raise DomainError("reservation_profit must be finite and >= 0")
        if self.ad_revenue < 0:
            raise DomainError("ad_revenue must be >= 0")


@dataclass(frozen=True)
class PlatformParams:
    """Platform-side primitives: per-request serving cost and the developer
    population."""

    marginal_cost: float
    population: Tuple[DeveloperProfile, ...]

    def __init__(self, marginal_cost, population):
        if marginal_cost < 0:
            raise DomainError("marginal_cost must be >= 0")
        object.__setattr__(self, "marginal_cost", float(marginal_cost))
        object.__setattr__(self, "population", tuple(population))

    def is_degenerate_market(self) -> bool:
        """True when no developer can ever generate marginal revenue per
        request above the serving cost. Reported, never raised: sweeps must
        stay total over (alpha, c)."""
        return not any(
            max_marginal_revenue_per_request(p.tech) > self.marginal_cost
            for p in self.population
        )


@dataclass(frozen=True)
class CommissionPolicy:
    """Commission schedule on gross app revenue, plus optional ad-revenue
    share and an activity threshold under which no commission is charged.

    Either ``rate`` (flat) or ``breakpoints`` (degressive marginal bands,
    first threshold must be 0) is set, never both.
    """

    rate: Optional[float] = None
    breakpoints: Optional[Tuple[Tuple[float, float], ...]] = None
    ad_share: Optional[float] = None
    activity_threshold: float = 0.0

    def __post_init__(self):
        if (self.rate is None) == (self.breakpoints is None):
            raise DomainError("exactly one of rate / breakpoints must be set")
        if self.rate is not None and not (0 <= self.rate <= 1):
            raise DomainError("rate out of [0,1]")
        if self.breakpoints is not None:
            object.__setattr__(self, "breakpoints", tuple(
                (float(t), float(r)) for t, r in self.breakpoints))
            bps = self.breakpoints
            if not bps or bps[0][0] != 0:
                raise DomainError("degressive schedule must start at threshold 0")
            for (t1, r1), (t2, r2) in zip(bps, bps[1:]):
                if t2 <= t1:
                    raise DomainError(
                        f"breakpoint thresholds not strictly increasing: {t1} >= {t2}")
            for _, r in bps:
                if not (0 <= r <= 1):
                    raise DomainError("rate out of [0,1]")
        if self.ad_share is not None and not (0 <= self.ad_share <= 1):
            raise DomainError("ad_share out of [0,1]")
        if self.activity_threshold < 0:
            raise DomainError("activity_threshold must be >= 0")

    @staticmethod
    def flat(rate: float, ad_share: Optional[float] = None,
             activity_threshold: float = 0.0) -> "CommissionPolicy":
        return CommissionPolicy(rate=rate, ad_share=ad_share,
                                activity_threshold=activity_threshold)

    @staticmethod
    def degressive(breakpoints, ad_share: Optional[float] = None,
                   activity_threshold: float = 0.0) -> "CommissionPolicy":
        return CommissionPolicy(breakpoints=tuple(breakpoints), ad_share=ad_share,
                                activity_threshold=activity_threshold)

    @property
    def is_flat(self) -> bool:
        return self.rate is not None

    def marginal_rate(self, gross: float) -> float:
        """Marginal commission rate at the given gross revenue level."""
        if self.is_flat:
            return self.rate
        current = self.breakpoints[0][1]
        for threshold, r in self.breakpoints:
            if gross >= threshold:
                current = r
        return current

    def commission(self, gross: float) -> float:
        """Total commission on a gross revenue amount (float path; the
        settlement module owns the exact integer-cent version)."""
        if gross < 0:
            raise DomainError("gross revenue must be >= 0")
        if self.is_flat:
            return self.rate * gross
        total = 0.0
        bps = self.breakpoints
        for i, (threshold, r) in enumerate(bps):
            upper = bps[i + 1][0] if i + 1 < len(bps) else math.inf
            band = min(gross, upper) - threshold
            if band <= 0:
                break
            total += r * band
        return total

    def min_rate(self) -> float:
        return self.rate if self.is_flat else min(r for _, r in self.breakpoints)

    def max_rate(self) -> float:
        return self.rate if self.is_flat else max(r for _, r in self.breakpoints)


# --- Business models (section 5 comparison set) ---

@dataclass(frozen=True)
class RsiModel:
    """Revenue sharing: free infrastructure, commission on app revenue."""
    tag = "rsi"
    policy: CommissionPolicy = field(
        default_factory=lambda: CommissionPolicy.flat(0.25))


@dataclass(frozen=True)
class PayPerTokenModel:
    """Developer pays the platform per request, keeps all app revenue."""
    tag = "pay_per_token"
    token_price: float = 0.0

    def __post_init__(self):
        if self.token_price < 0:
            raise DomainError("token_price must be >= 0")


@dataclass(frozen=True)
class SubscriptionModel:
    """Flat periodic platform fee, unlimited usage."""
    tag = "subscription"
    fee: float = 0.0

    def __post_init__(self):
        if self.fee < 0:
            raise DomainError("fee must be >= 0")


@dataclass(frozen=True)
class FreemiumModel:
    """Free request quota, per-request overage price beyond it."""
    tag = "freemium"
    free_quota: float = 0.0
    overage_price: float = 0.0

    def __post_init__(self):
        if self.free_quota < 0 or self.overage_price < 0:
            raise DomainError("freemium parameters must be >= 0")


@dataclass(frozen=True)
class MarketplaceModel:
    """Store-style commission on revenue; developer also pays own inference."""
    tag = "marketplace"
    commission: float = 0.0
    token_price: float = 0.0

    def __post_init__(self):
        if not (0 <= self.commission <= 1):
            raise DomainError("marketplace commission out of [0,1]")
        if self.token_price < 0:
            raise DomainError("token_price must be >= 0")


@dataclass(frozen=True)
class HybridModel:
    """Developer opts into whichever member model they prefer."""
    tag = "hybrid"
    choices: Tuple = ()

    def __post_init__(self):
        if not self.choices:
            raise DomainError("hybrid choice set must be non-empty")
        object.__setattr__(self, "choices", tuple(self.choices))


BusinessModel = (RsiModel, PayPerTokenModel, SubscriptionModel,
                 FreemiumModel, MarketplaceModel, HybridModel)


# --- Pointwise evaluation ---

def revenue(tech: RevenueTechnology, effort: float,
            price: Optional[float] = None) -> float:
    """Gross revenue at a given effort (and price for the demand family)."""
    if effort < 0:
        raise DomainError("effort must be >= 0")
    if tech.family == LINEAR_EFFORT:
        return tech.scale * effort
    if tech.family == POWER_EFFORT:
        return tech.scale * effort ** tech.beta
    # linear_demand
    if price is None:
        raise DomainError("linear_demand family requires a price")
    if price <= 0:
        raise DomainError("price must be positive")
    demand = tech.demand_base + tech.demand_quality * effort - tech.demand_slope * price
    return price * max(0.0, demand)


def usage(tech: RevenueTechnology, effort: float,
          price: Optional[float] = None) -> float:
    """Request volume generated at a given effort/price."""
    if tech.usage_per_revenue is not None:
        return tech.usage_per_revenue * revenue(tech, effort, price)
    if effort < 0:
        raise DomainError("effort must be >= 0")
    return effort  # q = e for the effort families


def effort_cost(cost: EffortCost, effort: float) -> float:
    """phi(e); zero at zero, strictly increasing and convex."""
    if effort < 0:
        raise DomainError("effort must be >= 0")
    if cost.family == QUADRATIC:
        return 0.5 * cost.k * effort ** 2
    return cost.k * effort ** cost.exponent / cost.exponent


def marginal_effort_cost(cost: EffortCost, effort: float) -> float:
    """phi'(e)."""
    if effort < 0:
        raise DomainError("effort must be >= 0")
    if cost.family == QUADRATIC:
        return cost.k * effort
    return cost.k * effort ** (cost.exponent - 1)


def marginal_revenue_effort(tech: RevenueTechnology, effort: float) -> float:
    """dR/de for the effort families. Returns +inf at e=0 when beta < 1."""
    if effort < 0:
        raise DomainError("effort must be >= 0")
    if tech.family == LINEAR_EFFORT:
        return tech.scale
    if tech.family == POWER_EFFORT:
        if effort == 0:
            return tech.scale if tech.beta == 1 else math.inf
        return tech.scale * tech.beta * effort ** (tech.beta - 1)
    raise DomainError("marginal_revenue_effort: use the reduced-form demand "
                      "derivative for linear_demand")


def max_marginal_revenue_per_request(tech: RevenueTechnology) -> float:
    """Supremum of dR/dq, used only to flag degenerate markets."""
    if tech.usage_per_revenue is not None:
        if tech.usage_per_revenue == 0:
            return math.inf  # zero usage: serving is free, never degenerate
        return 1.0 / tech.usage_per_revenue
    if tech.family == LINEAR_EFFORT:
        return tech.scale
    # power with q=e: dR/dq = A*beta*e^(beta-1), unbounded near 0 for beta<1
    return tech.scale if tech.beta == 1 else math.inf

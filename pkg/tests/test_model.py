import pytest
from hypothesis import given, settings, strategies as st

from revshare.model import (
    CommissionPolicy,
    DeveloperProfile,
    DomainError,
    EffortCost,
    HybridModel,
    PayPerTokenModel,
    PlatformParams,
    RevenueTechnology,
    effort_cost,
    revenue,
    usage,
)


class TestRevenue:
    def test_linear_effort_example(self):
        # the worked example's R = e at e = 1 - 0.6
        tech = RevenueTechnology(family="linear", scale=1.0)
        assert revenue(tech, 0.4) == pytest.approx(0.4, abs=1e-12)

    def test_zero_effort_zero_revenue(self):
        for tech in (RevenueTechnology(family="linear"),
                     RevenueTechnology(family="power", beta=0.5),
                     RevenueTechnology(family="linear_demand", demand_base=0.0,
                                       demand_quality=2.0, demand_slope=1.0,
                                       usage_per_revenue=1.0)):
            price = 1.0 if tech.needs_price else None
            assert revenue(tech, 0.0, price) == 0.0

    def test_power_effort_example(self):
        # 2 * 0.25^0.5, cross-checked by tabulating A*e^beta on a grid
        tech = RevenueTechnology(family="power", scale=2.0, beta=0.5)
        assert revenue(tech, 0.25) == pytest.approx(1.0, abs=1e-12)

    def test_linear_demand(self):
        tech = RevenueTechnology(family="linear_demand", demand_base=10,
                                 demand_quality=2, demand_slope=1,
                                 usage_per_revenue=3.0)
        assert revenue(tech, 1.0, 6.0) == pytest.approx(36.0)
        assert usage(tech, 1.0, 6.0) == pytest.approx(108.0)

    def test_demand_price_required(self):
        tech = RevenueTechnology(family="linear_demand", demand_base=1,
                                 usage_per_revenue=1.0)
        with pytest.raises(DomainError):
            revenue(tech, 1.0)

    def test_negative_effort_rejected(self):
        with pytest.raises(DomainError):
            revenue(RevenueTechnology(family="linear"), -0.1)
        with pytest.raises(DomainError):
            usage(RevenueTechnology(family="linear"), -0.1)

    @given(e1=st.floats(0, 10), e2=st.floats(0, 10),
           beta=st.floats(0.1, 1.0))
    @settings(max_examples=200)
    def test_revenue_monotone_in_effort(self, e1, e2, beta):
        lo, hi = sorted((e1, e2))
        for tech in (RevenueTechnology(family="linear", scale=1.3),
                     RevenueTechnology(family="power", scale=1.3, beta=beta)):
            assert revenue(tech, lo) <= revenue(tech, hi) + 1e-12

    @given(e1=st.floats(0, 10), e2=st.floats(0, 10),
           lam=st.floats(0.01, 0.99), beta=st.floats(0.1, 1.0))
    @settings(max_examples=200)
    def test_power_concavity(self, e1, e2, lam, beta):
        tech = RevenueTechnology(family="power", scale=2.0, beta=beta)
        mid = revenue(tech, lam * e1 + (1 - lam) * e2)
        chord = lam * revenue(tech, e1) + (1 - lam) * revenue(tech, e2)
        assert mid >= chord - 1e-9

    def test_usage_example(self):
        assert usage(RevenueTechnology(family="linear"), 0.4) == 0.4
        assert usage(RevenueTechnology(family="linear"), 0.0) == 0.0


class TestEffortCost:
    def test_quadratic_example(self):
        assert effort_cost(EffortCost(k=1.0), 0.4) == pytest.approx(0.08)

    def test_zero_at_zero(self):
        assert effort_cost(EffortCost(k=3.0), 0.0) == 0.0
        assert effort_cost(EffortCost(family="power_convex", k=2, exponent=3),
                           0.0) == 0.0

    def test_power_convex_example(self):
        c = EffortCost(family="power_convex", k=2.0, exponent=3.0)
        assert effort_cost(c, 1.5) == pytest.approx(2.25)

    def test_negative_effort_rejected(self):
        with pytest.raises(DomainError):
            effort_cost(EffortCost(), -1.0)

    @given(e1=st.floats(0, 10), e2=st.floats(0, 10),
           lam=st.floats(0.01, 0.99), m=st.floats(2.0, 5.0))
    @settings(max_examples=200)
    def test_convexity(self, e1, e2, lam, m):
        for c in (EffortCost(k=1.5),
                  EffortCost(family="power_convex", k=1.5, exponent=m)):
            mid = effort_cost(c, lam * e1 + (1 - lam) * e2)
            chord = lam * effort_cost(c, e1) + (1 - lam) * effort_cost(c, e2)
            assert mid <= chord + 1e-9

    def test_invalid_parameters(self):
        with pytest.raises(DomainError):
            EffortCost(k=0.0)
        with pytest.raises(DomainError):
            EffortCost(family="power_convex", exponent=1.5)
        with pytest.raises(DomainError):
            RevenueTechnology(family="power", beta=1.2)
        with pytest.raises(DomainError):
            RevenueTechnology(family="nope")


class TestCommissionPolicy:
    def test_flat(self):
        p = CommissionPolicy.flat(0.25)
        assert p.commission(100.0) == pytest.approx(25.0)
        assert p.marginal_rate(1e9) == 0.25

    def test_degressive_bands(self):
        p = CommissionPolicy.degressive([(0.0, 0.30), (100.0, 0.20),
                                         (1000.0, 0.10)])
        assert p.commission(50.0) == pytest.approx(15.0)
        assert p.commission(100.0) == pytest.approx(30.0)
        assert p.commission(200.0) == pytest.approx(30.0 + 20.0)
        assert p.marginal_rate(500.0) == 0.20

    def test_breakpoints_must_increase(self):
        with pytest.raises(DomainError):
            CommissionPolicy.degressive([(0.0, 0.3), (100.0, 0.2), (100.0, 0.1)])
        with pytest.raises(DomainError):
            CommissionPolicy.degressive([(10.0, 0.3)])

    def test_rate_bounds(self):
        with pytest.raises(DomainError):
            CommissionPolicy.flat(1.3)
        with pytest.raises(DomainError):
            CommissionPolicy.flat(0.2, ad_share=-0.1)

    @given(g1=st.floats(0, 1e6), g2=st.floats(0, 1e6))
    @settings(max_examples=200)
    def test_degressive_total_nondecreasing(self, g1, g2):
        p = CommissionPolicy.degressive([(0.0, 0.30), (100.0, 0.25),
                                         (500.0, 0.15)])
        lo, hi = sorted((g1, g2))
        assert p.commission(lo) <= p.commission(hi) + 1e-9

    @given(g=st.floats(0, 1e6), eps=st.floats(1e-9, 1.0))
    @settings(max_examples=200)
    def test_degressive_continuity(self, g, eps):
        p = CommissionPolicy.degressive([(0.0, 0.30), (100.0, 0.25),
                                         (500.0, 0.15)])
        assert abs(p.commission(g + eps) - p.commission(g)) <= 0.30 * eps + 1e-9


class TestMarketDegeneracy:
    def test_flagged_not_rejected(self):
        dev = DeveloperProfile(
            id="d", tech=RevenueTechnology(family="linear", scale=0.5),
            cost=EffortCost())
        params = PlatformParams(marginal_cost=2.0, population=[dev])
        assert params.is_degenerate_market()
        viable = PlatformParams(marginal_cost=0.1, population=[dev])
        assert not viable.is_degenerate_market()


class TestBusinessModelValidation:
    def test_negative_fees_rejected(self):
        with pytest.raises(DomainError):
            PayPerTokenModel(token_price=-1.0)

    def test_hybrid_requires_choices(self):
        with pytest.raises(DomainError):
            HybridModel(choices=())

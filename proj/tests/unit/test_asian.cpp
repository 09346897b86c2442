#include <gtest/gtest.h>

#include <cmath>

#include "optpay/asian.hpp"
#include "optpay/cost_efficiency.hpp"
#include "optpay/distribution.hpp"
#include "optpay/market.hpp"
#include "optpay/mc.hpp"
#include "optpay/normal.hpp"

using namespace optpay;

namespace {

SimConfig asian_config() {
    SimConfig c;
    c.n_paths = 100000;
    c.steps_per_year = 252;
    return c;
}

}  // namespace

TEST(Asian, PowerCallMatchesQuadrature) {
    MarketParams p;
    for (double k : {80.0, 100.0, 120.0}) {
        const double cf = price_cost_efficient_fixed_strike(p, k).value;
        EXPECT_NEAR(quadrature_power_call(p, k).value, cf, 1e-6 * cf) << k;
    }
    EXPECT_LT(price_cost_efficient_fixed_strike(p, 1e6).value, 1e-12);
}

TEST(Asian, PowerCallCoefficientIsCostEfficientForAverageLaw) {
    MarketParams p;
    const double m = p.log_drift();
    const auto g_law = Dist1D::lognormal(std::log(p.s0) + 0.5 * m, p.sigma / std::sqrt(3.0));
    const auto ce = cost_efficient_payoff(g_law, p);
    const double d = std::pow(p.s0, 1.0 - 1.0 / std::sqrt(3.0)) * std::exp(m * (0.5 - 1.0 / std::sqrt(3.0)));
    EXPECT_NEAR(power_call_coefficient(p), d, 1e-12 * d);
    for (double s : {60.0, 100.0, 150.0}) {
        const double obs[] = {s};
        EXPECT_NEAR(ce.eval(obs), d * std::pow(s, 1.0 / std::sqrt(3.0)), 1e-8 * s);
    }
}

TEST(Asian, KemnaVorstMatchesQuadratureAndLimits) {
    MarketParams p;
    const double kv = price_kemna_vorst(p, 100.0).value;
    EXPECT_NEAR(quadrature_geometric_call(p, 100.0).value, kv, 1e-6 * kv);
    MarketParams flat = p;
    flat.sigma = 1e-6;
    flat.mu = flat.r + 1e-7;
    EXPECT_NEAR(price_kemna_vorst(flat, 90.0).value,
                std::exp(-flat.r) * std::max(flat.s0 * std::exp(flat.r / 2.0) - 90.0, 0.0), 1e-6);
    // The discrete trapezoid price approaches the continuous one.
    EXPECT_NEAR(discrete_kemna_vorst(p, 100.0, 100000), kv, 1e-5);
}

TEST(Asian, FloatingPutClosedFormMatchesQuadrature) {
    MarketParams p;
    const double cf = price_floating_asian_put(p).value;
    EXPECT_NEAR(quadrature_floating_put(p).value, cf, 1e-6 * cf);
    MarketParams other = p;
    other.mu = 0.15;
    EXPECT_EQ(price_floating_asian_put(other).value, cf);
}

TEST(Asian, CheapestFloatingTwinMatchesQuadrature) {
    MarketParams p;
    const double cf = price_cheapest_floating_twin(p).value;
    EXPECT_NEAR(quadrature_cheapest_floating_twin(p).value, cf, 1e-6 * cf);
    EXPECT_LT(cf, price_floating_asian_put(p).value);
    MarketParams same = p;
    same.mu = same.r;
    EXPECT_NEAR(price_cheapest_floating_twin(same).value, price_floating_asian_put(same).value, 1e-12);
    EXPECT_NEAR(cheapest_floating_twin_coefficient(p), std::exp(p.log_drift() / 2.0) / p.s0, 1e-15);
}

TEST(Asian, MonteCarloAgreesWithClosedForms) {
    MarketParams p;
    const auto cfg = asian_config();
    const struct {
        PayoffFn payoff;
        double closed;
    } cases[] = {
        {floating_put_payoff(p), price_floating_asian_put(p).value},
        {cheapest_floating_twin_payoff(p), price_cheapest_floating_twin(p).value},
        {geometric_call_payoff(p, 100.0), discrete_kemna_vorst(p, 100.0, 252)},
        {power_call_payoff(p, 100.0), price_cost_efficient_fixed_strike(p, 100.0).value},
    };
    for (const auto& c : cases) {
        const auto q = mc_quote(c.payoff, cfg, p);
        EXPECT_EQ(q.method, "monte-carlo");
        EXPECT_NEAR(q.value, c.closed, 3.0 * q.std_err) << c.payoff.name();
    }
}

TEST(Asian, DiscretizationStudyRows) {
    MarketParams p;
    SimConfig cfg;
    cfg.n_paths = 20000;
    const auto rows = discretization_study(p, 100.0, {12, 52, 252}, cfg);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_GT(std::abs(rows[0].bias), std::abs(rows[2].bias));
    for (const auto& r : rows) EXPECT_NEAR(r.mc, r.discrete_price, 4.0 * r.std_err);
}

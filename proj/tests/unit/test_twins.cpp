#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "optpay/asian.hpp"
#include "optpay/errors.hpp"
#include "optpay/market.hpp"
#include "optpay/mc.hpp"
#include "optpay/twins.hpp"

using namespace optpay;

TEST(Twins, ExponentsMatchExplicitForm) {
    MarketParams p;
    p.t_mat = 2.0;
    for (double t : {0.3, 1.0, 1.7}) {
        const double T = p.t_mat, c = 1.0 / (2.0 * std::sqrt(3.0));
        const auto e = average_twin_exponents(p, t);
        EXPECT_NEAR(e.s0_exp, 0.5 - c * std::sqrt((T - t) / t), 1e-14);
        EXPECT_NEAR(e.st_exp, (T / t) * c * std::sqrt(t / (T - t)), 1e-14);
        EXPECT_NEAR(e.sT_exp, 0.5 - c * std::sqrt(t / (T - t)), 1e-14);
        EXPECT_NEAR(e.s0_exp + e.st_exp + e.sT_exp, 1.0, 1e-14);
    }
}

TEST(Twins, TwinWithSTBenchmarkIsPowerProduct) {
    MarketParams p;
    const auto joint = average_given_sT(p);
    const auto twin = twin_with_sT_benchmark(joint, 0.4, p);
    const auto e = average_twin_exponents(p, 0.4);
    for (double st : {80.0, 110.0}) {
        for (double sT : {70.0, 125.0}) {
            const double s[] = {st, sT};
            const double expected = std::pow(p.s0, e.s0_exp) * std::pow(st, e.st_exp) * std::pow(sT, e.sT_exp);
            EXPECT_NEAR(twin.eval(s), expected, 1e-8 * expected);
        }
    }
}

TEST(Twins, DegenerateConditionalLawIgnoresSt) {
    MarketParams p;
    JointSpec j;
    j.benchmark = BenchmarkSpec::terminal();
    j.cond_quantile = [](double s, double) { return 2.0 * s; };
    const auto twin = twin_with_sT_benchmark(j, 0.5, p);
    const double a[] = {50.0, 90.0}, b[] = {150.0, 90.0};
    EXPECT_NEAR(twin.eval(a), 180.0, 1e-9);
    EXPECT_NEAR(twin.eval(b), 180.0, 1e-9);
}

TEST(Twins, CorrelationCurvePeaksAtHalfHorizon) {
    for (double sigma : {0.2, 0.3, 0.5}) {
        for (double T : {0.5, 1.0, 3.0}) {
            MarketParams p;
            p.sigma = sigma;
            p.t_mat = T;
            std::vector<double> grid;
            for (int i = 1; i < 100; ++i) grid.push_back(T * i / 100.0);
            const auto best = best_twin_by_correlation(average_given_sT(p), grid, p);
            EXPECT_NEAR(best.t_star, T / 2.0, 1e-12);
            EXPECT_NEAR(best.rho_star, 0.75 + std::sqrt(3.0) / 8.0, 1e-12);
            EXPECT_EQ(best.method, "closed-form");
        }
    }
    MarketParams p;
    EXPECT_NEAR(average_twin_correlation(p, 0.2), 0.75 + std::sqrt(3.0) * std::sqrt(0.8 * 0.2) / 4.0, 1e-14);
}

TEST(Twins, CorrelationByMonteCarloAgrees) {
    MarketParams p;
    SimConfig cfg;
    cfg.n_paths = 20000;
    const std::vector<double> grid{0.25, 0.5, 0.75};
    const auto best = best_twin_by_correlation(average_given_sT(p), *average_given_sT(p).original, grid, p, cfg);
    EXPECT_EQ(best.t_star, 0.5);
    for (const auto& pt : best.curve) EXPECT_NEAR(pt.rho, average_twin_correlation(p, pt.t), 4.0 * pt.std_err + 2e-3);
}

TEST(Twins, CheapestTwinGivenAverageIsClosedForm) {
    MarketParams p;
    const auto twin = cheapest_twin(floating_put_given_g(p), p);
    const auto ref = cheapest_floating_twin_payoff(p);
    for (double g : {80.0, 100.0, 120.0}) {
        for (double s : {60.0, 100.0, 150.0}) {
            const double obs[] = {s};
            ASSERT_NEAR(twin.eval(obs, g), ref.eval(obs, g), 1e-9) << g << " " << s;
        }
    }
    const double price = twin_family_price(floating_put_given_g(p), p, 0.0);
    // 2-D quadrature; the kink of the positive part is not a breakpoint.
    EXPECT_NEAR(price, price_cheapest_floating_twin(p).value, 1e-5 * price);
}

TEST(Twins, TwinFamilyPricesSpanTheRange) {
    MarketParams p;
    const auto j = floating_put_given_g(p);
    const double lo = twin_family_price(j, p, 0.0), mid = twin_family_price(j, p, 0.5), hi = twin_family_price(j, p, 1.0);
    EXPECT_LT(lo, mid);
    EXPECT_LT(mid, hi);
    EXPECT_NEAR(hi, price_floating_asian_put(p).value, 1e-4);
    const auto at = twin_at_price(j, mid, p);
    EXPECT_NEAR(at.u, 0.5, 1e-4);
    EXPECT_THROW(twin_at_price(j, hi + 1.0, p), InfeasibleError);
    JointSpec term;
    term.cond_quantile = [](double s, double) { return s; };
    EXPECT_THROW(cheapest_twin(term, p), DomainError);
}

TEST(Twins, CheapestTwinDetector) {
    MarketParams p;
    const auto bench = BenchmarkSpec::geometric_average();
    EXPECT_TRUE(is_cheapest_twin(cheapest_floating_twin_payoff(p), bench, p, 40000).cheapest);
    EXPECT_FALSE(is_cheapest_twin(floating_put_payoff(p), bench, p, 40000).cheapest);
    EXPECT_TRUE(is_cheapest_twin(PayoffFn::constant(1.0, 2.0), bench, p, 40000).cheapest);
}

TEST(Twins, GridMonotonicityCounter) {
    const std::vector<double> a{1.0, 2.0}, s{1.0, 2.0, 3.0};
    EXPECT_EQ(conditional_monotonicity_violations([](double, double x) { return x; }, a, s), 0u);
    EXPECT_EQ(conditional_monotonicity_violations([](double, double x) { return -x; }, a, s), 4u);
}

TEST(Twins, EmpiricalJointRecoversAverageTwin) {
    MarketParams p;
    SimConfig cfg;
    cfg.n_paths = 100000;
    const auto avg = average_given_sT(p);
    const auto emp = empirical_joint(*avg.original, BenchmarkSpec::terminal(), p, cfg, 50, 400);
    for (double s : {80.0, 100.0, 130.0}) {
        for (double q : {0.2, 0.5, 0.8}) {
            const double exact = avg.cond_quantile(s, q);
            EXPECT_NEAR(emp.cond_quantile(s, q), exact, 0.02 * exact) << s << " " << q;
        }
    }
}

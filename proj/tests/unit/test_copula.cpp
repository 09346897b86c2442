#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "optpay/copula.hpp"
#include "optpay/errors.hpp"
#include "optpay/market.hpp"
#include "optpay/mc.hpp"
#include "optpay/normal.hpp"
#include "optpay/stats.hpp"

using namespace optpay;

TEST(Copula, IndependenceIsIdentity) {
    const auto c = gaussian_copula_conditional(0.0, 0.3);
    for (double x : {0.1, 0.5, 0.9}) EXPECT_NEAR(c.cdf(x), x, 1e-14);
    EXPECT_EQ(CopulaSpec::independence().conditional_quantile(0.42, 0.9), 0.42);
}

TEST(Copula, InverseOfForward) {
    for (double rho : {-0.9, -0.3, 0.5, 0.95}) {
        for (double v : {0.05, 0.5, 0.93}) {
            const auto c = gaussian_copula_conditional(rho, v);
            for (double x : {0.01, 0.2, 0.5, 0.8, 0.99}) {
                const double y = c.cdf(x);
                if (y < 1e-12 || y > 1.0 - 1e-12) continue;  // the inverse is ill-conditioned in the tails
                ASSERT_NEAR(c.quantile(y), x, 1e-10) << rho << " " << v << " " << x;
            }
        }
    }
    EXPECT_THROW(gaussian_copula_conditional(1.0, 0.5), DomainError);
}

TEST(Copula, SamplingMatchesKendallSinRelation) {
    const double rho = 0.6;
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u01(1e-12, 1.0 - 1e-12);
    const std::size_t n = 3000;  // O(n^2) Kendall count
    std::vector<double> v(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = u01(gen);
        y[i] = gaussian_copula_conditional(rho, v[i]).quantile(u01(gen));
    }
    const double tau = kendall_counts(v, y).tau();
    const double expected = 2.0 / M_PI * std::asin(rho);
    // Asymptotic sd of tau-hat is below sqrt(4/(9n)) * 2 for any copula.
    EXPECT_NEAR(tau, expected, 3.0 * 2.0 * std::sqrt(4.0 / (9.0 * n)));
}

TEST(Copula, FrechetFactories) {
    EXPECT_EQ(CopulaSpec::frechet_upper().conditional_quantile(0.1, 0.7), 0.7);
    EXPECT_NEAR(CopulaSpec::frechet_lower().conditional_quantile(0.1, 0.7), 0.3, 1e-15);
    EXPECT_EQ(CopulaSpec::gaussian(0.5).rho(), 0.5);
}

TEST(Copula, IntermediateRhoRange) {
    EXPECT_NO_THROW(validate_rho_for_intermediate(-std::sqrt(0.5), 0.5, 1.0));
    EXPECT_THROW(validate_rho_for_intermediate(-0.8, 0.5, 1.0), DomainError);
    EXPECT_THROW(validate_rho_for_intermediate(1.0, 0.5, 1.0), DomainError);
}

TEST(Copula, RosenblattOfBridgeIsIndependentOfSt) {
    MarketParams p;
    SimConfig cfg;
    cfg.n_paths = 100000;
    const std::vector<double> times{0.5, 1.0};
    const auto tab = simulate_paths(cfg, p, times, false);
    const auto j = pair_joint_sT_st(p, 0.5);
    std::vector<double> v(cfg.n_paths), ls(cfg.n_paths);
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        ls[i] = std::log(tab.s_T()[i]);
        v[i] = rosenblatt_uniform(
            [&](double x, double y) { return conditional_law(j, 1, std::log(x)).cdf(std::log(y)); }, tab.s_T()[i],
            tab.s[0][i]);
    }
    EXPECT_NEAR(pearson(v, ls), 0.0, 3.0 / std::sqrt(static_cast<double>(cfg.n_paths)));
    EXPECT_LT(ks_one_sample(v, [](double u) { return u; }), ks_critical_1pct(v.size()));
}

TEST(Copula, FrechetBoundsBracket) {
    std::vector<std::pair<double, double>> co, anti;
    for (int i = 1; i <= 50; ++i) {
        co.emplace_back(i * 0.7, i * 0.7);
        anti.emplace_back(i * 0.7, -i * 0.7);
    }
    const auto bc = frechet_bounds_check(co);
    EXPECT_EQ(bc.e_xy, bc.upper);
    const auto ba = frechet_bounds_check(anti);
    EXPECT_EQ(ba.e_xy, ba.lower);

    MarketParams p;
    SimConfig cfg;
    cfg.n_paths = 20000;
    const std::vector<double> times{1.0};
    const auto tab = simulate_paths(cfg, p, times, true);
    std::vector<std::pair<double, double>> sg;
    for (std::size_t i = 0; i < cfg.n_paths; ++i) sg.emplace_back(tab.s_T()[i], tab.g[i]);
    const auto b = frechet_bounds_check(sg);
    EXPECT_LT(b.lower, b.e_xy);
    EXPECT_LT(b.e_xy, b.upper);
}

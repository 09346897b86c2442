#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "optpay/benchmark.hpp"
#include "optpay/copula.hpp"
#include "optpay/errors.hpp"
#include "optpay/eut.hpp"
#include "optpay/market.hpp"
#include "optpay/mc.hpp"
#include "optpay/normal.hpp"
#include "optpay/target_prob.hpp"

using namespace optpay;

namespace {

SimConfig cfg(std::size_t n = 200000) {
    SimConfig c;
    c.n_paths = n;
    return c;
}

}  // namespace

TEST(TargetProb, BrowneSuccessProbability) {
    MarketParams p;
    const double want = norm_cdf(p.theta() + norm_quantile(100.0 * std::exp(0.02) / 106.0));
    EXPECT_NEAR(browne_success_probability(100.0, 106.0, p), want, 1e-14);
    const auto opt = browne_optimum(100.0, 106.0, p);
    EXPECT_NEAR(opt.budget, 100.0, 1e-10);
    EXPECT_NEAR(opt.success_prob, want, 1e-14);
    EXPECT_THROW(browne_optimum(100.0, 101.0, p), DomainError);
}

TEST(TargetProb, AlmostFundedTarget) {
    MarketParams p;
    double prev_lambda = std::numeric_limits<double>::infinity();
    for (double gap : {1e-2, 1e-4, 1e-8, 1e-14}) {
        const auto opt = browne_optimum(100.0, 100.0 * std::exp(p.r) * (1.0 + gap), p);
        EXPECT_LT(opt.lambda, prev_lambda);
        prev_lambda = opt.lambda;
        if (gap < 1e-10) {
            EXPECT_GT(opt.success_prob, 0.9999);
        }
    }
}

TEST(TargetProb, BrowneByMonteCarlo) {
    MarketParams p;
    const auto opt = browne_optimum(100.0, 106.0, p);
    const auto est = price(opt.payoff, cfg(), p);
    EXPECT_NEAR(est.value, 100.0, 3.0 * est.std_err);
    const std::vector<double> times{1.0};
    const auto tab = simulate_paths(cfg(), p, times, false);
    std::vector<double> hit(tab.n_paths());
    for (std::size_t i = 0; i < hit.size(); ++i) hit[i] = tab.s_T()[i] > opt.lambda ? 1.0 : 0.0;
    const auto freq = mean_estimate(hit, cfg());
    EXPECT_NEAR(freq.value, opt.success_prob, 3.0 * freq.std_err);
}

TEST(TargetProb, ConstantRandomTargetReducesToBrowne) {
    MarketParams p;
    const auto rnd = random_target_optimum(100.0, PayoffFn::constant(1.0, 106.0), p, cfg());
    const auto br = browne_optimum(100.0, 106.0, p);
    EXPECT_NEAR(rnd.success_prob, br.success_prob, 0.005);
    EXPECT_NEAR(rnd.budget, 100.0, 3.0 * rnd.budget_se + 1e-3);
    // The threshold on B xi_T maps to the threshold on S_T.
    const double s_lambda = state_price_inverse(p, rnd.lambda / 106.0, p.t_mat);
    EXPECT_NEAR(s_lambda, br.lambda, 0.01 * br.lambda);
}

TEST(TargetProb, RandomTargetBeatsHeuristics) {
    MarketParams p;
    const auto target = PayoffFn::pair(0.5, 1.0, [](double st, double) { return 1.2 * st; }, "B=1.2 S_t");
    const double w0 = 80.0;
    const auto opt = random_target_optimum(w0, target, p, cfg());
    EXPECT_NEAR(opt.budget, w0, 3.0 * opt.budget_se + 1e-3);
    const std::vector<double> times{0.5, 1.0};
    const auto tab = simulate_paths(cfg(), p, times, false);
    const auto& st = tab.s[0];
    const auto& sT = tab.s_T();
    // Competitors pay B on {score > c} with c fixed by the same budget.
    auto success_of = [&](auto score) {
        std::vector<std::pair<double, double>> sx(tab.n_paths());
        for (std::size_t i = 0; i < sx.size(); ++i) sx[i] = {score(st[i], sT[i]), 1.2 * st[i] * tab.xi[i]};
        std::sort(sx.begin(), sx.end(), [](auto& a, auto& b) { return a.first > b.first; });
        double acc = 0;
        std::size_t k = 0;
        while (k < sx.size() && acc + sx[k].second / sx.size() <= w0) acc += sx[k++].second / sx.size();
        return static_cast<double>(k) / sx.size();
    };
    const double heuristics[] = {
        success_of([](double, double b) { return b; }),
        success_of([](double a, double) { return a; }),
        success_of([](double a, double b) { return a * b; }),
        success_of([](double a, double b) { return b / a; }),
        success_of([](double a, double) { return -a; }),
    };
    for (double h : heuristics) EXPECT_GE(opt.success_prob + 0.002, h);
}

TEST(TargetProb, RandomTargetFullyFunded) {
    MarketParams p;
    const auto opt = random_target_optimum(200.0, PayoffFn::constant(1.0, 106.0), p, cfg(10000));
    EXPECT_EQ(opt.success_prob, 1.0);
    EXPECT_FALSE(opt.diagnostic.empty());
}

TEST(TargetProb, ExplicitIntermediateDigital) {
    MarketParams p;
    const double t = 0.5;
    for (double rho : {-0.4, 0.3, 0.8}) {
        const auto ex = intermediate_gaussian_digital(100.0, 106.0, t, rho, p);
        EXPECT_NEAR(ex.alpha, std::sqrt((1 - t) / (t * (1 - rho * rho))) * rho - 1.0, 1e-14);
        EXPECT_NEAR(ex.k, (ex.alpha + 1) * (ex.alpha + 1) * t + (1 - t), 1e-12);
        const auto gen = benchmark_constrained_optimum(100.0, 106.0, BenchmarkSpec::intermediate(t),
                                                       CopulaSpec::gaussian(rho), p);
        EXPECT_NEAR(gen.budget, 100.0, 1e-9);
        EXPECT_NEAR(gen.success_prob * 106.0, constrained_expected_payoff(100.0, 106.0, t, rho, p), 1e-9);
        for (double st : {85.0, 100.0, 118.0}) {
            for (double sT : {80.0, 104.0, 130.0}) {
                const double obs[] = {st, sT};
                EXPECT_EQ(ex.payoff.eval(obs), gen.payoff.eval(obs)) << rho << " " << st << " " << sT;
            }
        }
        const auto est = price(ex.payoff, cfg(), p);
        EXPECT_NEAR(est.value, 100.0, 3.0 * est.std_err);
    }
}

TEST(TargetProb, TerminalBenchmarkUpperFrechetIsBrowne) {
    MarketParams p;
    const auto gen = benchmark_constrained_optimum(100.0, 106.0, BenchmarkSpec::terminal(), CopulaSpec::frechet_upper(), p);
    EXPECT_NEAR(gen.success_prob, browne_success_probability(100.0, 106.0, p), 1e-12);
}

TEST(TargetProb, FigureTwoCurve) {
    MarketParams p;
    const double t = 0.5;
    const auto grid = admissible_rho_grid(t, p.t_mat);
    const auto tab = figure2_curve(p, 100.0, 106.0, t, grid);
    const auto rho = tab.column("rho");
    const auto con = tab.column("expected_constrained");
    const auto unc = tab.column("expected_unconstrained");
    for (std::size_t i = 0; i < rho.size(); ++i) {
        EXPECT_EQ(unc[i], unc[0]);
        EXPECT_LE(con[i], unc[i] + 1e-12);
        if (std::abs(rho[i] - std::sqrt(t)) < 1e-15) {
            EXPECT_NEAR(con[i], unc[i], 1e-10);
        }
    }
}

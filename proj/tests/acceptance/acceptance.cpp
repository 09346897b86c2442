// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "optpay/asian.hpp"
#include "optpay/benchmark.hpp"
#include "optpay/copula.hpp"
#include "optpay/cost_efficiency.hpp"
#include "optpay/eut.hpp"
#include "optpay/isotonic.hpp"
#include "optpay/market.hpp"
#include "optpay/mc.hpp"
#include "optpay/stats.hpp"
#include "optpay/target_prob.hpp"
#include "optpay/twins.hpp"

using namespace optpay;

namespace {

// Tolerances.
constexpr double kPublishedAbsTol = 0.005;
constexpr double kZ = 3.0;
constexpr double kRuntimeLimitSec = 30.0;
constexpr double kRhoMaxTol = 1e-4;
constexpr double kJointLawMax = 0.01;
constexpr double kNegativeControlMin = 0.05;
constexpr double kTouchTol = 1e-10;
constexpr double kPayoffRelTol = 1e-4;
constexpr double kBudgetRelTol = 1e-6;
constexpr double kPavaTol = 1e-9;

constexpr double kPublishedFloatingPut = 6.74;
constexpr double kPublishedCheapestTwin = 5.86;

struct Criterion {
    Criterion(int i, std::string t) : id(i), title(std::move(t)) {}

    int id;
    std::string title;
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [miss]");
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

SimConfig full_config() { return SimConfig{}; }  // 10^6 paths, 252 steps, kDefaultSeed

Criterion asian_prices() {
    Criterion c{1, "floating-strike Asian prices"};
    const auto start = std::chrono::steady_clock::now();
    MarketParams p;
    const double put = price_floating_asian_put(p).value;
    const double twin = price_cheapest_floating_twin(p).value;
    c.check(std::abs(put - kPublishedFloatingPut) <= kPublishedAbsTol, fmt("put closed form %.4f vs %.2f", put, kPublishedFloatingPut));
    c.check(std::abs(twin - kPublishedCheapestTwin) <= kPublishedAbsTol,
            fmt("twin closed form %.4f vs %.2f", twin, kPublishedCheapestTwin));

    const auto cfg = full_config();
    const std::vector<double> times{p.t_mat};
    const auto table = simulate_paths(cfg, p, times, true);
    const auto put_mc = price_from_values(evaluate(floating_put_payoff(p), table), table, cfg, p);
    const auto twin_mc = price_from_values(evaluate(cheapest_floating_twin_payoff(p), table), table, cfg, p);
    c.check(std::abs(put_mc.value - put) <= kZ * put_mc.std_err,
            fmt("put MC %.4f +- %.4f vs closed form", put_mc.value, put_mc.std_err));
    c.check(std::abs(twin_mc.value - twin) <= kZ * twin_mc.std_err,
            fmt("twin MC %.4f +- %.4f vs closed form", twin_mc.value, twin_mc.std_err));
    c.check(std::abs(put_mc.value - kPublishedFloatingPut) <= kZ * put_mc.std_err, "put MC vs 6.74");
    c.check(std::abs(twin_mc.value - kPublishedCheapestTwin) <= kZ * twin_mc.std_err, "twin MC vs 5.86");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.check(secs < kRuntimeLimitSec, fmt("runtime %.1f s", secs));
    return c;
}

Criterion twin_correlation() {
    Criterion c{2, "best twin by correlation"};
    const double want = 0.75 + std::sqrt(3.0) / 8.0;
    const std::pair<double, double> settings[] = {{0.3, 1.0}, {0.2, 2.0}, {0.45, 0.5}};
    for (const auto& [sigma, T] : settings) {
        MarketParams p;
        p.sigma = sigma;
        p.t_mat = T;
        std::vector<double> grid;
        for (int i = 1; i < 1000; ++i) grid.push_back(T * i / 1000.0);
        const auto best = best_twin_by_correlation(average_given_sT(p), grid, p);
        c.check(std::abs(best.t_star - T / 2.0) < 1e-12 && std::abs(best.rho_star - want) <= kRhoMaxTol,
                fmt("sigma=%.2f T=%.1f: rho_max %.6f", sigma, T, best.rho_star));
    }
    return c;
}

Criterion joint_law() {
    Criterion c{3, "joint-law preservation of the average twin"};
    MarketParams p;
    SimConfig cfg;
    cfg.n_paths = 100000;
    const double t = p.t_mat / 2.0;
    const std::vector<double> times{t, p.t_mat};
    const auto table = simulate_paths(cfg, p, times, true);
    const auto e = average_twin_exponents(p, t);
    std::vector<std::pair<double, double>> sg, sr, noise;
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        const double sT = table.s_T()[i];
        const double r = std::pow(p.s0, e.s0_exp) * std::pow(table.s[0][i], e.st_exp) * std::pow(sT, e.sT_exp);
        sg.emplace_back(sT, table.g[i]);
        sr.emplace_back(sT, r);
        noise.emplace_back(sT, table.g[(i + cfg.n_paths / 2) % cfg.n_paths]);
    }
    const auto d = joint_law_distance(sg, sr);
    c.check(d.cdf_distance < kJointLawMax, fmt("distance %.5f", d.cdf_distance));
    const auto neg = joint_law_distance(sg, noise);
    c.check(neg.cdf_distance > kNegativeControlMin, fmt("negative control %.4f", neg.cdf_distance));

    const auto big = full_config();
    const auto pair_table = simulate_paths(big, p, times, false);
    for (double k : {80.0, 100.0, 120.0}) {
        const auto twin_call = PayoffFn::pair(t, p.t_mat, [=](double st, double sT) {
            return std::max(std::pow(p.s0, e.s0_exp) * std::pow(st, e.st_exp) * std::pow(sT, e.sT_exp) - k, 0.0);
        });
        const auto est = price_from_values(evaluate(twin_call, pair_table), pair_table, big, p);
        const double kv = price_kemna_vorst(p, k).value;
        c.check(std::abs(est.value - kv) <= kZ * est.std_err, fmt("K=%.0f MC %.4f vs %.4f", k, est.value, kv));
    }
    return c;
}

Criterion cost_efficiency() {
    Criterion c{4, "power put is cheaper with the same law"};
    MarketParams p;
    const auto cfg = full_config();
    const std::vector<double> times{p.t_mat};
    const auto table = simulate_paths(cfg, p, times, false);
    const double k = p.s0, a = power_put_coefficient(p);
    const auto f = evaluate(PayoffFn::terminal(p.t_mat, [=](double s) { return std::max(k - a / s, 0.0); }), table);
    const auto x = evaluate(PayoffFn::terminal(p.t_mat, [=](double s) { return std::max(k - s, 0.0); }), table);
    const auto pf = price_from_values(f, table, cfg, p);
    const auto px = price_from_values(x, table, cfg, p);
    const double comb = std::hypot(pf.std_err, px.std_err);
    c.check(px.value - pf.value > kZ * comb, fmt("put %.4f, power put %.4f, gap/se %.1f", px.value, pf.value,
                                                (px.value - pf.value) / comb));
    // Independent halves for the two-sample test.
    const std::size_t h = cfg.n_paths / 2;
    std::vector<double> fa(f.begin(), f.begin() + h), xb(x.begin() + h, x.end());
    const double ks = ks_two_sample(fa, xb), crit = ks_critical_1pct(fa.size(), xb.size());
    c.check(ks < crit, fmt("KS %.5f < %.5f", ks, crit));
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i) grid.push_back(p.s0 * (0.6 + 0.08 * i));
    std::size_t bad = 0;
    for (const auto& row : conditional_means_below(table.s_T(), f, x, grid)) {
        if (row.mean_f > row.mean_x + kZ * row.diff_se) ++bad;
    }
    c.check(bad == 0, fmt("conditional-mean violations %.0f of 10", static_cast<double>(bad)));
    return c;
}

// Optimum under a Gaussian copula with S_t, written in (S_t, S_T).
double xhat(double eta, double w0, double t, double rho, const MarketParams& p, double st, double sT) {
    const double th = p.theta(), T = p.t_mat, sg = p.sigma;
    const double k = rho * std::sqrt(t) + std::sqrt((1 - rho * rho) * (T - t));
    const double c = std::exp(-th / (eta * sg) * p.log_drift() * k * k + (1 / eta - 0.5 / (eta * eta)) * th * th * k * k);
    const double e_T = th / (eta * sg) * k * std::sqrt(1 - rho * rho) / std::sqrt(T - t);
    const double e_t = th / (eta * sg) * k * (rho / std::sqrt(t) - std::sqrt(1 - rho * rho) / std::sqrt(T - t));
    return w0 * std::exp(p.r * T) * c * std::pow(sT / p.s0, e_T) * std::pow(st / p.s0, e_t);
}

Criterion constrained_eut() {
    Criterion c{5, "constrained expected utility"};
    MarketParams p;
    const double w0 = 100.0, t = p.t_mat / 2.0;
    const auto grid = admissible_rho_grid(t, p.t_mat, 41);
    for (double eta : {1.0, 2.0}) {
        const double unc = crra_expected_utility_unconstrained(eta, w0, p);
        std::size_t above = 0;
        double touch = std::numeric_limits<double>::infinity();
        for (double rho : grid) {
            const double con = crra_expected_utility_constrained(eta, w0, t, rho, p);
            if (con > unc) ++above;
            if (std::abs(rho - std::sqrt(0.5)) < 1e-15) touch = std::abs(con - unc);
        }
        c.check(above == 0 && touch <= kTouchTol, fmt("eta=%.0f: above %.0f, touch gap %.1e", eta,
                                                      static_cast<double>(above), touch));
        double worst = 0.0, worst_budget = 0.0;
        for (double rho : {-0.6, 0.0, 0.4, 0.9}) {
            const auto opt = constrained_eut_optimum(UtilitySpec::crra(eta), w0, BenchmarkSpec::intermediate(t),
                                                     CopulaSpec::gaussian(rho), p);
            for (double st = 70.0; st <= 140.0; st += 10.0) {
                for (double sT = 60.0; sT <= 160.0; sT += 10.0) {
                    const double obs[] = {st, sT};
                    const double want = xhat(eta, w0, t, rho, p, st, sT);
                    worst = std::max(worst, std::abs(opt.payoff.eval(obs) - want) / want);
                }
            }
            worst_budget = std::max(worst_budget, std::abs(budget_of(opt.payoff, p) - w0) / w0);
        }
        c.check(worst <= kPayoffRelTol, fmt("eta=%.0f: PAVA payoff rel err %.1e", eta, worst));
        c.check(worst_budget <= kBudgetRelTol, fmt("eta=%.0f: budget rel err %.1e", eta, worst_budget));
    }
    return c;
}

std::vector<double> brute_projection(const std::vector<double>& phi) {
    const std::size_t n = phi.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> out;
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<double> fit(n);
        std::size_t start = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == n - 1 || (mask >> i) & 1u) {
                double s = 0;
                for (std::size_t j = start; j <= i; ++j) s += phi[j];
                for (std::size_t j = start; j <= i; ++j) fit[j] = s / static_cast<double>(i - start + 1);
                start = i + 1;
            }
        }
        bool ok = true;
        for (std::size_t i = 1; i < n; ++i) ok = ok && fit[i] <= fit[i - 1] + 1e-14;
        if (!ok) continue;
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) err += (fit[i] - phi[i]) * (fit[i] - phi[i]);
        if (err < best) {
            best = err;
            out = fit;
        }
    }
    return out;
}

Criterion isotonic() {
    Criterion c{6, "isotonic projection"};
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<int> len(1, 12);
    std::normal_distribution<double> n01;
    double worst = 0.0;
    std::size_t not_idempotent = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<double> phi(len(gen));
        for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = n01(gen) + 0.15 * static_cast<double>(i);
        const auto fit = isotonic_project(phi).phi_hat;
        const auto oracle = brute_projection(phi);
        for (std::size_t i = 0; i < phi.size(); ++i) worst = std::max(worst, std::abs(fit[i] - oracle[i]));
        if (isotonic_project(fit).phi_hat != fit) ++not_idempotent;
    }
    c.check(worst <= kPavaTol, fmt("max deviation %.1e over 1000 instances", worst));
    c.check(not_idempotent == 0, fmt("non-idempotent %.0f", static_cast<double>(not_idempotent)));
    return c;
}

Criterion target_probability() {
    Criterion c{7, "target probability"};
    MarketParams p;
    const double w0 = 100.0, b = 106.0;
    const auto opt = browne_optimum(w0, b, p);
    const auto cfg = full_config();
    const std::vector<double> times{p.t_mat};
    const auto table = simulate_paths(cfg, p, times, false);
    const auto vals = evaluate(opt.payoff, table);
    const auto budget = price_from_values(vals, table, cfg, p);
    c.check(std::abs(budget.value - w0) <= kZ * budget.std_err, fmt("budget %.4f +- %.4f", budget.value, budget.std_err));
    std::vector<double> hit(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) hit[i] = vals[i] >= b ? 1.0 : 0.0;
    const auto freq = mean_estimate(hit, cfg);
    c.check(std::abs(freq.value - opt.success_prob) <= kZ * freq.std_err,
            fmt("success %.5f vs %.5f", freq.value, opt.success_prob));

    const double t = p.t_mat / 2.0;
    const auto grid = admissible_rho_grid(t, p.t_mat, 41);
    const auto tab = figure2_curve(p, w0, b, t, grid);
    const auto rho = tab.column("rho"), con = tab.column("expected_constrained"), unc = tab.column("expected_unconstrained");
    std::size_t above = 0;
    double touch = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (con[i] > unc[i]) ++above;
        if (std::abs(rho[i] - std::sqrt(t / p.t_mat)) < 1e-15) touch = std::abs(con[i] - unc[i]);
    }
    c.check(above == 0 && touch <= kTouchTol, fmt("curve above %.0f, touch gap %.1e", static_cast<double>(above), touch));
    return c;
}

Criterion market_sanity() {
    Criterion c{8, "market sanity and determinism"};
    MarketParams p;
    const auto cfg = full_config();
    const std::vector<double> times{p.t_mat};
    const auto table = simulate_paths(cfg, p, times, false, 1);
    const auto xi = mean_estimate(table.xi, cfg);
    c.check(std::abs(xi.value - std::exp(-p.r * p.t_mat)) <= kZ * xi.std_err, fmt("E[xi] %.6f +- %.6f", xi.value, xi.std_err));
    std::vector<double> xs(table.n_paths());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = table.xi[i] * table.s_T()[i];
    const auto m = mean_estimate(xs, cfg);
    c.check(std::abs(m.value - p.s0) <= kZ * m.std_err, fmt("E[xi S] %.4f +- %.4f", m.value, m.std_err));

    SimConfig small = cfg;
    small.n_paths = 100000;
    const std::vector<double> both{p.t_mat / 2.0, p.t_mat};
    const auto call = PayoffFn::with_average(p.t_mat, [](double g, double s) { return std::max(g - s, 0.0); });
    const auto one = price(call, small, p, 1);
    const auto four = price(call, small, p, 4);
    const auto again = price(call, small, p, 1);
    c.check(one.value == four.value && one.std_err == four.std_err && one.value == again.value,
            "bitwise-identical estimates for 1 and 4 workers");
    return c;
}

}  // namespace

int main() {
    const std::function<Criterion()> criteria[] = {asian_prices, twin_correlation, joint_law,         cost_efficiency,
                                                   constrained_eut, isotonic,      target_probability, market_sanity};
    int failed = 0;
    for (const auto& run : criteria) {
        Criterion c = run();
        std::printf("[%s] %d %s: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), c.detail.c_str());
        std::fflush(stdout);
        failed += c.pass ? 0 : 1;
    }
    std::printf("%d of 8 criteria passed\n", 8 - failed);
    return failed == 0 ? 0 : 1;
}

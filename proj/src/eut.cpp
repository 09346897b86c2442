#include "optpay/eut.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "optpay/cost_efficiency.hpp"
#include "optpay/errors.hpp"
#include "optpay/normal.hpp"
#include "optpay/quadrature.hpp"
#include "optpay/stats.hpp"

namespace optpay {

namespace {

// Root of a strictly decreasing budget map lambda -> B(lambda) on (0, inf),
// bisecting in log lambda after growing the bracket by factors of 10.
double solve_lambda(const std::function<double(double)>& budget, double target) {
    double lo = 1.0, hi = 1.0;
    int guard = 0;
    while (budget(lo) < target) {
        lo /= 10.0;
        if (++guard > 400) throw InfeasibleError("lambda bracket: budget unreachable from above", 0.0, target);
    }
    guard = 0;
    while (budget(hi) > target) {
        hi *= 10.0;
        if (++guard > 400) throw InfeasibleError("lambda bracket: budget unreachable from below", 0.0, target);
    }
    for (int it = 0; it < 300; ++it) {
        const double mid = std::sqrt(lo * hi);
        const double b = budget(mid);
        if (std::abs(b - target) <= 1e-10 * std::abs(target)) return mid;
        (b > target ? lo : hi) = mid;
        if (hi / lo - 1.0 < 1e-15) break;
    }
    return std::sqrt(lo * hi);
}

double copula_corr(const CopulaSpec& c) {
    switch (c.kind()) {
        case CopulaSpec::Kind::Gaussian: return c.rho();
        case CopulaSpec::Kind::FrechetUpper: return 1.0;
        case CopulaSpec::Kind::FrechetLower: return -1.0;
        case CopulaSpec::Kind::Independence: return 0.0;
    }
    return 0.0;
}

bool is_frechet(const CopulaSpec& c) {
    return c.kind() == CopulaSpec::Kind::FrechetUpper || c.kind() == CopulaSpec::Kind::FrechetLower;
}

void validate_pair(const BenchmarkSpec& bench, const CopulaSpec& copula, const MarketParams& params) {
    if (bench.kind == BenchmarkSpec::Kind::Terminal && !is_frechet(copula)) {
        throw DomainError("an S_T benchmark has no joint density with S_T; only the Frechet copulas apply");
    }
    if (bench.kind == BenchmarkSpec::Kind::Intermediate && copula.kind() == CopulaSpec::Kind::Gaussian) {
        validate_rho_for_intermediate(copula.rho(), bench.t, params.t_mat);
    }
}

bool has_closed_phi(const BenchmarkSpec& bench) { return bench.kind != BenchmarkSpec::Kind::External; }

double phi_closed(const MarketParams& params, double kappa, double w) {
    const double th = params.theta();
    return std::exp(-params.r * params.t_mat - 0.5 * th * th * kappa * kappa - th * kappa * w);
}

// Piecewise-linear interpolation with linear extrapolation from the end segments.
struct LinearInterp {
    std::vector<double> x;
    std::vector<double> y;

    double operator()(double v) const {
        const std::size_t n = x.size();
        if (n == 1) return y[0];
        std::size_t i;
        if (v <= x.front()) {
            i = 0;
        } else if (v >= x.back()) {
            i = n - 2;
        } else {
            i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), v) - x.begin()) - 1;
        }
        const double w = (v - x[i]) / (x[i + 1] - x[i]);
        return y[i] + w * (y[i + 1] - y[i]);
    }
};

PayoffFn payoff_in_score(const BenchmarkSpec& bench, const CopulaSpec& copula, const MarketParams& params,
                         std::function<double(double)> x_of_w, std::string name) {
    if (bench.kind == BenchmarkSpec::Kind::Terminal) {
        return PayoffFn::terminal(
            params.t_mat, [=](double s) { return x_of_w(construction_score(bench, copula, params, s, s)); }, name);
    }
    return benchmark_payoff(
        bench, params, [=](double a, double s) { return x_of_w(construction_score(bench, copula, params, a, s)); },
        std::move(name));
}

std::string describe(const std::vector<double>& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + std::to_string(s[i]);
    return out;
}

// E[h(X) weight] by quadrature or simulation; `with_xi` multiplies by xi_T.
double expectation(const PayoffFn& payoff, const MarketParams& params, const ExpectationOptions& opts,
                   const std::function<double(double, const std::vector<double>&)>& h, bool with_xi) {
    const auto [alpha, beta] = state_price_coeffs(params, params.t_mat);
    const double ln_s0 = std::log(params.s0);
    const double m = params.log_drift();
    const double big_t = params.t_mat;
    auto xi = [&](double s_t) { return with_xi ? alpha * std::pow(s_t / params.s0, -beta) : 1.0; };

    if (payoff.is_terminal()) {
        auto f = [&](double z) {
            const double s = std::exp(ln_s0 + m * big_t + params.sigma * std::sqrt(big_t) * z);
            return xi(s) * h(payoff.terminal_fn()(s), {s});
        };
        return gaussian_expectation(f, {}, {12.0, 600});
    }
    if (!payoff.needs_g() && payoff.times().size() == 2) {
        const double t = payoff.times()[0];
        auto f = [&](double z1, double z2) {
            const double ln_st = ln_s0 + m * t + params.sigma * std::sqrt(t) * z1;
            const double s_big = std::exp(ln_st + m * (big_t - t) + params.sigma * std::sqrt(big_t - t) * z2);
            const double s_small = std::exp(ln_st);
            const double obs[2] = {s_small, s_big};
            return xi(s_big) * h(payoff.eval(obs), {s_small, s_big});
        };
        return gaussian_expectation_2d(f);
    }
    if (payoff.needs_g() && payoff.times().size() == 1) {
        const double vg = params.sigma * std::sqrt(big_t / 12.0);
        auto f = [&](double z1, double z2) {
            const double ln_s = ln_s0 + m * big_t + params.sigma * std::sqrt(big_t) * z1;
            const double g = std::exp(0.5 * (ln_s0 + ln_s) + vg * z2);
            const double s = std::exp(ln_s);
            const double obs[1] = {s};
            return xi(s) * h(payoff.eval(obs, g), {g, s});
        };
        return gaussian_expectation_2d(f);
    }
    const auto table = simulate_paths(opts.config, params, payoff.times(), payoff.needs_g());
    const auto x = evaluate(payoff, table);
    double acc = 0.0;
    for (std::size_t p = 0; p < x.size(); ++p) {
        std::vector<double> where;
        for (const auto& col : table.s) where.push_back(col[p]);
        acc += (with_xi ? table.xi[p] : 1.0) * h(x[p], where);
    }
    return acc / static_cast<double>(x.size());
}

}  // namespace

UtilitySpec UtilitySpec::crra(double eta) {
    if (!(eta > 0.0)) throw DomainError("crra: eta must be > 0");
    UtilitySpec s;
    s.kind = Kind::Crra;
    s.eta = eta;
    if (eta == 1.0) {
        s.u = [](double x) { return std::log(x); };
    } else {
        s.u = [eta](double x) { return std::pow(x, 1.0 - eta) / (1.0 - eta); };
    }
    s.u_prime = [eta](double x) { return std::pow(x, -eta); };
    s.u_prime_inv = [eta](double y) { return std::pow(y, -1.0 / eta); };
    return s;
}

UtilitySpec UtilitySpec::custom(std::function<double(double)> u, std::function<double(double)> u_prime,
                                std::function<double(double)> u_prime_inv, double a, double b) {
    if (!u || !u_prime || !u_prime_inv) throw DomainError("custom utility: u, u' and (u')^-1 are all required");
    if (!(a < b)) throw DomainError("custom utility: need a < b");
    UtilitySpec s;
    s.kind = Kind::Custom;
    s.u = std::move(u);
    s.u_prime = std::move(u_prime);
    s.u_prime_inv = std::move(u_prime_inv);
    s.a = a;
    s.b = b;
    return s;
}

MertonOptimum merton_optimum(const UtilitySpec& utility, double w0, const MarketParams& params) {
    params.validate();
    const double disc = std::exp(-params.r * params.t_mat);
    if (!(w0 > utility.a * disc && w0 < utility.b * disc)) {
        throw InfeasibleError("merton_optimum: budget " + std::to_string(w0) + " not attainable on the utility domain",
                              utility.a * disc, utility.b * disc);
    }
    auto inv = utility.u_prime_inv;
    auto budget = [&](double lambda) {
        return price_terminal(params, [&](double s) { return inv(lambda * state_price_density(params, s, params.t_mat)); });
    };
    const double lambda = solve_lambda(budget, w0);
    auto payoff = PayoffFn::terminal(
        params.t_mat, [inv, lambda, params](double s) { return inv(lambda * state_price_density(params, s, params.t_mat)); },
        "merton");
    return {payoff, lambda, budget(lambda)};
}

double dependence_kappa(const BenchmarkSpec& bench, const CopulaSpec& copula, const MarketParams& params) {
    const double sq_t = std::sqrt(params.t_mat);
    const double rho = copula_corr(copula);
    if (bench.kind == BenchmarkSpec::Kind::Terminal) {
        if (!is_frechet(copula)) throw DomainError("dependence_kappa: S_T benchmark needs a Frechet copula");
        return rho * sq_t;
    }
    const auto joint = benchmark_joint(bench, params);
    if (!joint) throw DomainError("dependence_kappa: no closed form for an external benchmark");
    const double ra = joint->rho;
    return sq_t * (ra * rho + std::sqrt(std::max(0.0, 1.0 - ra * ra)) * std::sqrt(std::max(0.0, 1.0 - rho * rho)));
}

double construction_score(const BenchmarkSpec& bench, const CopulaSpec& copula, const MarketParams& params, double a,
                          double s) {
    if (bench.kind == BenchmarkSpec::Kind::Terminal) {
        const double w = z_of_sT(params, s);
        switch (copula.kind()) {
            case CopulaSpec::Kind::FrechetUpper: return w;
            case CopulaSpec::Kind::FrechetLower: return -w;
            default: throw DomainError("an S_T benchmark has no joint density with S_T; only the Frechet copulas apply");
        }
    }
    if (const auto joint = benchmark_joint(bench, params)) {
        const double w_a = (std::log(a) - joint->mean1) / joint->sd1;
        const auto cond = conditional_law(*joint, 0, std::log(a));
        const double w_s = (std::log(s) - cond.mean) / cond.sd;
        const double rho = copula_corr(copula);
        switch (copula.kind()) {
            case CopulaSpec::Kind::FrechetUpper: return w_a;
            case CopulaSpec::Kind::FrechetLower: return -w_a;
            default: return rho * w_a + std::sqrt(1.0 - rho * rho) * w_s;
        }
    }
    const double v_a = clamp_open_unit(bench.cdf(a));
    const double u = clamp_open_unit(bench.cond_cdf_sT(a, s));
    return norm_quantile(clamp_open_unit(copula.conditional_quantile(u, v_a)));
}

std::vector<double> conditional_expectation_xi_given_z(const BenchmarkSpec& bench, const CopulaSpec& copula,
                                                       const MarketParams& params, std::span<const double> z_grid,
                                                       const PhiOptions& opts) {
    validate_pair(bench, copula, params);
    std::vector<double> out;
    if (has_closed_phi(bench)) {
        const double kappa = dependence_kappa(bench, copula, params);
        for (double z : z_grid) out.push_back(phi_closed(params, kappa, norm_quantile(z)));
        return out;
    }
    if (opts.bins < 1) throw DomainError("conditional_expectation_xi_given_z: bins must be >= 1");
    const auto times = benchmark_times(bench, params);
    const auto table = simulate_paths(opts.config, params, times, bench.needs_g);
    const auto a = evaluate(benchmark_payoff(bench, params, [](double av, double) { return av; }), table);
    std::vector<double> sum(opts.bins, 0.0);
    std::vector<double> cnt(opts.bins, 0.0);
    for (std::size_t p = 0; p < a.size(); ++p) {
        const double z = norm_cdf(construction_score(bench, copula, params, a[p], table.s_T()[p]));
        const int b = std::clamp(static_cast<int>(z * opts.bins), 0, opts.bins - 1);
        sum[b] += table.xi[p];
        cnt[b] += 1.0;
    }
    for (double z : z_grid) {
        const int b = std::clamp(static_cast<int>(z * opts.bins), 0, opts.bins - 1);
        if (cnt[b] == 0.0) throw DomainError("conditional_expectation_xi_given_z: empty Z bin; raise the path count");
        out.push_back(sum[b] / cnt[b]);
    }
    return out;
}

EutOptimum constrained_eut_optimum(const UtilitySpec& utility, double w0, const BenchmarkSpec& bench,
                                   const CopulaSpec& copula, const MarketParams& params, const EutOptions& opts) {
    params.validate();
    validate_pair(bench, copula, params);
    const bool closed = has_closed_phi(bench);
    const int k = closed ? opts.knots : opts.phi.bins;
    if (k < 2) throw DomainError("constrained_eut_optimum: need at least two z-knots");

    std::vector<double> z(k);
    for (int i = 0; i < k; ++i) z[i] = (i + 0.5) / k;
    const auto phi = conditional_expectation_xi_given_z(bench, copula, params, z, opts.phi);

    EutOptimum out{PayoffFn::constant(params.t_mat, 0.0), 0.0, false, {}, {}, {}, {}};
    out.phi_method = closed ? "closed-form" : "monte-carlo";
    out.fit = isotonic_project(phi, {}, z);
    const auto& hat = out.fit.phi_hat;
    const double disc = std::exp(-params.r * params.t_mat);

    if (hat.front() <= hat.back() * (1.0 + 1e-12)) {
        const double cash = w0 / disc;
        out.degenerate = true;
        out.diagnostic = "projected conditional state price is constant: the whole budget goes to the risk-free asset";
        out.x_of_w = [cash](double) { return cash; };
        out.payoff = payoff_in_score(bench, copula, params, out.x_of_w, "risk-free");
        return out;
    }

    auto log_hat = std::make_shared<LinearInterp>();
    for (int i = 0; i < k; ++i) {
        log_hat->x.push_back(norm_quantile(z[i]));
        log_hat->y.push_back(std::log(hat[i]));
    }
    auto inv = utility.u_prime_inv;
    const double kappa = closed ? dependence_kappa(bench, copula, params) : 0.0;
    // Weight in the budget: the exact E[xi|Z] where known, else the projection.
    auto weight = [&, log_hat](double w) { return closed ? phi_closed(params, kappa, w) : std::exp((*log_hat)(w)); };
    auto budget = [&](double lambda) {
        return gaussian_expectation([&](double w) { return weight(w) * inv(lambda * std::exp((*log_hat)(w))); }, {},
                                    {10.0, 400});
    };
    const double lambda = solve_lambda(budget, w0);
    out.lambda = lambda;
    out.x_of_w = [inv, lambda, log_hat](double w) { return inv(lambda * std::exp((*log_hat)(w))); };
    out.payoff = payoff_in_score(bench, copula, params, out.x_of_w, "constrained-eut");
    return out;
}

double crra_closed_form_value(double eta, double w0, double kappa, double w, const MarketParams& params) {
    const double th = params.theta();
    return w0 * std::exp(params.r * params.t_mat + th * th * kappa * kappa * (1.0 / eta - 0.5 / (eta * eta)) +
                         th * kappa * w / eta);
}

PayoffFn crra_closed_form_optimum(double eta, double w0, const BenchmarkSpec& bench, const CopulaSpec& copula,
                                  const MarketParams& params) {
    if (!(eta > 0.0)) throw DomainError("crra: eta must be > 0");
    validate_pair(bench, copula, params);
    const double kappa = dependence_kappa(bench, copula, params);
    return payoff_in_score(bench, copula, params,
                           [=](double w) { return crra_closed_form_value(eta, w0, kappa, w, params); }, "crra-optimum");
}

double crra_expected_utility(double eta, double w0, double kappa2, const MarketParams& params) {
    const double th2 = params.theta() * params.theta();
    const double rt = params.r * params.t_mat;
    if (eta == 1.0) return std::log(w0) + rt + 0.5 * th2 * kappa2;
    return std::pow(w0, 1.0 - eta) / (1.0 - eta) * std::exp((1.0 - eta) * rt + (1.0 - eta) / (2.0 * eta) * th2 * kappa2);
}

double crra_expected_utility_unconstrained(double eta, double w0, const MarketParams& params) {
    return crra_expected_utility(eta, w0, params.t_mat, params);
}

double crra_expected_utility_constrained(double eta, double w0, double t, double rho, const MarketParams& params) {
    validate_rho_for_intermediate(rho, t, params.t_mat);
    const double kappa = rho * std::sqrt(t) + std::sqrt((1.0 - rho * rho) * (params.t_mat - t));
    return crra_expected_utility(eta, w0, kappa * kappa, params);
}

double expected_utility(const PayoffFn& payoff, const UtilitySpec& utility, const MarketParams& params,
                        const ExpectationOptions& opts) {
    auto h = [&](double x, const std::vector<double>& where) {
        if (!(x > utility.a && x < utility.b)) {
            throw DomainError("payoff '" + payoff.name() + "' = " + std::to_string(x) +
                              " leaves the utility domain at observations (" + describe(where) + ")");
        }
        const double v = utility.u(x);
        if (!std::isfinite(v)) {
            throw DomainError("utility is not finite at payoff " + std::to_string(x) + ", observations (" +
                              describe(where) + ")");
        }
        return v;
    };
    return expectation(payoff, params, opts, h, false);
}

double budget_of(const PayoffFn& payoff, const MarketParams& params, const ExpectationOptions& opts) {
    return expectation(payoff, params, opts, [](double x, const std::vector<double>&) { return x; }, true);
}

std::vector<double> admissible_rho_grid(double t, double t_mat, int n) {
    if (n < 2) throw DomainError("admissible_rho_grid: need n >= 2");
    if (!(t > 0.0 && t < t_mat)) throw DomainError("admissible_rho_grid: t must lie in (0,T)");
    const double lo = -std::sqrt(1.0 - t / t_mat);
    const double touch = std::sqrt(t / t_mat);
    std::vector<double> grid(n);
    const double h = (1.0 - lo) / n;
    for (int i = 0; i < n; ++i) grid[i] = lo + i * h;
    auto nearest = std::min_element(grid.begin(), grid.end(),
                                    [touch](double a, double b) { return std::abs(a - touch) < std::abs(b - touch); });
    *nearest = touch;
    return grid;
}

Table figure1(const MarketParams& params, double w0, double eta, double t, std::span<const double> rho_grid) {
    Table table({"rho", "eu_constrained", "eu_unconstrained"});
    const double unc = crra_expected_utility_unconstrained(eta, w0, params);
    for (double rho : rho_grid) {
        table.add_row({rho, crra_expected_utility_constrained(eta, w0, t, rho, params), unc});
    }
    return table;
}

}  // namespace optpay

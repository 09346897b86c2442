#include "optpay/target_prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optpay/eut.hpp"
#include "optpay/errors.hpp"
#include "optpay/normal.hpp"

namespace optpay {

namespace {

double funded_ratio(double w0, double b, const MarketParams& params) {
    params.validate();
    if (!(w0 > 0.0)) throw DomainError("initial wealth must be > 0");
    const double p = w0 * std::exp(params.r * params.t_mat) / b;
    if (!(p < 1.0)) {
        throw DomainError("target b = " + std::to_string(b) + " <= W0 e^{rT}: the risk-free asset reaches it surely");
    }
    return p;
}

}  // namespace

DigitalOptimum browne_optimum(double w0, double b, const MarketParams& params) {
    const double p = funded_ratio(w0, b, params);
    const double t = params.t_mat;
    const double vol = params.sigma * std::sqrt(t);
    const double lambda =
        params.s0 * std::exp((params.r - 0.5 * params.sigma * params.sigma) * t - vol * norm_quantile(p));
    DigitalOptimum out{PayoffFn::terminal(t, [b, lambda](double s) { return s > lambda ? b : 0.0; }, "browne-digital"), 0.0, 0.0, 0.0, 0.0, {}, {}};
    out.lambda = lambda;
    out.success_prob = browne_success_probability(w0, b, params);
    out.budget = b * std::exp(-params.r * t) * norm_cdf((std::log(params.s0 / lambda) + (params.r - 0.5 * params.sigma * params.sigma) * t) / vol);
    out.method = "closed-form";
    return out;
}

double browne_success_probability(double w0, double b, const MarketParams& params) {
    const double p = funded_ratio(w0, b, params);
    return norm_cdf(params.theta() * std::sqrt(params.t_mat) + norm_quantile(p));
}

DigitalOptimum random_target_optimum(double w0, const PayoffFn& target, const MarketParams& params,
                                     const SimConfig& config) {
    params.validate();
    if (!(w0 > 0.0)) throw DomainError("initial wealth must be > 0");
    const auto table = simulate_paths(config, params, target.times(), target.needs_g());
    const auto bv = evaluate(target, table);
    const std::size_t n = bv.size();
    std::vector<double> y(n);
    for (std::size_t p = 0; p < n; ++p) {
        if (bv[p] < 0.0) throw DomainError("random target must be nonnegative (path " + std::to_string(p) + ")");
        y[p] = bv[p] * table.xi[p];
    }
    const double dn = static_cast<double>(n);
    const double total = std::accumulate(y.begin(), y.end(), 0.0) / dn;

    DigitalOptimum out{target, 0.0, 0.0, 0.0, 0.0, {}, {}};
    out.method = "monte-carlo";
    if (w0 >= total) {
        out.lambda = std::numeric_limits<double>::infinity();
        out.success_prob = 1.0;
        out.budget = total;
        out.diagnostic = "budget covers the whole target: E[B xi_T] = " + std::to_string(total) + " <= W0";
        return out;
    }

    // Fill the cheapest states (smallest B xi_T) first until the budget is spent.
    std::vector<double> sorted = y;
    std::sort(sorted.begin(), sorted.end());
    double acc = 0.0;
    std::size_t k = 0;
    while (k < n && acc + sorted[k] / dn <= w0) acc += sorted[k++] / dn;
    const double lambda = k == 0 ? sorted[0] : (k < n ? 0.5 * (sorted[k - 1] + sorted[k]) : sorted[n - 1]);

    const auto params_copy = params;
    PayoffFn payoff(
        target.times(), target.needs_g(),
        [target, lambda, params_copy](const Observables& o) {
            const double bval = target(o);
            const double xi = state_price_density(params_copy, o.s_T(), params_copy.t_mat);
            return bval * xi < lambda ? bval : 0.0;
        },
        "random-target-digital");

    std::vector<double> spent(n);
    std::size_t hits = 0;
    for (std::size_t p = 0; p < n; ++p) {
        const bool in = y[p] < lambda;
        spent[p] = in ? y[p] : 0.0;
        hits += in ? 1 : 0;
    }
    const auto est = mean_estimate(spent, config);
    out.payoff = payoff;
    out.lambda = lambda;
    out.success_prob = static_cast<double>(hits) / dn;
    out.budget = est.value;
    out.budget_se = est.std_err;
    return out;
}

DigitalOptimum benchmark_constrained_optimum(double w0, double b, const BenchmarkSpec& bench, const CopulaSpec& copula,
                                             const MarketParams& params, const SimConfig& config) {
    const double p = funded_ratio(w0, b, params);
    if (bench.kind == BenchmarkSpec::Kind::Intermediate && copula.kind() == CopulaSpec::Kind::Gaussian) {
        validate_rho_for_intermediate(copula.rho(), bench.t, params.t_mat);
    }
    auto make_payoff = [&](double c) {
        auto score = [bench, copula, params](double a, double s) { return construction_score(bench, copula, params, a, s); };
        if (bench.kind == BenchmarkSpec::Kind::Terminal) {
            return PayoffFn::terminal(params.t_mat, [=](double s) { return score(s, s) > c ? b : 0.0; }, "constrained-digital");
        }
        return benchmark_payoff(bench, params, [=](double a, double s) { return score(a, s) > c ? b : 0.0; },
                                "constrained-digital");
    };

    DigitalOptimum out{PayoffFn::constant(params.t_mat, 0.0), 0.0, 0.0, 0.0, 0.0, {}, {}};
    if (bench.kind != BenchmarkSpec::Kind::External) {
        const double kappa = dependence_kappa(bench, copula, params);
        const double c = -params.theta() * kappa - norm_quantile(p);
        out.payoff = make_payoff(c);
        out.lambda = norm_cdf(c);
        out.success_prob = norm_cdf(-c);
        out.budget = b * std::exp(-params.r * params.t_mat) * norm_cdf(-c - params.theta() * kappa);
        out.method = "closed-form";
        return out;
    }

    const auto table = simulate_paths(config, params, benchmark_times(bench, params), bench.needs_g);
    const auto a = evaluate(benchmark_payoff(bench, params, [](double av, double) { return av; }), table);
    const std::size_t n = a.size();
    std::vector<std::pair<double, double>> wx(n);
    for (std::size_t i = 0; i < n; ++i) wx[i] = {construction_score(bench, copula, params, a[i], table.s_T()[i]), table.xi[i]};
    std::sort(wx.begin(), wx.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    const double dn = static_cast<double>(n);
    double acc = 0.0;
    std::size_t k = 0;
    while (k < n && acc + b * wx[k].second / dn <= w0) acc += b * wx[k++].second / dn;
    if (k == n) throw InfeasibleError("benchmark_constrained_optimum: budget funds every state", 0.0, acc);
    const double c = k == 0 ? wx[0].first : 0.5 * (wx[k - 1].first + wx[k].first);
    std::vector<double> spent(n);
    for (std::size_t i = 0; i < n; ++i) spent[i] = wx[i].first > c ? b * wx[i].second : 0.0;
    const auto est = mean_estimate(spent, config);
    out.payoff = make_payoff(c);
    out.lambda = norm_cdf(c);
    out.success_prob = static_cast<double>(k) / dn;
    out.budget = est.value;
    out.budget_se = est.std_err;
    out.method = "monte-carlo";
    return out;
}

ExplicitDigital intermediate_gaussian_digital(double w0, double b, double t, double rho, const MarketParams& params) {
    const double p = funded_ratio(w0, b, params);
    validate_rho_for_intermediate(rho, t, params.t_mat);
    const double big_t = params.t_mat;
    const double alpha = std::sqrt((big_t - t) / (t * (1.0 - rho * rho))) * rho - 1.0;
    const double k = (big_t - t) / (1.0 - rho * rho);
    const double lambda = std::pow(params.s0, alpha + 1.0) *
                          std::exp((params.r - 0.5 * params.sigma * params.sigma) * (alpha * t + big_t) -
                                   params.sigma * std::sqrt(k) * norm_quantile(p));
    auto payoff = PayoffFn::pair(
        t, big_t, [=](double st, double sT) { return std::pow(st, alpha) * sT > lambda ? b : 0.0; }, "explicit-digital");
    return {alpha, k, lambda, payoff};
}

double constrained_expected_payoff(double w0, double b, double t, double rho, const MarketParams& params) {
    const double p = funded_ratio(w0, b, params);
    if (!(t > 0.0 && t < params.t_mat)) throw DomainError("t must lie in (0,T)");
    if (!(std::abs(rho) < 1.0)) throw DomainError("rho must lie in (-1,1)");
    const double big_t = params.t_mat;
    const double alpha = std::sqrt((big_t - t) / (t * (1.0 - rho * rho))) * rho - 1.0;
    const double k = (big_t - t) / (1.0 - rho * rho);
    return b * norm_cdf(params.theta() * (alpha * t + big_t) / std::sqrt(k) + norm_quantile(p));
}

double unconstrained_expected_payoff(double w0, double b, const MarketParams& params) {
    return b * browne_success_probability(w0, b, params);
}

Table figure2_curve(const MarketParams& params, double w0, double b, double t, std::span<const double> rho_grid) {
    Table table({"rho", "expected_constrained", "expected_unconstrained"});
    const double unc = unconstrained_expected_payoff(w0, b, params);
    for (double rho : rho_grid) table.add_row({rho, constrained_expected_payoff(w0, b, t, rho, params), unc});
    return table;
}

}  // namespace optpay

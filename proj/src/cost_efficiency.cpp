#include "optpay/cost_efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "optpay/errors.hpp"
#include "optpay/normal.hpp"
#include "optpay/quadrature.hpp"
#include "optpay/stats.hpp"

namespace optpay {

namespace {

constexpr std::size_t kMaxKinkBreaks = 2000;

std::vector<double> kink_levels(const Dist1D& target) {
    if (target.kind() == Dist1D::Kind::Empirical) {
        const auto c = target.knot_cdfs();
        if (c.size() <= kMaxKinkBreaks) return {c.begin(), c.end()};
        return {};
    }
    return target.kink_probs();
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::ClosedForm: return "closed-form";
        case Method::Quadrature: return "quadrature";
        case Method::MonteCarlo: return "monte-carlo";
    }
    return "unknown";
}

double z_of_sT(const MarketParams& params, double s) {
    return (std::log(s / params.s0) - params.log_drift() * params.t_mat) / (params.sigma * std::sqrt(params.t_mat));
}

double price_in_z(const MarketParams& params, const std::function<double(double)>& h, std::span<const double> z_breaks,
                  int panels) {
    const auto [alpha, beta] = state_price_coeffs(params, params.t_mat);
    const double m = params.log_drift() * params.t_mat;
    const double v = params.sigma * std::sqrt(params.t_mat);
    auto integrand = [&](double z) { return h(z) * alpha * std::exp(-beta * (m + v * z)); };
    return gaussian_expectation(integrand, z_breaks, {12.0, panels});
}

double price_terminal(const MarketParams& params, const std::function<double(double)>& f,
                      std::span<const double> s_breaks, int panels) {
    std::vector<double> zb;
    for (double s : s_breaks) {
        if (s > 0.0) zb.push_back(z_of_sT(params, s));
    }
    const double m = params.log_drift() * params.t_mat;
    const double v = params.sigma * std::sqrt(params.t_mat);
    return price_in_z(params, [&](double z) { return f(params.s0 * std::exp(m + v * z)); }, zb, panels);
}

PayoffFn cost_efficient_payoff(const Dist1D& target, const MarketParams& params) {
    return PayoffFn::terminal(
        params.t_mat, [target, params](double s) { return target.quantile(clamp_open_unit(cdf_sT(params, s))); },
        "cost-efficient");
}

PayoffFn most_expensive_payoff(const Dist1D& target, const MarketParams& params) {
    return PayoffFn::terminal(
        params.t_mat, [target, params](double s) { return target.quantile(clamp_open_unit(1.0 - cdf_sT(params, s))); },
        "most-expensive");
}

PayoffFn f_a_payoff(const Dist1D& target, const MarketParams& params, double u_a) {
    if (!(u_a >= 0.0 && u_a <= 1.0)) throw DomainError("f_a_payoff: u_a must lie in [0,1]");
    return PayoffFn::terminal(
        params.t_mat,
        [target, params, u_a](double s) {
            const double p = cdf_sT(params, s);
            return target.quantile(clamp_open_unit(p <= u_a ? 1.0 - p : p - u_a));
        },
        "f_a");
}

double f_a_price(const Dist1D& target, const MarketParams& params, double u_a) {
    if (!(u_a >= 0.0 && u_a <= 1.0)) throw DomainError("f_a_price: u_a must lie in [0,1]");
    const double z_a = u_a <= 0.0 ? -std::numeric_limits<double>::infinity()
                       : u_a >= 1.0 ? std::numeric_limits<double>::infinity()
                                    : norm_quantile(u_a);
    std::vector<double> zb;
    if (std::isfinite(z_a)) zb.push_back(z_a);
    for (double pk : kink_levels(target)) {
        if (pk <= 0.0 || pk >= 1.0) continue;
        const double z_lo = norm_quantile(1.0 - pk);
        if (z_lo <= z_a) zb.push_back(z_lo);
        if (pk + u_a < 1.0) {
            const double z_hi = norm_quantile(pk + u_a);
            if (z_hi > z_a) zb.push_back(z_hi);
        }
    }
    auto h = [&](double z) {
        const double level = z <= z_a ? norm_cdf(-z) : norm_cdf(z) - u_a;
        return target.quantile(clamp_open_unit(level));
    };
    return price_in_z(params, h, zb);
}

PriceRange attainable_prices(const Dist1D& target, const MarketParams& params) {
    return {f_a_price(target, params, 0.0), f_a_price(target, params, 1.0)};
}

AtPrice payoff_at_price(const Dist1D& target, double price, const MarketParams& params) {
    const double tol = 1e-6 * params.s0;
    const auto range = attainable_prices(target, params);
    if (price < range.cheapest - tol || price > range.most_expensive + tol) {
        throw InfeasibleError("payoff_at_price: price " + std::to_string(price) + " outside attainable interval [" +
                                  std::to_string(range.cheapest) + ", " + std::to_string(range.most_expensive) + "]",
                              range.cheapest, range.most_expensive);
    }
    auto finish = [&](double u, double achieved) {
        const double a = u <= 0.0 ? 0.0 : u >= 1.0 ? std::numeric_limits<double>::infinity() : quantile_sT(params, u);
        return AtPrice{f_a_payoff(target, params, u), u, a, achieved, method_name(Method::Quadrature)};
    };
    if (std::abs(price - range.cheapest) <= tol) return finish(0.0, range.cheapest);
    if (std::abs(price - range.most_expensive) <= tol) return finish(1.0, range.most_expensive);

    double lo = 0.0, hi = 1.0;
    double u = 0.5, achieved = 0.0;
    for (int it = 0; it < 100; ++it) {
        u = 0.5 * (lo + hi);
        achieved = f_a_price(target, params, u);
        if (std::abs(achieved - price) <= tol) break;
        (achieved < price ? lo : hi) = u;
    }
    return finish(u, achieved);
}

Improvement strict_improvement(const Dist1D& law, double price, const MarketParams& params) {
    const double c0 = f_a_price(law, params, 0.0);
    const double cash = (price - c0) * std::exp(params.r * params.t_mat);
    auto base = cost_efficient_payoff(law, params);
    auto f = base.terminal_fn();
    return {PayoffFn::terminal(params.t_mat, [f, cash](double s) { return f(s) + cash; }, "strict-improvement"),
            price, c0, cash, method_name(Method::Quadrature)};
}

Improvement strict_improvement(const PayoffFn& payoff, const MarketParams& params, const SimConfig& config,
                               std::size_t max_knots) {
    if (payoff.is_terminal()) {
        std::vector<double> grid;
        for (int i = 1; i < 2000; ++i) grid.push_back(quantile_sT(params, i / 2000.0));
        if (is_nondecreasing_on(payoff.terminal_fn(), grid).increasing) {
            const double c = price_terminal(params, payoff.terminal_fn());
            return {payoff, c, c, 0.0, "already cost-efficient"};
        }
    }
    const auto table = simulate_paths(config, params, payoff.times(), payoff.needs_g());
    const auto values = evaluate(payoff, table);
    const double c = price_from_values(values, table, config, params).value;
    auto improved = strict_improvement(Dist1D::from_samples(values, max_knots), c, params);
    improved.method = method_name(Method::MonteCarlo);
    return improved;
}

MonotonicityReport is_nondecreasing_on(const std::function<double(double)>& f, std::span<const double> s_grid) {
    std::size_t bad = 0;
    double prev = 0.0;
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        const double v = f(s_grid[i]);
        if (i > 0 && v < prev - 1e-12 * (1.0 + std::abs(prev))) ++bad;
        prev = v;
    }
    return {bad == 0, bad, s_grid.size()};
}

MonotonicityReport is_cost_efficient(const PayoffFn& payoff, const MarketParams& params, std::size_t n_paths,
                                     std::uint64_t seed) {
    SimConfig cfg;
    cfg.n_paths = n_paths;
    cfg.seed = seed;
    const auto table = simulate_paths(cfg, params, payoff.times(), payoff.needs_g());
    const auto values = evaluate(payoff, table);
    const auto& s = table.s_T();
    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
    std::size_t bad = 0;
    for (std::size_t i = 1; i < order.size(); ++i) {
        const double prev = values[order[i - 1]];
        if (values[order[i]] < prev - 1e-12 * (1.0 + std::abs(prev))) ++bad;
    }
    return {bad == 0, bad, s.size()};
}

Dist1D put_payoff_distribution(const MarketParams& params, double strike) {
    if (!(strike > 0.0)) throw DomainError("put_payoff_distribution: strike must be > 0");
    const double atom = 1.0 - cdf_sT(params, strike);
    auto cdf = [params, strike](double x) {
        if (x < 0.0) return 0.0;
        if (x >= strike) return 1.0;
        return 1.0 - cdf_sT(params, strike - x);
    };
    auto quantile = [params, strike, atom](double p) {
        if (p <= atom) return 0.0;
        return std::max(0.0, strike - quantile_sT(params, clamp_open_unit(1.0 - p)));
    };
    return Dist1D::custom(cdf, quantile, {atom}, "put-payoff");
}

double power_put_coefficient(const MarketParams& params) {
    return params.s0 * params.s0 * std::exp(2.0 * params.log_drift() * params.t_mat);
}

std::vector<ConditionalMeanRow> conditional_means_below(std::span<const double> s_T, std::span<const double> f,
                                                        std::span<const double> x, std::span<const double> a_grid) {
    if (s_T.size() != f.size() || s_T.size() != x.size()) throw DomainError("conditional_means_below: size mismatch");
    std::vector<ConditionalMeanRow> rows;
    for (double a : a_grid) {
        std::vector<double> fs, xs, d;
        for (std::size_t i = 0; i < s_T.size(); ++i) {
            if (s_T[i] < a) {
                fs.push_back(f[i]);
                xs.push_back(x[i]);
                d.push_back(f[i] - x[i]);
            }
        }
        if (d.size() < 2) throw DomainError("conditional_means_below: fewer than 2 paths below a = " + std::to_string(a));
        rows.push_back({a, mean(fs), mean(xs), sample_sd(d) / std::sqrt(static_cast<double>(d.size())), d.size()});
    }
    return rows;
}

Table payoff_table(const PayoffFn& payoff, std::span<const double> s_grid) {
    if (!payoff.is_terminal()) throw DomainError("payoff_table: payoff is not a function of S_T alone");
    Table t({"s", "payoff"});
    for (double s : s_grid) t.add_row({s, payoff.terminal_fn()(s)});
    t.add_note("payoff: " + payoff.name());
    return t;
}

}  // namespace optpay

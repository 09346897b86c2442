#include "optpay/asian.hpp"

#include <algorithm>
#include <cmath>

#include "optpay/cost_efficiency.hpp"
#include "optpay/errors.hpp"
#include "optpay/normal.hpp"
#include "optpay/quadrature.hpp"

namespace optpay {

namespace {

void check_strike(double strike) {
    if (!(strike >= 0.0)) throw DomainError("strike must be >= 0");
}

PriceQuote closed(double v, std::string id) { return {v, "closed-form", 0.0, std::move(id)}; }
PriceQuote quad(double v, std::string id) { return {v, "quadrature", 0.0, std::move(id)}; }

// e^{-rT} E_Q[(e^Y - K)^+] for Y ~ N(m, s^2) under Q.
double lognormal_call(double disc, double m, double s, double strike) {
    const double fwd = std::exp(m + 0.5 * s * s);
    if (strike <= 0.0) return disc * fwd;
    const double d2 = (m - std::log(strike)) / s;
    return disc * (fwd * norm_cdf(d2 + s) - strike * norm_cdf(d2));
}

// 2-D expectation of xi_T h(S_T, G_T) under P. z1 drives ln S_T, z2 the
// residual of ln G_T given ln S_T. `kink(z1)` returns z2-locations where h kinks.
double average_expectation(const MarketParams& params, const std::function<double(double, double)>& h,
                           const std::function<std::vector<double>(double, double, double)>& kink) {
    params.validate(false);
    const auto [alpha, beta] = state_price_coeffs(params, params.t_mat);
    const double ln_s0 = std::log(params.s0);
    const double m = params.log_drift() * params.t_mat;
    const double vs = params.sigma * std::sqrt(params.t_mat);
    const double vg = params.sigma * std::sqrt(params.t_mat / 12.0);
    auto ln_s = [=](double z1) { return ln_s0 + m + vs * z1; };
    auto f = [&](double z1, double z2) {
        const double ls = ln_s(z1);
        const double lg = 0.5 * (ln_s0 + ls) + vg * z2;
        return alpha * std::exp(-beta * (ls - ln_s0)) * h(std::exp(ls), std::exp(lg));
    };
    auto breaks = [&](double z1) {
        const double ls = ln_s(z1);
        return kink(ls, 0.5 * (ln_s0 + ls), vg);
    };
    return gaussian_expectation_2d(f, breaks, {10.0, 80});
}

}  // namespace

double power_call_coefficient(const MarketParams& params) {
    const double k = 1.0 / std::sqrt(3.0);
    return std::exp(std::log(params.s0) * (1.0 - k) + params.log_drift() * params.t_mat * (0.5 - k));
}

PayoffFn power_call_payoff(const MarketParams& params, double strike) {
    check_strike(strike);
    const double d = power_call_coefficient(params);
    const double k = 1.0 / std::sqrt(3.0);
    return PayoffFn::terminal(params.t_mat, [=](double s) { return std::max(d * std::pow(s, k) - strike, 0.0); },
                              "power-call");
}

PriceQuote price_cost_efficient_fixed_strike(const MarketParams& params, double strike) {
    check_strike(strike);
    params.validate();
    // ln(d S_T^{1/sqrt 3}) = ln S0 + m T/2 + s_g Z, and Z has mean -theta sqrt(T) under Q.
    const double s_g = params.sigma * std::sqrt(params.t_mat / 3.0);
    const double m_q = std::log(params.s0) + 0.5 * params.log_drift() * params.t_mat -
                       s_g * params.theta() * std::sqrt(params.t_mat);
    return closed(lognormal_call(std::exp(-params.r * params.t_mat), m_q, s_g, strike), "power-call");
}

PayoffFn geometric_call_payoff(const MarketParams& params, double strike) {
    check_strike(strike);
    return PayoffFn::with_average(params.t_mat, [strike](double g, double) { return std::max(g - strike, 0.0); },
                                  "geometric-asian-call");
}

PriceQuote price_kemna_vorst(const MarketParams& params, double strike) {
    check_strike(strike);
    params.validate(false);
    const double t = params.t_mat;
    const double s_g = params.sigma * std::sqrt(t / 3.0);
    if (strike == 0.0) return closed(params.s0 * std::exp(-0.5 * params.r * t - params.sigma * params.sigma * t / 12.0), "kemna-vorst");
    const double d2 = (std::log(params.s0 / strike) + 0.5 * (params.r - 0.5 * params.sigma * params.sigma) * t) / s_g;
    const double d1 = d2 + s_g;
    const double v = params.s0 * std::exp(-0.5 * params.r * t - params.sigma * params.sigma * t / 12.0) * norm_cdf(d1) -
                     strike * std::exp(-params.r * t) * norm_cdf(d2);
    return closed(v, "kemna-vorst");
}

PayoffFn floating_put_payoff(const MarketParams& params) {
    return PayoffFn::with_average(params.t_mat, [](double g, double s) { return std::max(g - s, 0.0); },
                                  "floating-asian-put");
}

PriceQuote price_floating_asian_put(const MarketParams& params) {
    params.validate(false);
    const double t = params.t_mat;
    const double s_g = params.sigma * std::sqrt(t / 3.0);
    const double f = (params.sigma * params.sigma * t / 12.0 - 0.5 * params.r * t) / s_g;
    const double v = params.s0 * (std::exp(-0.5 * params.r * t - params.sigma * params.sigma * t / 12.0) * norm_cdf(f) -
                                  norm_cdf(f - s_g));
    return closed(v, "floating-asian-put");
}

double cheapest_floating_twin_coefficient(const MarketParams& params) {
    return std::exp(0.5 * params.log_drift() * params.t_mat) / params.s0;
}

PayoffFn cheapest_floating_twin_payoff(const MarketParams& params) {
    const double a = cheapest_floating_twin_coefficient(params);
    return PayoffFn::with_average(params.t_mat,
                                  [a](double g, double s) { return std::max(g - a * g * g * g / s, 0.0); },
                                  "cheapest-floating-twin");
}

PriceQuote price_cheapest_floating_twin(const MarketParams& params) {
    params.validate(false);
    const double t = params.t_mat;
    const double s_g = params.sigma * std::sqrt(t / 3.0);
    const double d = (params.sigma * params.sigma * t / 12.0 - 0.5 * params.mu * t) / s_g;
    const double v = params.s0 * (std::exp(-0.5 * params.r * t - params.sigma * params.sigma * t / 12.0) * norm_cdf(d) -
                                  std::exp(0.5 * (params.mu - params.r) * t) * norm_cdf(d - s_g));
    return closed(v, "cheapest-floating-twin");
}

PriceQuote quadrature_power_call(const MarketParams& params, double strike) {
    check_strike(strike);
    const auto payoff = power_call_payoff(params, strike);
    std::vector<double> breaks;
    if (strike > 0.0) breaks.push_back(std::pow(strike / power_call_coefficient(params), std::sqrt(3.0)));
    return quad(price_terminal(params, payoff.terminal_fn(), breaks), "power-call");
}

PriceQuote quadrature_geometric_call(const MarketParams& params, double strike) {
    check_strike(strike);
    const double ln_k = strike > 0.0 ? std::log(strike) : -1e300;
    auto h = [strike](double, double g) { return std::max(g - strike, 0.0); };
    auto kink = [ln_k](double, double mean_g, double vg) { return std::vector<double>{(ln_k - mean_g) / vg}; };
    return quad(average_expectation(params, h, kink), "kemna-vorst");
}

PriceQuote quadrature_floating_put(const MarketParams& params) {
    auto h = [](double s, double g) { return std::max(g - s, 0.0); };
    auto kink = [](double ln_s, double mean_g, double vg) { return std::vector<double>{(ln_s - mean_g) / vg}; };
    return quad(average_expectation(params, h, kink), "floating-asian-put");
}

PriceQuote quadrature_cheapest_floating_twin(const MarketParams& params) {
    const double a = cheapest_floating_twin_coefficient(params);
    auto h = [a](double s, double g) { return std::max(g - a * g * g * g / s, 0.0); };
    // Zero where G^2 = S / a.
    auto kink = [a](double ln_s, double mean_g, double vg) {
        return std::vector<double>{(0.5 * (ln_s - std::log(a)) - mean_g) / vg};
    };
    return quad(average_expectation(params, h, kink), "cheapest-floating-twin");
}

PriceQuote mc_quote(const PayoffFn& payoff, const SimConfig& config, const MarketParams& params) {
    const auto est = price(payoff, config, params);
    return {est.value, "monte-carlo", est.std_err, payoff.name()};
}

double discrete_kemna_vorst(const MarketParams& params, double strike, int n_steps) {
    check_strike(strike);
    if (n_steps < 1) throw DomainError("discrete_kemna_vorst: need at least one step");
    const double t = params.t_mat;
    const double dt = t / n_steps;
    // Var of the trapezoid sum of W: sum_k dt * (tail weight from k on)^2.
    double tail = 0.5 * dt;
    double quad_form = 0.0;
    for (int k = n_steps; k >= 1; --k) {
        quad_form += dt * tail * tail;
        tail += (k == 1 ? 0.0 : dt);
    }
    const double s = params.sigma * std::sqrt(quad_form) / t;
    const double m = std::log(params.s0) + 0.5 * (params.r - 0.5 * params.sigma * params.sigma) * t;
    return lognormal_call(std::exp(-params.r * t), m, s, strike);
}

std::vector<ConvergenceRow> discretization_study(const MarketParams& params, double strike,
                                                 const std::vector<int>& steps_per_year, SimConfig config) {
    config.measure = Measure::RiskNeutral;
    const double cont = price_kemna_vorst(params, strike).value;
    std::vector<ConvergenceRow> rows;
    for (int spy : steps_per_year) {
        config.steps_per_year = spy;
        const int n = std::max(1, static_cast<int>(std::llround(spy * params.t_mat)));
        const double disc = discrete_kemna_vorst(params, strike, n);
        const auto est = price(geometric_call_payoff(params, strike), config, params);
        rows.push_back({spy, disc, est.value, est.std_err, disc - cont});
    }
    return rows;
}

}  // namespace optpay

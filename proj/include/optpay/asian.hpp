#pragma once

#include <string>
#include <vector>

#include "optpay/market.hpp"
#include "optpay/mc.hpp"
#include "optpay/payoff.hpp"

namespace optpay {

/// A price together with the method that produced it.
struct PriceQuote {
    double value = 0.0;
    std::string method;     ///< closed-form | quadrature | monte-carlo
    double std_err = 0.0;   ///< zero unless monte-carlo
    std::string formula_id; ///< which pricing formula or payoff the number refers to
};

/// Cost-efficient fixed-strike payoff with the law of G_T:
/// (d S_T^{1/sqrt 3} - K)^+, a power call.
double power_call_coefficient(const MarketParams& params);
PayoffFn power_call_payoff(const MarketParams& params, double strike);
PriceQuote price_cost_efficient_fixed_strike(const MarketParams& params, double strike);

/// Continuously monitored geometric Asian call (G_T - K)^+.
PayoffFn geometric_call_payoff(const MarketParams& params, double strike);
PriceQuote price_kemna_vorst(const MarketParams& params, double strike);

/// Floating-strike geometric Asian put (G_T - S_T)^+.
PayoffFn floating_put_payoff(const MarketParams& params);
PriceQuote price_floating_asian_put(const MarketParams& params);

/// Cheapest payoff with the joint law of ((G_T - S_T)^+, G_T):
/// (G_T - a G_T^3 / S_T)^+ with a = exp((mu - sigma^2/2) T / 2) / S0.
double cheapest_floating_twin_coefficient(const MarketParams& params);
PayoffFn cheapest_floating_twin_payoff(const MarketParams& params);
PriceQuote price_cheapest_floating_twin(const MarketParams& params);

/// Deterministic oracles: E[xi_T X] by Gaussian quadrature under the
/// physical measure (1-D in S_T for the power call, 2-D over S_T and the
/// conditional residual of ln G_T otherwise).
PriceQuote quadrature_power_call(const MarketParams& params, double strike);
PriceQuote quadrature_geometric_call(const MarketParams& params, double strike);
PriceQuote quadrature_floating_put(const MarketParams& params);
PriceQuote quadrature_cheapest_floating_twin(const MarketParams& params);

/// Monte Carlo quote of any payoff.
PriceQuote mc_quote(const PayoffFn& payoff, const SimConfig& config, const MarketParams& params);

/// Kemna-Vorst price for G_T replaced by its trapezoidal approximation on
/// `n_steps` equal steps (the quantity the simulator actually averages).
double discrete_kemna_vorst(const MarketParams& params, double strike, int n_steps);

struct ConvergenceRow {
    int steps_per_year;
    double discrete_price;  ///< closed form for the trapezoidal average
    double mc;
    double std_err;
    double bias;            ///< discrete_price - continuous closed form
};

/// Discretization study of the geometric call under Q across step counts.
std::vector<ConvergenceRow> discretization_study(const MarketParams& params, double strike,
                                                 const std::vector<int>& steps_per_year, SimConfig config);

}  // namespace optpay

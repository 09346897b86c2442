#pragma once

#include <span>
#include <string>

#include "optpay/benchmark.hpp"
#include "optpay/copula.hpp"
#include "optpay/market.hpp"
#include "optpay/mc.hpp"
#include "optpay/payoff.hpp"
#include "optpay/table.hpp"

namespace optpay {

struct DigitalOptimum {
    PayoffFn payoff;
    double lambda = 0.0;         ///< threshold on the scale stated by the constructor
    double success_prob = 0.0;   ///< P[X_T >= target]
    double budget = 0.0;         ///< price of the optimum
    double budget_se = 0.0;      ///< MC standard error, 0 for closed forms
    std::string method;
    std::string diagnostic;
};

/// b 1{S_T > lambda} with lambda = S0 exp((r - sigma^2/2) T - sigma sqrt(T) Phi^-1(p)),
/// p = W0 e^{rT}/b. Throws DomainError when b <= W0 e^{rT} (the bond already hits b).
DigitalOptimum browne_optimum(double w0, double b, const MarketParams& params);
double browne_success_probability(double w0, double b, const MarketParams& params);

/// B 1{B xi_T < lambda} with lambda solving E[B xi_T 1{B xi_T < lambda}] = W0
/// on the empirical law of B xi_T from simulation. If W0 >= E[B xi_T] the
/// target is fully funded and B itself is returned with a diagnostic.
/// `lambda` is on the B xi_T scale.
DigitalOptimum random_target_optimum(double w0, const PayoffFn& target, const MarketParams& params,
                                     const SimConfig& config);

/// b 1{Z_T > lambda} under a dependence constraint with the benchmark. For
/// market benchmarks lambda is closed form on the score w = Phi^-1(Z):
/// w > -theta kappa - Phi^-1(p); external benchmarks solve the budget by
/// simulation. `lambda` is reported on the Z scale.
DigitalOptimum benchmark_constrained_optimum(double w0, double b, const BenchmarkSpec& bench, const CopulaSpec& copula,
                                             const MarketParams& params, const SimConfig& config = {});

/// The same optimum for an S_t benchmark with Gaussian rho, written as
/// b 1{S_t^alpha S_T > lambda}.
struct ExplicitDigital {
    double alpha;
    double k;
    double lambda;
    PayoffFn payoff;
};
ExplicitDigital intermediate_gaussian_digital(double w0, double b, double t, double rho, const MarketParams& params);

/// b Phi(theta kappa + Phi^-1(p)) with kappa = (alpha t + T) / sqrt(k).
double constrained_expected_payoff(double w0, double b, double t, double rho, const MarketParams& params);
/// b Phi(theta sqrt(T) + Phi^-1(p)).
double unconstrained_expected_payoff(double w0, double b, const MarketParams& params);

/// Rows (rho, expected_constrained, expected_unconstrained).
Table figure2_curve(const MarketParams& params, double w0, double b, double t, std::span<const double> rho_grid);

}  // namespace optpay

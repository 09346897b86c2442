#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "optpay/benchmark.hpp"
#include "optpay/copula.hpp"
#include "optpay/isotonic.hpp"
#include "optpay/market.hpp"
#include "optpay/mc.hpp"
#include "optpay/payoff.hpp"
#include "optpay/table.hpp"

namespace optpay {

/// Utility u with its marginal u' and inverse marginal (u')^-1 on (a, b).
struct UtilitySpec {
    enum class Kind { Crra, Custom };

    Kind kind = Kind::Crra;
    double eta = 1.0;  ///< relative risk aversion for Crra
    std::function<double(double)> u;
    std::function<double(double)> u_prime;
    std::function<double(double)> u_prime_inv;
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();

    /// u(x) = x^{1-eta}/(1-eta), ln x at eta = 1.
    static UtilitySpec crra(double eta);
    static UtilitySpec custom(std::function<double(double)> u, std::function<double(double)> u_prime,
                              std::function<double(double)> u_prime_inv, double a, double b);
};

struct MertonOptimum {
    PayoffFn payoff;  ///< (u')^-1(lambda xi_T), a function of S_T
    double lambda;
    double budget;    ///< quadrature E[xi_T X]
};

/// Unconstrained optimum with lambda from E[xi_T X] = w0, by bisection in
/// log lambda (bracket grown by factors of 10, 1e-10 relative tolerance).
/// Throws InfeasibleError when w0 lies outside (a e^{-rT}, b e^{-rT}).
MertonOptimum merton_optimum(const UtilitySpec& utility, double w0, const MarketParams& params);

/// Dependence strength kappa with E[xi_T | Z] = exp(-rT - theta^2 kappa^2/2 - theta kappa w),
/// w = Phi^-1(Z), for market benchmarks. kappa^2 = T means no constraint.
double dependence_kappa(const BenchmarkSpec& bench, const CopulaSpec& copula, const MarketParams& params);

/// w = Phi^-1(Z_T) with Z_T = C^-1_{1|F_A(A)}(F_{S_T|A}(S_T)), from the
/// benchmark value a and the terminal price s.
double construction_score(const BenchmarkSpec& bench, const CopulaSpec& copula, const MarketParams& params, double a,
                          double s);

struct PhiOptions {
    SimConfig config{};   ///< used only when no closed form exists
    int bins = 200;
};

/// phi(z) = E[xi_T | Z_T = z] on z_grid, closed form for market benchmarks,
/// otherwise bin averages over simulated pairs (equal-probability Z bins).
std::vector<double> conditional_expectation_xi_given_z(const BenchmarkSpec& bench, const CopulaSpec& copula,
                                                       const MarketParams& params, std::span<const double> z_grid,
                                                       const PhiOptions& opts = {});

struct EutOptions {
    int knots = 2001;
    PhiOptions phi{};
};

struct EutOptimum {
    PayoffFn payoff;
    double lambda = 0.0;
    bool degenerate = false;
    std::string diagnostic;
    std::string phi_method;        ///< closed-form | monte-carlo
    IsotonicFit fit;               ///< z-knots, phi, projected phi
    std::function<double(double)> x_of_w;  ///< optimum as a function of w = Phi^-1(Z)
};

/// Dependence-constrained optimum (u')^-1(lambda phi_hat(Z_T)): phi on the
/// midpoint z-knots, projected to a nonincreasing function by PAVA,
/// interpolated log-linearly in w = Phi^-1(z), lambda from the budget. A
/// projection that collapses to a constant yields W0 e^{rT} and a diagnostic.
EutOptimum constrained_eut_optimum(const UtilitySpec& utility, double w0, const BenchmarkSpec& bench,
                                   const CopulaSpec& copula, const MarketParams& params, const EutOptions& opts = {});

/// CRRA optimum in closed form for a market benchmark:
///   X = W0 e^{rT} exp(theta^2 kappa^2 (1/eta - 1/(2 eta^2))) exp(theta kappa w / eta).
/// With the S_T benchmark and the Fréchet upper copula this is the Merton optimum.
PayoffFn crra_closed_form_optimum(double eta, double w0, const BenchmarkSpec& bench, const CopulaSpec& copula,
                                  const MarketParams& params);
double crra_closed_form_value(double eta, double w0, double kappa, double w, const MarketParams& params);

/// Closed-form expected utility of the CRRA optimum for a given kappa^2.
double crra_expected_utility(double eta, double w0, double kappa2, const MarketParams& params);
double crra_expected_utility_unconstrained(double eta, double w0, const MarketParams& params);
/// S_t benchmark with Gaussian rho: kappa = rho sqrt(t) + sqrt((1 - rho^2)(T - t)).
double crra_expected_utility_constrained(double eta, double w0, double t, double rho, const MarketParams& params);

struct ExpectationOptions {
    SimConfig config{};  ///< used when the payoff needs simulation
};

/// E[u(X)] under P: 1-D quadrature for payoffs of S_T, 2-D quadrature for
/// payoffs of (S_t, S_T) or (G_T, S_T), simulation otherwise. Throws
/// DomainError naming the price region where X leaves (a, b).
double expected_utility(const PayoffFn& payoff, const UtilitySpec& utility, const MarketParams& params,
                        const ExpectationOptions& opts = {});

/// E[xi_T X] with the same quadrature scheme (MC otherwise).
double budget_of(const PayoffFn& payoff, const MarketParams& params, const ExpectationOptions& opts = {});

/// n admissible correlations in [-sqrt(1 - t/T), 1), with the point nearest
/// sqrt(t/T) moved onto it.
std::vector<double> admissible_rho_grid(double t, double t_mat, int n = 41);

/// Rows (rho, eu_constrained, eu_unconstrained) for CRRA(eta), S_t benchmark.
Table figure1(const MarketParams& params, double w0, double eta, double t, std::span<const double> rho_grid);

}  // namespace optpay

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "optpay/distribution.hpp"
#include "optpay/market.hpp"
#include "optpay/mc.hpp"
#include "optpay/payoff.hpp"
#include "optpay/table.hpp"

namespace optpay {

/// How a number was produced.
enum class Method { ClosedForm, Quadrature, MonteCarlo };
std::string method_name(Method m);

/// E[xi_T h(Z)] with S_T = S0 exp((mu - sigma^2/2) T + sigma sqrt(T) Z), by
/// composite Gauss-Legendre on z in [-12, 12]. Kinks of h go in `z_breaks`.
double price_in_z(const MarketParams& params, const std::function<double(double)>& h,
                  std::span<const double> z_breaks = {}, int panels = 1000);

/// c0(f(S_T)) by quadrature; `s_breaks` are price levels where f kinks or jumps.
double price_terminal(const MarketParams& params, const std::function<double(double)>& f,
                      std::span<const double> s_breaks = {}, int panels = 1000);

/// z on the standard-normal scale of S_T for a price level s.
double z_of_sT(const MarketParams& params, double s);

/// X* = F^-1(F_{S_T}(S_T)): the cheapest payoff with law `target`.
PayoffFn cost_efficient_payoff(const Dist1D& target, const MarketParams& params);
/// Z* = F^-1(1 - F_{S_T}(S_T)): the most expensive payoff with law `target`.
PayoffFn most_expensive_payoff(const Dist1D& target, const MarketParams& params);

/// Quadrature prices of the two extremes for a target law.
struct PriceRange {
    double cheapest;
    double most_expensive;
};
PriceRange attainable_prices(const Dist1D& target, const MarketParams& params);

/// Member of the interpolating family
///   f_a(S) = F^-1[(1 - F_S(S)) 1{S <= a} + (F_S(S) - F_S(a)) 1{S > a}],
/// parameterized by u_a = F_S(a) in [0,1]: u_a = 0 is the cost-efficient
/// payoff, u_a = 1 the most expensive one. Every member has law `target`.
PayoffFn f_a_payoff(const Dist1D& target, const MarketParams& params, double u_a);
double f_a_price(const Dist1D& target, const MarketParams& params, double u_a);

struct AtPrice {
    PayoffFn payoff;
    double u_a;           ///< F_S(a*)
    double a;             ///< threshold a* on the S_T scale (0 or +inf at the ends)
    double price;         ///< quadrature price achieved
    std::string method;   ///< "quadrature"
};

/// Payoff with law `target` and the given price, found by bisection on u_a
/// (price tolerance 1e-6 S0). Throws InfeasibleError outside the attainable range.
AtPrice payoff_at_price(const Dist1D& target, double price, const MarketParams& params);

struct Improvement {
    PayoffFn payoff;
    double input_price;      ///< c
    double cheapest_price;   ///< c0* of the cost-efficient payoff with the same law
    double cash;             ///< (c - c0*) e^{rT}
    std::string method;
};

/// F^-1(F_S(S_T)) + (c - c0*) e^{rT} for a payoff with known law and price.
Improvement strict_improvement(const Dist1D& law, double price, const MarketParams& params);

/// Same with law and price estimated by simulation. Terminal payoffs that are
/// already nondecreasing in S_T on a dense grid are returned unchanged.
Improvement strict_improvement(const PayoffFn& payoff, const MarketParams& params, const SimConfig& config,
                               std::size_t max_knots = 4000);

struct MonotonicityReport {
    bool increasing;
    std::size_t violations;  ///< adjacent decreases after sorting by S_T
    std::size_t n;
};

/// Sort simulated (S_T, payoff) pairs by S_T and count decreases beyond
/// rounding noise. A path-independent payoff is cost-efficient iff it passes.
MonotonicityReport is_cost_efficient(const PayoffFn& payoff, const MarketParams& params, std::size_t n_paths,
                                     std::uint64_t seed = kDefaultSeed);

/// Exact grid check: f nondecreasing on increasing s-values.
MonotonicityReport is_nondecreasing_on(const std::function<double(double)>& f, std::span<const double> s_grid);

/// Law of the put payoff (K - S_T)^+, with its atom at zero.
Dist1D put_payoff_distribution(const MarketParams& params, double strike);
/// a = S0^2 exp(2 (mu - sigma^2/2) T) in the power put (K - a / S_T)^+.
double power_put_coefficient(const MarketParams& params);

struct ConditionalMeanRow {
    double a;
    double mean_f;     ///< E[f(S_T) | S_T < a]
    double mean_x;     ///< E[X_T | S_T < a]
    double diff_se;    ///< standard error of mean_f - mean_x
    std::size_t count;
};

/// Conditional means of two payoff samples on {S_T < a} for each a.
std::vector<ConditionalMeanRow> conditional_means_below(std::span<const double> s_T, std::span<const double> f,
                                                        std::span<const double> x, std::span<const double> a_grid);

/// Sampled (s, payoff) table of a terminal payoff for external replication.
Table payoff_table(const PayoffFn& payoff, std::span<const double> s_grid);

}  // namespace optpay

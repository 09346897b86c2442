#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optpay/benchmark.hpp"
#include "optpay/market.hpp"
#include "optpay/mc.hpp"
#include "optpay/payoff.hpp"
#include "optpay/table.hpp"

namespace optpay {

/// Joint law of a payoff X_T with a benchmark A_T, carried as the
/// conditional quantile F^-1_{X|A}(a, p).
struct JointSpec {
    /// Which analytic law, if any, the conditional quantile encodes.
    enum class Known { None, AverageGivenSt, FloatingPutGivenSt, FloatingPutGivenG };

    BenchmarkSpec benchmark;
    std::function<double(double, double)> cond_quantile;  ///< (a, p) -> F^-1_{X|A=a}(p)
    std::optional<PayoffFn> original;                     ///< the payoff the law was taken from
    Known known = Known::None;
    std::string name = "joint";
};

/// (G_T, S_T): ln G | ln S_T ~ N((ln S0 + ln S_T)/2, sigma^2 T / 12).
JointSpec average_given_sT(const MarketParams& params);
/// ((G_T - S_T)^+, S_T).
JointSpec floating_put_given_sT(const MarketParams& params);
/// ((G_T - S_T)^+, G_T), using ln S_T | ln G_T ~ N(ln(G^{3/2}/sqrt(S0)) + (mu - sigma^2/2) T/4, sigma^2 T/4).
JointSpec floating_put_given_g(const MarketParams& params);

/// Conditional-quantile grid estimated by simulation: pairs are binned into
/// `bins` equal-probability benchmark buckets, each holding `knots`
/// empirical quantiles of X.
JointSpec empirical_joint(const PayoffFn& payoff, const BenchmarkSpec& bench, const MarketParams& params,
                          const SimConfig& config, int bins = 100, int knots = 1000);

enum class Orientation { Increasing, Decreasing };

/// f(S_t, S_T) = F^-1_{X|S_T}(V) with V = F_{S_t|S_T}(S_t), or 1 - V for the
/// decreasing orientation. Requires an S_T benchmark and 0 < t < T.
PayoffFn twin_with_sT_benchmark(const JointSpec& joint, double t, const MarketParams& params,
                                Orientation orientation = Orientation::Increasing);

/// X* = F^-1_{X|A}(F_{S_T|A}(S_T)), increasing in S_T given A. Throws for an
/// S_T benchmark, which has no joint density with S_T.
PayoffFn cheapest_twin(const JointSpec& joint, const MarketParams& params);
/// Same law with the conditional uniform reversed: F^-1_{X|A}(1 - F_{S_T|A}(S_T)).
PayoffFn most_expensive_twin(const JointSpec& joint, const MarketParams& params);

struct BucketDiagnostic {
    double a_lo;
    double a_hi;
    long long concordant;
    long long discordant;
    double tau;
    bool violating;
};

struct TwinCheck {
    bool cheapest;
    std::size_t violating_buckets;
    std::vector<BucketDiagnostic> buckets;
};

/// Binned monotonicity proxy: simulated (S_T, A_T, X) triples are split into
/// 50 equal-probability A_T buckets; a bucket violates when the Kendall tau
/// of X against S_T falls below -3 standard errors of tau under
/// independence. Ties (flat stretches, constants) never count against.
TwinCheck is_cheapest_twin(const PayoffFn& payoff, const BenchmarkSpec& bench, const MarketParams& params,
                           std::size_t n_paths, std::uint64_t seed = kDefaultSeed, int buckets = 50,
                           std::size_t max_per_bucket = 2000);

/// Exact check of f(a, s) nondecreasing in s for every a on the grid.
std::size_t conditional_monotonicity_violations(const std::function<double(double, double)>& f,
                                                std::span<const double> a_grid, std::span<const double> s_grid);

struct CorrelationPoint {
    double t;
    double rho;
    double std_err;  ///< 0 for the closed form
};

struct BestTwin {
    double t_star;
    double rho_star;
    std::string method;
    std::vector<CorrelationPoint> curve;
};

/// corr(ln R_T(t), ln G_T) = 3/4 + sqrt(3) sqrt(t (T - t)) / (4T).
double average_twin_correlation(const MarketParams& params, double t);

/// Maximizes corr(ln twin(t), ln reference) over t_grid. Uses the closed form
/// for the geometric-average joint against its own payoff, simulation
/// otherwise (levels instead of logs when a payoff can be zero).
BestTwin best_twin_by_correlation(const JointSpec& joint, std::span<const double> t_grid, const MarketParams& params,
                                  const SimConfig& config = {});
BestTwin best_twin_by_correlation(const JointSpec& joint, const PayoffFn& reference, std::span<const double> t_grid,
                                  const MarketParams& params, const SimConfig& config = {});

struct TwinAtPrice {
    PayoffFn payoff;
    double u;       ///< 0 = cheapest twin, 1 = most expensive twin
    double price;
    std::string method;
};

/// Interpolating family between the two boundary twins,
///   X_u = F^-1_{X|A}(g_u(V)), V = F_{S_T|A}(S_T),
///   g_u(V) = (1 - V) 1{V <= u} + (V - u) 1{V > u},
/// solved for the requested price by bisection on u. Market benchmarks are
/// priced by 2-D Gaussian quadrature, external ones by simulation with
/// common random numbers.
TwinAtPrice twin_at_price(const JointSpec& joint, double price, const MarketParams& params,
                          const SimConfig& config = {});
PayoffFn twin_family_member(const JointSpec& joint, const MarketParams& params, double u);
double twin_family_price(const JointSpec& joint, const MarketParams& params, double u);

/// Exponents of the log-linear twin of G_T: R = S0^c0 S_t^e_t S_T^e_T.
struct TwinExponents {
    double s0_exp;
    double st_exp;
    double sT_exp;
};
TwinExponents average_twin_exponents(const MarketParams& params, double t,
                                     Orientation orientation = Orientation::Increasing);

/// Sampled twin surface: columns S_t, S_T, payoff.
Table twin_surface(const PayoffFn& twin, std::span<const double> st_grid, std::span<const double> sT_grid);

}  // namespace optpay

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "optpay/market.hpp"
#include "optpay/payoff.hpp"

namespace optpay {

enum class Measure { Physical, RiskNeutral };

/// Seed used by acceptance runs and CLI defaults.
inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct SimConfig {
    std::size_t n_paths = 1'000'000;
    int steps_per_year = 252;
    std::uint64_t seed = kDefaultSeed;
    Measure measure = Measure::Physical;

    void validate() const;
};

struct MCEstimate {
    double value = 0.0;
    double std_err = 0.0;  ///< sample sd / sqrt(n)
    std::size_t n = 0;
    SimConfig config;

    double lower(double z = 3.0) const { return value - z * std_err; }
    double upper(double z = 3.0) const { return value + z * std_err; }
};

/// Simulated observations, one column per requested time (T always last).
struct SampleTable {
    std::vector<double> times;
    std::vector<std::vector<double>> s;  ///< s[j][path] = S at times[j]
    std::vector<double> g;               ///< G_T per path, empty unless requested
    std::vector<double> xi;              ///< xi_T per path, exact function of S_T
    Measure measure = Measure::Physical;

    std::size_t n_paths() const { return xi.size(); }
    const std::vector<double>& s_T() const { return s.back(); }
    /// Column for an observation time; throws DomainError when absent.
    const std::vector<double>& at(double t) const;
};

/// Exact lognormal sampling on the grid dt = T / round(steps_per_year * T).
/// Requested times must sit on that grid. G_T uses the trapezoidal rule on
/// ln S over the full grid; when G_T is not requested only the requested
/// times are simulated. Every path draws from its own Philox stream, so the
/// table is bit-identical for any `workers` (0 = hardware concurrency).
SampleTable simulate_paths(const SimConfig& config, const MarketParams& params, std::span<const double> times,
                           bool need_g, unsigned workers = 0);

/// Payoff evaluated on every path of a table. Throws DomainError naming the
/// first path with a non-finite value.
std::vector<double> evaluate(const PayoffFn& payoff, const SampleTable& table);

/// Mean and standard error of per-path values.
MCEstimate mean_estimate(std::span<const double> values, const SimConfig& config);

/// Price of per-path payoff values: mean of xi_T X under P, e^{-rT} mean X under Q.
MCEstimate price_from_values(std::span<const double> values, const SampleTable& table, const SimConfig& config,
                             const MarketParams& params);

/// c0(X) = E[xi_T X] by simulation.
MCEstimate price(const PayoffFn& payoff, const SimConfig& config, const MarketParams& params, unsigned workers = 0);

struct JointLawDistance {
    double cdf_distance;  ///< max |F_a - F_b| over the 50x50 pooled quantile grid
    double ks_first;
    double ks_second;
};

/// Compare two bivariate samples (each with >= 1000 pairs).
JointLawDistance joint_law_distance(std::span<const std::pair<double, double>> a,
                                    std::span<const std::pair<double, double>> b, int grid = 50);

/// CSV with columns path_id, S_<t>..., [G_T], xi_T.
void write_samples_csv(std::ostream& out, const SampleTable& table);

}  // namespace optpay

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "optpay/market.hpp"
#include "optpay/payoff.hpp"

namespace optpay {

/// The random variable A_T a payoff is tied to by a dependence constraint.
struct BenchmarkSpec {
    enum class Kind { Terminal, Intermediate, GeometricAverage, External };

    Kind kind = Kind::Terminal;
    double t = 0.0;  ///< observation time for Intermediate

    // External benchmarks carry their own observation and conditional laws;
    // the library never infers a joint density it was not given.
    std::vector<double> obs_times;
    bool needs_g = false;
    std::function<double(const Observables&)> observe;
    std::function<double(double)> cdf;                  ///< F_A
    std::function<double(double, double)> cond_cdf_sT;  ///< (a, s) -> P(S_T <= s | A = a)

    static BenchmarkSpec terminal() { return {}; }
    static BenchmarkSpec intermediate(double t);
    static BenchmarkSpec geometric_average();
    static BenchmarkSpec external(std::vector<double> obs_times, bool needs_g,
                                  std::function<double(const Observables&)> observe,
                                  std::function<double(double)> cdf,
                                  std::function<double(double, double)> cond_cdf_sT);

    std::string name() const;
};

/// Joint law of (ln A, ln S_T) for the market benchmarks that have one
/// (intermediate price and geometric average); nullopt otherwise.
std::optional<BiLognormalLaw> benchmark_joint(const BenchmarkSpec& bench, const MarketParams& params);

/// F_A(a).
double benchmark_cdf(const BenchmarkSpec& bench, const MarketParams& params, double a);

/// P(S_T <= s | A = a). Throws for a terminal benchmark, which has no
/// joint density with S_T.
double cond_cdf_sT(const BenchmarkSpec& bench, const MarketParams& params, double a, double s);

/// Observation times needed to evaluate both the benchmark and S_T.
std::vector<double> benchmark_times(const BenchmarkSpec& bench, const MarketParams& params);

/// Read A from observables laid out on benchmark_times().
double observe_benchmark(const BenchmarkSpec& bench, const Observables& obs);

/// Payoff f(A, S_T) wired to the benchmark's observation layout.
PayoffFn benchmark_payoff(const BenchmarkSpec& bench, const MarketParams& params,
                          std::function<double(double, double)> f, std::string name = "benchmark-payoff");

}  // namespace optpay

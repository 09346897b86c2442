#include "optpay/benchmark.hpp"

#include <cmath>

#include "optpay/errors.hpp"
#include "optpay/table.hpp"

namespace optpay {

BenchmarkSpec BenchmarkSpec::intermediate(double t) {
    BenchmarkSpec b;
    b.kind = Kind::Intermediate;
    b.t = t;
    return b;
}

BenchmarkSpec BenchmarkSpec::geometric_average() {
    BenchmarkSpec b;
    b.kind = Kind::GeometricAverage;
    b.needs_g = true;
    return b;
}

BenchmarkSpec BenchmarkSpec::external(std::vector<double> obs_times, bool needs_g,
                                      std::function<double(const Observables&)> observe,
                                      std::function<double(double)> cdf,
                                      std::function<double(double, double)> cond_cdf_sT) {
    if (!observe || !cdf || !cond_cdf_sT) {
        throw DomainError("external benchmark: observation, cdf and conditional law of S_T are all required");
    }
    BenchmarkSpec b;
    b.kind = Kind::External;
    b.obs_times = std::move(obs_times);
    b.needs_g = needs_g;
    b.observe = std::move(observe);
    b.cdf = std::move(cdf);
    b.cond_cdf_sT = std::move(cond_cdf_sT);
    return b;
}

std::string BenchmarkSpec::name() const {
    switch (kind) {
        case Kind::Terminal: return "S_T";
        case Kind::Intermediate: return "S_t(t=" + format_number(t) + ")";
        case Kind::GeometricAverage: return "G_T";
        case Kind::External: return "external";
    }
    return "unknown";
}

std::optional<BiLognormalLaw> benchmark_joint(const BenchmarkSpec& bench, const MarketParams& params) {
    switch (bench.kind) {
        case BenchmarkSpec::Kind::Intermediate: return pair_joint_sT_st(params, bench.t);
        case BenchmarkSpec::Kind::GeometricAverage: return geometric_average_joint(params);
        default: return std::nullopt;
    }
}

double benchmark_cdf(const BenchmarkSpec& bench, const MarketParams& params, double a) {
    switch (bench.kind) {
        case BenchmarkSpec::Kind::Terminal: return cdf_sT(params, a);
        case BenchmarkSpec::Kind::External: return bench.cdf(a);
        default: {
            if (a <= 0.0) return 0.0;
            return benchmark_joint(bench, params)->marginal(0).cdf(std::log(a));
        }
    }
}

double cond_cdf_sT(const BenchmarkSpec& bench, const MarketParams& params, double a, double s) {
    switch (bench.kind) {
        case BenchmarkSpec::Kind::Terminal:
            throw DomainError("(S_T, S_T) has no joint density; use the S_T-benchmark twin construction");
        case BenchmarkSpec::Kind::External: return bench.cond_cdf_sT(a, s);
        default: {
            if (s <= 0.0) return 0.0;
            const auto law = conditional_law(*benchmark_joint(bench, params), 0, std::log(a));
            return law.cdf(std::log(s));
        }
    }
}

std::vector<double> benchmark_times(const BenchmarkSpec& bench, const MarketParams& params) {
    switch (bench.kind) {
        case BenchmarkSpec::Kind::Intermediate: return {bench.t, params.t_mat};
        case BenchmarkSpec::Kind::External: {
            auto times = bench.obs_times;
            if (times.empty() || times.back() != params.t_mat) times.push_back(params.t_mat);
            return times;
        }
        default: return {params.t_mat};
    }
}

double observe_benchmark(const BenchmarkSpec& bench, const Observables& obs) {
    switch (bench.kind) {
        case BenchmarkSpec::Kind::Terminal: return obs.s_T();
        case BenchmarkSpec::Kind::Intermediate: return obs.s[0];
        case BenchmarkSpec::Kind::GeometricAverage: return obs.g;
        case BenchmarkSpec::Kind::External: return bench.observe(obs);
    }
    return obs.s_T();
}

PayoffFn benchmark_payoff(const BenchmarkSpec& bench, const MarketParams& params,
                          std::function<double(double, double)> f, std::string name) {
    if (bench.kind == BenchmarkSpec::Kind::Intermediate && !(bench.t > 0.0 && bench.t < params.t_mat)) {
        throw DomainError("intermediate benchmark: t must lie in (0,T)");
    }
    return PayoffFn(benchmark_times(bench, params), bench.needs_g,
                    [bench, f = std::move(f)](const Observables& o) { return f(observe_benchmark(bench, o), o.s_T()); },
                    std::move(name));
}

}  // namespace optpay

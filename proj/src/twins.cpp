#include "optpay/twins.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "optpay/errors.hpp"
#include "optpay/normal.hpp"
#include "optpay/quadrature.hpp"
#include "optpay/stats.hpp"

namespace optpay {

namespace {

void require_known_law(const JointSpec& joint) {
    if (!joint.cond_quantile) throw DomainError("joint '" + joint.name + "' has no conditional quantile");
}

// Simulates everything needed to evaluate `payoffs` and the benchmark.
SampleTable simulate_for(const std::vector<const PayoffFn*>& payoffs, const BenchmarkSpec& bench,
                         const MarketParams& params, const SimConfig& config) {
    std::vector<double> times = benchmark_times(bench, params);
    bool need_g = bench.needs_g;
    for (const auto* p : payoffs) {
        times.insert(times.end(), p->times().begin(), p->times().end());
        need_g = need_g || p->needs_g();
    }
    return simulate_paths(config, params, times, need_g);
}

std::vector<double> benchmark_values(const BenchmarkSpec& bench, const MarketParams& params, const SampleTable& table) {
    return evaluate(benchmark_payoff(bench, params, [](double a, double) { return a; }, "benchmark"), table);
}

double g_u(double v, double u) { return v <= u ? 1.0 - v : v - u; }

bool all_positive(const std::vector<double>& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; });
}

CorrelationPoint correlation_of(double t, std::vector<double> x, std::vector<double> y) {
    if (all_positive(x) && all_positive(y)) {
        for (auto& v : x) v = std::log(v);
        for (auto& v : y) v = std::log(v);
    }
    const double rho = pearson(x, y);
    return {t, rho, (1.0 - rho * rho) / std::sqrt(static_cast<double>(x.size()))};
}

BestTwin pick_best(std::vector<CorrelationPoint> curve, std::string method) {
    const auto best = std::max_element(curve.begin(), curve.end(),
                                       [](const auto& a, const auto& b) { return a.rho < b.rho; });
    return {best->t, best->rho, std::move(method), std::move(curve)};
}

}  // namespace

JointSpec average_given_sT(const MarketParams& params) {
    params.validate(false);
    const double half_ln_s0 = 0.5 * std::log(params.s0);
    const double sd = params.sigma * std::sqrt(params.t_mat / 12.0);
    JointSpec j;
    j.benchmark = BenchmarkSpec::terminal();
    j.cond_quantile = [=](double s, double p) {
        return std::exp(half_ln_s0 + 0.5 * std::log(s) + sd * norm_quantile(p));
    };
    j.original = PayoffFn::with_average(params.t_mat, [](double g, double) { return g; }, "G_T");
    j.known = JointSpec::Known::AverageGivenSt;
    j.name = "(G_T, S_T)";
    return j;
}

JointSpec floating_put_given_sT(const MarketParams& params) {
    JointSpec j = average_given_sT(params);
    const auto g_quantile = j.cond_quantile;
    j.cond_quantile = [g_quantile](double s, double p) { return std::max(g_quantile(s, p) - s, 0.0); };
    j.original = PayoffFn::with_average(params.t_mat, [](double g, double s) { return std::max(g - s, 0.0); },
                                        "floating-put");
    j.known = JointSpec::Known::FloatingPutGivenSt;
    j.name = "((G_T - S_T)^+, S_T)";
    return j;
}

JointSpec floating_put_given_g(const MarketParams& params) {
    params.validate(false);
    const double inv_sqrt_s0 = 1.0 / std::sqrt(params.s0);
    const double shift = params.log_drift() * params.t_mat / 4.0;
    const double sd = 0.5 * params.sigma * std::sqrt(params.t_mat);
    JointSpec j;
    j.benchmark = BenchmarkSpec::geometric_average();
    j.cond_quantile = [=](double g, double p) {
        return std::max(g - std::pow(g, 1.5) * inv_sqrt_s0 * std::exp(shift - sd * norm_quantile(p)), 0.0);
    };
    j.original = PayoffFn::with_average(params.t_mat, [](double g, double s) { return std::max(g - s, 0.0); },
                                        "floating-put");
    j.known = JointSpec::Known::FloatingPutGivenG;
    j.name = "((G_T - S_T)^+, G_T)";
    return j;
}

JointSpec empirical_joint(const PayoffFn& payoff, const BenchmarkSpec& bench, const MarketParams& params,
                          const SimConfig& config, int bins, int knots) {
    if (bins < 1 || knots < 2) throw DomainError("empirical_joint: need bins >= 1 and knots >= 2");
    const auto table = simulate_for({&payoff}, bench, params, config);
    const auto x = evaluate(payoff, table);
    const auto a = benchmark_values(bench, params, table);
    const std::size_t n = x.size();
    if (n < static_cast<std::size_t>(bins) * 2) throw DomainError("empirical_joint: too few paths for the bin count");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });

    auto edges = std::make_shared<std::vector<double>>();
    auto grids = std::make_shared<std::vector<std::vector<double>>>();
    for (int b = 0; b < bins; ++b) {
        const std::size_t lo = n * b / bins;
        const std::size_t hi = n * (b + 1) / bins;
        std::vector<double> xs;
        for (std::size_t k = lo; k < hi; ++k) xs.push_back(x[order[k]]);
        std::sort(xs.begin(), xs.end());
        std::vector<double> q(knots);
        for (int k = 0; k < knots; ++k) {
            const double pos = (k + 0.5) / knots * static_cast<double>(xs.size()) - 0.5;
            const auto i0 = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, double(xs.size() - 1)));
            const auto i1 = std::min(i0 + 1, xs.size() - 1);
            const double w = std::clamp(pos - static_cast<double>(i0), 0.0, 1.0);
            q[k] = xs[i0] + w * (xs[i1] - xs[i0]);
        }
        grids->push_back(std::move(q));
        if (b + 1 < bins) edges->push_back(a[order[hi]]);
    }

    JointSpec j;
    j.benchmark = bench;
    j.cond_quantile = [edges, grids, knots](double av, double p) {
        const auto b = static_cast<std::size_t>(std::upper_bound(edges->begin(), edges->end(), av) - edges->begin());
        const auto& q = (*grids)[b];
        const double pos = std::clamp(p * knots - 0.5, 0.0, static_cast<double>(knots - 1));
        const auto i0 = static_cast<std::size_t>(std::floor(pos));
        const auto i1 = std::min<std::size_t>(i0 + 1, knots - 1);
        return q[i0] + (pos - static_cast<double>(i0)) * (q[i1] - q[i0]);
    };
    j.original = payoff;
    j.name = "empirical(" + payoff.name() + ", " + bench.name() + ")";
    return j;
}

PayoffFn twin_with_sT_benchmark(const JointSpec& joint, double t, const MarketParams& params, Orientation orientation) {
    require_known_law(joint);
    if (joint.benchmark.kind != BenchmarkSpec::Kind::Terminal) {
        throw DomainError("twin_with_sT_benchmark: joint must be taken with the S_T benchmark");
    }
    const auto pair_law = pair_joint_sT_st(params, t);
    const bool flip = orientation == Orientation::Decreasing;
    auto q = joint.cond_quantile;
    return PayoffFn::pair(
        t, params.t_mat,
        [pair_law, flip, q](double st, double sT) {
            const double v = conditional_law(pair_law, 1, std::log(sT)).cdf(std::log(st));
            return q(sT, clamp_open_unit(flip ? 1.0 - v : v));
        },
        flip ? "twin-decreasing" : "twin");
}

PayoffFn twin_family_member(const JointSpec& joint, const MarketParams& params, double u) {
    require_known_law(joint);
    if (joint.benchmark.kind == BenchmarkSpec::Kind::Terminal) {
        throw DomainError("(S_T, S_T) has no joint density; use twin_with_sT_benchmark for an S_T benchmark");
    }
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("twin family: u must lie in [0,1]");
    const BenchmarkSpec bench = joint.benchmark;
    auto q = joint.cond_quantile;
    const std::string name = u == 0.0 ? "cheapest-twin" : u == 1.0 ? "most-expensive-twin" : "twin-family";
    return benchmark_payoff(
        bench, params,
        [bench, params, q, u](double a, double s) {
            const double v = cond_cdf_sT(bench, params, a, s);
            return q(a, clamp_open_unit(g_u(v, u)));
        },
        name);
}

PayoffFn cheapest_twin(const JointSpec& joint, const MarketParams& params) {
    return twin_family_member(joint, params, 0.0);
}

PayoffFn most_expensive_twin(const JointSpec& joint, const MarketParams& params) {
    return twin_family_member(joint, params, 1.0);
}

double twin_family_price(const JointSpec& joint, const MarketParams& params, double u) {
    require_known_law(joint);
    const auto law = benchmark_joint(joint.benchmark, params);
    if (!law) throw DomainError("twin_family_price: quadrature needs a market benchmark with a bivariate law");
    const auto [alpha, beta] = state_price_coeffs(params, params.t_mat);
    const double ln_s0 = std::log(params.s0);
    const double slope = law->covariance() / (law->sd1 * law->sd1);
    const double sd_c = std::sqrt(1.0 - law->rho * law->rho) * law->sd2;
    const double z_u = (u > 0.0 && u < 1.0) ? norm_quantile(u) : 0.0;
    auto f = [&](double z1, double z2) {
        const double ln_a = law->mean1 + law->sd1 * z1;
        const double ln_s = law->mean2 + slope * (ln_a - law->mean1) + sd_c * z2;
        const double v = norm_cdf(z2);
        const double x = joint.cond_quantile(std::exp(ln_a), clamp_open_unit(g_u(v, u)));
        return alpha * std::exp(-beta * (ln_s - ln_s0)) * x;
    };
    auto breaks = [&](double) { return (u > 0.0 && u < 1.0) ? std::vector<double>{z_u} : std::vector<double>{}; };
    return gaussian_expectation_2d(f, breaks, {9.0, 60});
}

TwinAtPrice twin_at_price(const JointSpec& joint, double price, const MarketParams& params, const SimConfig& config) {
    require_known_law(joint);
    if (joint.benchmark.kind == BenchmarkSpec::Kind::Terminal) {
        throw DomainError("every twin with an S_T benchmark has the same price; no price to target");
    }
    const double tol = 1e-6 * params.s0;
    std::function<double(double)> price_of;
    std::string method;
    if (benchmark_joint(joint.benchmark, params)) {
        price_of = [&](double u) { return twin_family_price(joint, params, u); };
        method = "quadrature";
    } else {
        // Common random numbers: one table, every u re-priced on the same paths.
        const auto member = twin_family_member(joint, params, 0.0);
        auto table = std::make_shared<SampleTable>(simulate_for({&member}, joint.benchmark, params, config));
        auto a = benchmark_values(joint.benchmark, params, *table);
        std::vector<double> v(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) v[i] = cond_cdf_sT(joint.benchmark, params, a[i], table->s_T()[i]);
        price_of = [&, table, a, v](double u) {
            std::vector<double> x(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) x[i] = joint.cond_quantile(a[i], clamp_open_unit(g_u(v[i], u)));
            return price_from_values(x, *table, config, params).value;
        };
        method = "monte-carlo";
    }
    const double lo_p = price_of(0.0);
    const double hi_p = price_of(1.0);
    if (price < lo_p - tol || price > hi_p + tol) {
        throw InfeasibleError("twin_at_price: price " + std::to_string(price) + " outside attainable interval [" +
                                  std::to_string(lo_p) + ", " + std::to_string(hi_p) + "]",
                              lo_p, hi_p);
    }
    double lo = 0.0, hi = 1.0, u = 0.0, achieved = lo_p;
    if (std::abs(price - hi_p) <= tol) {
        u = 1.0;
        achieved = hi_p;
    } else if (std::abs(price - lo_p) > tol) {
        for (int it = 0; it < 100; ++it) {
            u = 0.5 * (lo + hi);
            achieved = price_of(u);
            if (std::abs(achieved - price) <= tol) break;
            (achieved < price ? lo : hi) = u;
        }
    }
    return {twin_family_member(joint, params, u), u, achieved, method};
}

TwinCheck is_cheapest_twin(const PayoffFn& payoff, const BenchmarkSpec& bench, const MarketParams& params,
                           std::size_t n_paths, std::uint64_t seed, int buckets, std::size_t max_per_bucket) {
    if (buckets < 1) throw DomainError("is_cheapest_twin: need at least one bucket");
    SimConfig cfg;
    cfg.n_paths = n_paths;
    cfg.seed = seed;
    const auto table = simulate_for({&payoff}, bench, params, cfg);
    const auto x = evaluate(payoff, table);
    const auto a = benchmark_values(bench, params, table);
    const auto& s = table.s_T();
    const std::size_t n = x.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });

    TwinCheck out{true, 0, {}};
    for (int b = 0; b < buckets; ++b) {
        const std::size_t lo = n * b / buckets;
        const std::size_t hi = n * (b + 1) / buckets;
        if (hi <= lo) continue;
        // Take the bucket's members in path order so the cap is a random subsample.
        std::vector<std::size_t> members(order.begin() + lo, order.begin() + hi);
        std::sort(members.begin(), members.end());
        if (members.size() > max_per_bucket) members.resize(max_per_bucket);
        std::vector<double> bs, bx;
        for (auto i : members) {
            bs.push_back(s[i]);
            bx.push_back(x[i]);
        }
        const auto k = kendall_counts(bs, bx);
        const double m = static_cast<double>(members.size());
        const double se0 = m > 1.0 ? std::sqrt(2.0 * (2.0 * m + 5.0) / (9.0 * m * (m - 1.0))) : 1.0;
        const double tau = k.tau();
        const bool bad = (k.concordant + k.discordant) > 0 && tau < -3.0 * se0;
        out.buckets.push_back({a[order[lo]], a[order[hi - 1]], k.concordant, k.discordant, tau, bad});
        if (bad) ++out.violating_buckets;
    }
    out.cheapest = out.violating_buckets == 0;
    return out;
}

std::size_t conditional_monotonicity_violations(const std::function<double(double, double)>& f,
                                                std::span<const double> a_grid, std::span<const double> s_grid) {
    std::size_t bad = 0;
    for (double a : a_grid) {
        double prev = 0.0;
        for (std::size_t i = 0; i < s_grid.size(); ++i) {
            const double v = f(a, s_grid[i]);
            if (i > 0 && v < prev - 1e-12 * (1.0 + std::abs(prev))) ++bad;
            prev = v;
        }
    }
    return bad;
}

double average_twin_correlation(const MarketParams& params, double t) {
    const double big_t = params.t_mat;
    if (!(t > 0.0 && t < big_t)) throw DomainError("average_twin_correlation: t must lie in (0,T)");
    return 0.75 + std::sqrt(3.0) * std::sqrt((big_t - t) * t) / (4.0 * big_t);
}

BestTwin best_twin_by_correlation(const JointSpec& joint, std::span<const double> t_grid, const MarketParams& params,
                                  const SimConfig& config) {
    if (t_grid.empty()) throw DomainError("best_twin_by_correlation: empty t grid");
    if (joint.known == JointSpec::Known::AverageGivenSt) {
        std::vector<CorrelationPoint> curve;
        for (double t : t_grid) curve.push_back({t, average_twin_correlation(params, t), 0.0});
        return pick_best(std::move(curve), "closed-form");
    }
    if (!joint.original) throw DomainError("best_twin_by_correlation: joint carries no reference payoff");
    return best_twin_by_correlation(joint, *joint.original, t_grid, params, config);
}

BestTwin best_twin_by_correlation(const JointSpec& joint, const PayoffFn& reference, std::span<const double> t_grid,
                                  const MarketParams& params, const SimConfig& config) {
    if (t_grid.empty()) throw DomainError("best_twin_by_correlation: empty t grid");
    std::vector<PayoffFn> twins;
    for (double t : t_grid) twins.push_back(twin_with_sT_benchmark(joint, t, params));
    std::vector<double> times(t_grid.begin(), t_grid.end());
    times.push_back(params.t_mat);
    const auto table = simulate_paths(config, params, times, reference.needs_g());
    const auto ref = evaluate(reference, table);
    std::vector<CorrelationPoint> curve;
    for (std::size_t i = 0; i < twins.size(); ++i) curve.push_back(correlation_of(t_grid[i], evaluate(twins[i], table), ref));
    return pick_best(std::move(curve), "monte-carlo");
}

TwinExponents average_twin_exponents(const MarketParams& params, double t, Orientation orientation) {
    const double big_t = params.t_mat;
    if (!(t > 0.0 && t < big_t)) throw DomainError("average_twin_exponents: t must lie in (0,T)");
    double k = big_t / std::sqrt(12.0 * t * (big_t - t));
    if (orientation == Orientation::Decreasing) k = -k;
    return {0.5 - k * (1.0 - t / big_t), k, 0.5 - k * t / big_t};
}

Table twin_surface(const PayoffFn& twin, std::span<const double> st_grid, std::span<const double> sT_grid) {
    if (twin.times().size() != 2 || twin.needs_g()) throw DomainError("twin_surface: expects a payoff of (S_t, S_T)");
    Table t({"S_t", "S_T", "payoff"});
    for (double a : st_grid) {
        for (double b : sT_grid) {
            const double s[2] = {a, b};
            t.add_row({a, b, twin.eval(s)});
        }
    }
    t.add_note("twin: " + twin.name() + ", t = " + format_number(twin.times()[0]));
    return t;
}

}  // namespace optpay

#include "optpay/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "optpay/errors.hpp"
#include "optpay/philox.hpp"
#include "optpay/stats.hpp"
#include "optpay/table.hpp"

namespace optpay {

namespace {

constexpr std::size_t kChunk = 8192;

int grid_steps(const SimConfig& config, const MarketParams& params) {
    return std::max(1, static_cast<int>(std::llround(config.steps_per_year * params.t_mat)));
}

// Runs body(begin, end) over fixed path chunks. Chunks are independent, so
// the outcome does not depend on how many threads pick them up.
template <class Body>
void for_chunks(std::size_t n, unsigned workers, Body body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n_chunks, 1)));
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t c = next++; c < n_chunks; c = next++) {
            body(c * kChunk, std::min(n, (c + 1) * kChunk));
        }
    };
    if (workers <= 1) {
        run();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
}

}  // namespace

void SimConfig::validate() const {
    if (n_paths < 1) throw DomainError("SimConfig: n_paths must be >= 1");
    if (steps_per_year < 1) throw DomainError("SimConfig: steps_per_year must be >= 1");
}

const std::vector<double>& SampleTable::at(double t) const {
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (std::abs(times[j] - t) <= 1e-12 * std::max(1.0, t)) return s[j];
    }
    throw DomainError("sample table has no column for t = " + std::to_string(t));
}

SampleTable simulate_paths(const SimConfig& config, const MarketParams& params, std::span<const double> times,
                           bool need_g, unsigned workers) {
    config.validate();
    params.validate(false);
    const int n_steps = grid_steps(config, params);
    const double dt = params.t_mat / n_steps;

    std::vector<double> obs(times.begin(), times.end());
    obs.push_back(params.t_mat);
    std::sort(obs.begin(), obs.end());
    obs.erase(std::unique(obs.begin(), obs.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              obs.end());
    std::vector<int> idx;
    for (double t : obs) {
        if (!(t > 0.0 && t <= params.t_mat * (1.0 + 1e-12))) {
            throw DomainError("simulate_paths: time " + std::to_string(t) + " outside (0,T]");
        }
        const double k = t / dt;
        const long kr = std::lround(k);
        if (std::abs(k - kr) > 1e-9 * n_steps) {
            throw DomainError("simulate_paths: time " + std::to_string(t) + " is not on the simulation grid (dt = " +
                              std::to_string(dt) + ")");
        }
        idx.push_back(static_cast<int>(kr));
    }
    obs.back() = params.t_mat;

    SampleTable table;
    table.times = obs;
    table.measure = config.measure;
    const std::size_t n = config.n_paths;
    table.s.assign(obs.size(), std::vector<double>(n));
    table.xi.resize(n);
    if (need_g) table.g.resize(n);

    const double drift = (config.measure == Measure::Physical ? params.mu : params.r) - 0.5 * params.sigma * params.sigma;
    const double ln_s0 = std::log(params.s0);
    const Philox4x32 rng(config.seed);
    const auto xi_coef = state_price_coeffs(params, params.t_mat);

    for_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            std::size_t next_obs = 0;
            double ln_s = ln_s0;
            if (need_g) {
                const double step_mean = drift * dt;
                const double step_sd = params.sigma * std::sqrt(dt);
                double area = 0.5 * ln_s;
                std::array<double, 2> z{};
                for (int k = 1; k <= n_steps; ++k) {
                    if ((k - 1) % 2 == 0) z = rng.normals(p, static_cast<std::uint64_t>((k - 1) / 2));
                    ln_s += step_mean + step_sd * z[(k - 1) % 2];
                    area += (k == n_steps ? 0.5 : 1.0) * ln_s;
                    if (k == idx[next_obs]) table.s[next_obs++][p] = std::exp(ln_s);
                }
                table.g[p] = std::exp(area * dt / params.t_mat);
            } else {
                int prev = 0;
                std::array<double, 2> z{};
                for (std::size_t j = 0; j < idx.size(); ++j) {
                    if (j % 2 == 0) z = rng.normals(p, j / 2);
                    const double h = (idx[j] - prev) * dt;
                    ln_s += drift * h + params.sigma * std::sqrt(h) * z[j % 2];
                    table.s[j][p] = std::exp(ln_s);
                    prev = idx[j];
                }
            }
            table.xi[p] = xi_coef.alpha_t * std::pow(table.s.back()[p] / params.s0, -xi_coef.beta);
        }
    });
    return table;
}

std::vector<double> evaluate(const PayoffFn& payoff, const SampleTable& table) {
    std::vector<const std::vector<double>*> cols;
    for (double t : payoff.times()) cols.push_back(&table.at(t));
    if (payoff.needs_g() && table.g.empty()) throw DomainError("payoff needs G_T but the table has none");
    const std::size_t n = table.n_paths();
    std::vector<double> out(n);
    std::vector<double> s(cols.size());
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t j = 0; j < cols.size(); ++j) s[j] = (*cols[j])[p];
        const double g = table.g.empty() ? std::numeric_limits<double>::quiet_NaN() : table.g[p];
        out[p] = payoff(Observables{s, g});
        if (!std::isfinite(out[p])) {
            throw DomainError("payoff '" + payoff.name() + "' is not finite on path " + std::to_string(p));
        }
    }
    return out;
}

MCEstimate mean_estimate(std::span<const double> values, const SimConfig& config) {
    MCEstimate est;
    est.n = values.size();
    est.config = config;
    est.value = mean(values);
    est.std_err = values.size() > 1 ? sample_sd(values) / std::sqrt(static_cast<double>(values.size())) : 0.0;
    return est;
}

MCEstimate price_from_values(std::span<const double> values, const SampleTable& table, const SimConfig& config,
                             const MarketParams& params) {
    if (values.size() != table.n_paths()) throw DomainError("price_from_values: size mismatch");
    std::vector<double> w(values.size());
    if (table.measure == Measure::Physical) {
        for (std::size_t p = 0; p < w.size(); ++p) w[p] = table.xi[p] * values[p];
    } else {
        const double disc = std::exp(-params.r * params.t_mat);
        for (std::size_t p = 0; p < w.size(); ++p) w[p] = disc * values[p];
    }
    return mean_estimate(w, config);
}

MCEstimate price(const PayoffFn& payoff, const SimConfig& config, const MarketParams& params, unsigned workers) {
    if (std::abs(payoff.horizon() - params.t_mat) > 1e-12) {
        throw DomainError("payoff horizon differs from the market horizon T");
    }
    const auto table = simulate_paths(config, params, payoff.times(), payoff.needs_g(), workers);
    const auto values = evaluate(payoff, table);
    return price_from_values(values, table, config, params);
}

JointLawDistance joint_law_distance(std::span<const std::pair<double, double>> a,
                                    std::span<const std::pair<double, double>> b, int grid) {
    if (a.size() < 1000 || b.size() < 1000) throw DomainError("joint_law_distance: need >= 1000 pairs per sample");
    if (grid < 2) throw DomainError("joint_law_distance: grid must be >= 2");

    auto split = [](std::span<const std::pair<double, double>> v, bool first) {
        std::vector<double> out;
        out.reserve(v.size());
        for (const auto& p : v) out.push_back(first ? p.first : p.second);
        return out;
    };
    const auto ax = split(a, true), ay = split(a, false), bx = split(b, true), by = split(b, false);

    // Pooled quantile cut points for each coordinate.
    auto cuts = [grid](std::vector<double> x, const std::vector<double>& y) {
        x.insert(x.end(), y.begin(), y.end());
        std::sort(x.begin(), x.end());
        std::vector<double> c(grid);
        for (int k = 0; k < grid; ++k) {
            const auto pos = static_cast<std::size_t>((k + 1.0) / (grid + 1.0) * static_cast<double>(x.size()));
            c[k] = x[std::min(pos, x.size() - 1)];
        }
        return c;
    };
    const auto cx = cuts(ax, bx);
    const auto cy = cuts(ay, by);

    // F(cx[i], cy[j]) via a (grid+1)^2 histogram of cell indices and 2-D cumulative sums.
    auto cdf_grid = [&](const std::vector<double>& x, const std::vector<double>& y) {
        const int m = grid + 1;
        std::vector<double> h(static_cast<std::size_t>(m * m), 0.0);
        for (std::size_t p = 0; p < x.size(); ++p) {
            const int i = static_cast<int>(std::lower_bound(cx.begin(), cx.end(), x[p]) - cx.begin());
            const int j = static_cast<int>(std::lower_bound(cy.begin(), cy.end(), y[p]) - cy.begin());
            h[static_cast<std::size_t>(i * m + j)] += 1.0;
        }
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                double v = h[static_cast<std::size_t>(i * m + j)];
                if (i > 0) v += h[static_cast<std::size_t>((i - 1) * m + j)];
                if (j > 0) v += h[static_cast<std::size_t>(i * m + j - 1)];
                if (i > 0 && j > 0) v -= h[static_cast<std::size_t>((i - 1) * m + j - 1)];
                h[static_cast<std::size_t>(i * m + j)] = v;
            }
        }
        for (auto& v : h) v /= static_cast<double>(x.size());
        return h;
    };
    const auto fa = cdf_grid(ax, ay);
    const auto fb = cdf_grid(bx, by);
    double d = 0.0;
    const int m = grid + 1;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const auto k = static_cast<std::size_t>(i * m + j);
            d = std::max(d, std::abs(fa[k] - fb[k]));
        }
    }
    return {d, ks_two_sample(ax, bx), ks_two_sample(ay, by)};
}

void write_samples_csv(std::ostream& out, const SampleTable& table) {
    std::vector<std::string> cols{"path_id"};
    for (double t : table.times) cols.push_back("S_" + format_number(t));
    if (!table.g.empty()) cols.push_back("G_T");
    cols.push_back("xi_T");
    Table t(cols);
    for (std::size_t p = 0; p < table.n_paths(); ++p) {
        std::vector<Table::Cell> row{static_cast<double>(p)};
        for (const auto& c : table.s) row.emplace_back(c[p]);
        if (!table.g.empty()) row.emplace_back(table.g[p]);
        row.emplace_back(table.xi[p]);
        t.add_row(std::move(row));
    }
    t.add_note(std::string("measure: ") + (table.measure == Measure::Physical ? "P" : "Q"));
    write_csv(out, t);
}

}  // namespace optpay

#include "optpay/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "optpay/errors.hpp"
#include "optpay/normal.hpp"
#include "optpay/table.hpp"

namespace optpay {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_grid(const std::vector<double>& values, const std::vector<double>& cdfs) {
    if (values.empty() || values.size() != cdfs.size()) {
        throw DomainError("empirical grid: need matching, non-empty value and cdf columns");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw DomainError("empirical grid: non-finite value");
        if (!(cdfs[i] > 0.0 && cdfs[i] < 1.0)) throw DomainError("empirical grid: cdf values must lie in (0,1)");
        if (i > 0 && !(values[i] > values[i - 1])) {
            throw DomainError("empirical grid: values must be strictly increasing");
        }
        if (i > 0 && !(cdfs[i] > cdfs[i - 1])) {
            throw DomainError("empirical grid: cdf values must be strictly increasing");
        }
    }
}

}  // namespace

Dist1D::Dist1D(Impl impl, std::string label, std::vector<double> kinks)
    : impl_(std::make_shared<const Impl>(std::move(impl))), label_(std::move(label)), kinks_(std::move(kinks)) {}

Dist1D Dist1D::lognormal(double m, double s) {
    if (!(s > 0.0)) throw DomainError("lognormal: s must be > 0");
    return Dist1D(LogNormalParams{m, s}, "lognormal");
}

Dist1D Dist1D::normal(double m, double s) {
    if (!(s > 0.0)) throw DomainError("normal: s must be > 0");
    return Dist1D(NormalParams{m, s}, "normal");
}

Dist1D Dist1D::point_mass(double value) { return Dist1D(Point{value}, "point-mass"); }

Dist1D Dist1D::empirical(std::vector<double> values, std::vector<double> cdfs) {
    check_grid(values, cdfs);
    return Dist1D(Grid{std::move(values), std::move(cdfs)}, "empirical");
}

Dist1D Dist1D::from_samples(std::vector<double> samples, std::size_t max_knots) {
    if (samples.empty()) throw DomainError("from_samples: no samples");
    std::sort(samples.begin(), samples.end());
    const double denom = static_cast<double>(samples.size()) + 1.0;
    std::vector<double> values;
    std::vector<double> cdfs;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) throw DomainError("from_samples: non-finite sample");
        if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
        values.push_back(samples[i]);
        cdfs.push_back(static_cast<double>(i + 1) / denom);
    }
    if (values.size() == 1) return point_mass(values.front());
    if (max_knots >= 2 && values.size() > max_knots) {
        std::vector<double> v;
        std::vector<double> c;
        const double stride = static_cast<double>(values.size() - 1) / static_cast<double>(max_knots - 1);
        std::size_t last = values.size();
        for (std::size_t k = 0; k < max_knots; ++k) {
            const auto idx = static_cast<std::size_t>(std::llround(k * stride));
            if (idx == last) continue;
            v.push_back(values[idx]);
            c.push_back(cdfs[idx]);
            last = idx;
        }
        values = std::move(v);
        cdfs = std::move(c);
    }
    return empirical(std::move(values), std::move(cdfs));
}

Dist1D Dist1D::custom(CdfFn cdf, QuantileFn quantile, std::vector<double> kink_probs, std::string label) {
    return Dist1D(Analytic{std::move(cdf), std::move(quantile)}, std::move(label), std::move(kink_probs));
}

Dist1D::Kind Dist1D::kind() const {
    return std::visit(Overloaded{[](const LogNormalParams&) { return Kind::LogNormal; },
                                 [](const NormalParams&) { return Kind::Normal; },
                                 [](const Grid&) { return Kind::Empirical; },
                                 [](const Point&) { return Kind::PointMass; },
                                 [](const Analytic&) { return Kind::Custom; }},
                      *impl_);
}

double Dist1D::cdf(double x) const {
    return std::visit(
        Overloaded{
            [x](const LogNormalParams& p) { return x > 0.0 ? norm_cdf((std::log(x) - p.m) / p.s) : 0.0; },
            [x](const NormalParams& p) { return norm_cdf((x - p.m) / p.s); },
            [x](const Grid& g) {
                if (x < g.values.front()) return 0.0;
                if (x >= g.values.back()) return 1.0;
                const auto it = std::upper_bound(g.values.begin(), g.values.end(), x);
                const auto i = static_cast<std::size_t>(it - g.values.begin()) - 1;
                const double w = (x - g.values[i]) / (g.values[i + 1] - g.values[i]);
                return g.cdfs[i] + w * (g.cdfs[i + 1] - g.cdfs[i]);
            },
            [x](const Point& p) { return x >= p.value ? 1.0 : 0.0; },
            [x](const Analytic& a) { return a.cdf(x); }},
        *impl_);
}

double Dist1D::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0,1)");
    return std::visit(Overloaded{[p](const LogNormalParams& d) { return std::exp(d.m + d.s * norm_quantile(p)); },
                                 [p](const NormalParams& d) { return d.m + d.s * norm_quantile(p); },
                                 [p](const Grid& g) {
                                     if (p <= g.cdfs.front()) return g.values.front();
                                     if (p > g.cdfs.back()) return g.values.back();
                                     const auto it = std::lower_bound(g.cdfs.begin(), g.cdfs.end(), p);
                                     const auto i = static_cast<std::size_t>(it - g.cdfs.begin());
                                     const double w = (p - g.cdfs[i - 1]) / (g.cdfs[i] - g.cdfs[i - 1]);
                                     return g.values[i - 1] + w * (g.values[i] - g.values[i - 1]);
                                 },
                                 [](const Point& d) { return d.value; },
                                 [p](const Analytic& a) { return a.quantile(p); }},
                      *impl_);
}

std::span<const double> Dist1D::knot_values() const {
    if (const auto* g = std::get_if<Grid>(impl_.get())) return g->values;
    return {};
}

std::span<const double> Dist1D::knot_cdfs() const {
    if (const auto* g = std::get_if<Grid>(impl_.get())) return g->cdfs;
    return {};
}

void write_dist_csv(std::ostream& out, const Dist1D& dist) {
    if (dist.kind() != Dist1D::Kind::Empirical) {
        throw DomainError("write_dist_csv: only empirical grids are serializable");
    }
    Table t({"value", "cdf"});
    const auto v = dist.knot_values();
    const auto c = dist.knot_cdfs();
    for (std::size_t i = 0; i < v.size(); ++i) t.add_row({v[i], c[i]});
    write_csv(out, t);
}

Dist1D read_dist_csv(std::istream& in) {
    const Table t = read_csv(in);
    const auto& v = t.column("value");
    const auto& c = t.column("cdf");
    return Dist1D::empirical(v, c);
}

}  // namespace optpay

#include "optpay/copula.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "optpay/errors.hpp"
#include "optpay/normal.hpp"
#include "optpay/table.hpp"

namespace optpay {

double ConditionalCopula::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return norm_cdf((norm_quantile(x) - rho * norm_quantile(v)) / std::sqrt(1.0 - rho * rho));
}

double ConditionalCopula::quantile(double y) const {
    if (!(y > 0.0 && y < 1.0)) throw DomainError("conditional copula quantile: y must lie in (0,1)");
    return norm_cdf(std::sqrt(1.0 - rho * rho) * norm_quantile(y) + rho * norm_quantile(v));
}

ConditionalCopula gaussian_copula_conditional(double rho, double v) {
    if (!(std::abs(rho) < 1.0)) {
        throw DomainError("gaussian copula needs |rho| < 1; use the Frechet upper/lower kinds instead");
    }
    if (!(v > 0.0 && v < 1.0)) throw DomainError("gaussian copula conditional: v must lie in (0,1)");
    return {rho, v};
}

CopulaSpec CopulaSpec::gaussian(double rho) {
    if (!(std::abs(rho) < 1.0)) {
        throw DomainError("gaussian copula needs |rho| < 1; use the Frechet upper/lower kinds instead");
    }
    return CopulaSpec(Kind::Gaussian, rho);
}

std::string CopulaSpec::name() const {
    switch (kind_) {
        case Kind::Gaussian: return "gaussian(rho=" + format_number(rho_) + ")";
        case Kind::FrechetUpper: return "frechet-upper";
        case Kind::FrechetLower: return "frechet-lower";
        case Kind::Independence: return "independence";
    }
    return "unknown";
}

double CopulaSpec::conditional_cdf(double x, double v) const {
    switch (kind_) {
        case Kind::Gaussian: return gaussian_copula_conditional(rho_, v).cdf(x);
        case Kind::FrechetUpper: return x >= v ? 1.0 : 0.0;
        case Kind::FrechetLower: return x >= 1.0 - v ? 1.0 : 0.0;
        case Kind::Independence: return std::clamp(x, 0.0, 1.0);
    }
    return 0.0;
}

double CopulaSpec::conditional_quantile(double y, double v) const {
    switch (kind_) {
        case Kind::Gaussian: return gaussian_copula_conditional(rho_, v).quantile(y);
        case Kind::FrechetUpper: return v;
        case Kind::FrechetLower: return 1.0 - v;
        case Kind::Independence: return y;
    }
    return y;
}

void validate_rho_for_intermediate(double rho, double t, double t_mat) {
    if (!(t > 0.0 && t < t_mat)) throw DomainError("intermediate benchmark: t must lie in (0,T)");
    const double lo = -std::sqrt(1.0 - t / t_mat);
    if (!(rho >= lo && rho < 1.0)) {
        throw DomainError("rho = " + std::to_string(rho) + " outside the admissible range [" +
                          std::to_string(lo) + ", 1) for an S_t benchmark");
    }
}

double rosenblatt_uniform(const std::function<double(double, double)>& cond_cdf, double x_given, double y) {
    return cond_cdf(x_given, y);
}

FrechetBounds frechet_bounds_check(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 2) throw DomainError("frechet_bounds_check: need at least 2 samples");
    std::vector<std::pair<double, double>> by_x(samples.begin(), samples.end());
    std::stable_sort(by_x.begin(), by_x.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> ys;
    ys.reserve(by_x.size());
    for (const auto& p : by_x) ys.push_back(p.second);
    std::sort(ys.begin(), ys.end());

    const std::size_t n = by_x.size();
    double lo = 0.0, mid = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = by_x[i].first;
        lo += x * ys[n - 1 - i];
        mid += x * by_x[i].second;
        hi += x * ys[i];
    }
    const double dn = static_cast<double>(n);
    return {lo / dn, mid / dn, hi / dn};
}

}  // namespace optpay

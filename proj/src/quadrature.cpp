#include "optpay/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "optpay/normal.hpp"

namespace optpay {

namespace {

using Rule = boost::math::quadrature::gauss<double, 10>;

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi, int panels,
                 std::span<const double> breakpoints) {
    if (!(hi > lo)) return 0.0;
    std::vector<double> cuts{lo};
    for (double b : breakpoints) {
        if (b > lo && b < hi) cuts.push_back(b);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double width = (hi - lo) / std::max(panels, 1);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k];
        const double b = cuts[k + 1];
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
        const double h = (b - a) / n;
        for (int i = 0; i < n; ++i) {
            const double pa = a + i * h;
            const double pb = (i + 1 == n) ? b : pa + h;
            total += Rule::integrate(f, pa, pb);
        }
    }
    return total;
}

double gaussian_expectation(const std::function<double(double)>& f, std::span<const double> z_breaks,
                            GaussQuadOptions opts) {
    auto g = [&](double z) { return f(z) * norm_pdf(z); };
    return integrate(g, -opts.half_width, opts.half_width, opts.panels, z_breaks);
}

double gaussian_expectation_2d(const std::function<double(double, double)>& f,
                               const std::function<std::vector<double>(double)>& inner_breaks,
                               GaussQuadOptions opts) {
    auto outer = [&](double z1) {
        std::vector<double> breaks;
        if (inner_breaks) breaks = inner_breaks(z1);
        auto inner = [&](double z2) { return f(z1, z2) * norm_pdf(z2); };
        return integrate(inner, -opts.half_width, opts.half_width, opts.panels, breaks) * norm_pdf(z1);
    };
    return integrate(outer, -opts.half_width, opts.half_width, opts.panels);
}

}  // namespace optpay

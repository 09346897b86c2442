#pragma once

#include <functional>
#include <span>
#include <vector>

namespace optpay {

/// Composite Gauss-Legendre rule: [lo, hi] is split at every breakpoint
/// strictly inside it, and each piece is divided into panels of roughly
/// equal width (total `panels` across the range) with a 10-node rule per
/// panel. Kinks or jumps of the integrand should be passed as breakpoints.
double integrate(const std::function<double(double)>& f, double lo, double hi, int panels = 200,
                 std::span<const double> breakpoints = {});

struct GaussQuadOptions {
    double half_width = 12.0;  ///< integrate z over [-half_width, half_width]
    int panels = 200;
};

/// E[f(Z)] for Z ~ N(0,1).
double gaussian_expectation(const std::function<double(double)>& f, std::span<const double> z_breaks = {},
                            GaussQuadOptions opts = {});

/// E[f(Z1, Z2)] for independent standard normals. `inner_breaks(z1)` may
/// return kink locations in z2 for the given z1.
double gaussian_expectation_2d(const std::function<double(double, double)>& f,
                               const std::function<std::vector<double>(double)>& inner_breaks = {},
                               GaussQuadOptions opts = {10.0, 80});

}  // namespace optpay

#pragma once

#include <span>
#include <vector>

namespace optpay {

/// Result of projecting phi onto the cone of nonincreasing functions.
struct IsotonicFit {
    std::vector<double> grid;
    std::vector<double> phi;
    std::vector<double> phi_hat;
    std::vector<double> weights;
};

/// Weighted pool-adjacent-violators for the nonincreasing cone: the
/// L2(weights)-closest nonincreasing sequence. Zero-weight points take the
/// value of the block they end up in. Throws on negative weights.
std::vector<double> pava_nonincreasing(std::span<const double> phi, std::span<const double> weights);

/// PAVA with the inputs kept alongside. Empty `weights` means equal weights,
/// empty `grid` means indices.
IsotonicFit isotonic_project(std::span<const double> phi, std::span<const double> weights = {},
                             std::span<const double> grid = {});

}  // namespace optpay

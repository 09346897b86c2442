#include "optpay/isotonic.hpp"

#include <algorithm>

#include "optpay/errors.hpp"

namespace optpay {

std::vector<double> pava_nonincreasing(std::span<const double> phi, std::span<const double> weights) {
    if (phi.size() != weights.size()) throw DomainError("pava: phi and weights differ in length");
    // A block keeps its input value until it is pooled, so inputs that are
    // already nonincreasing come back bit for bit.
    struct Block {
        double sum_wv;
        double sum_w;
        double sum_v;
        std::size_t count;
        double val;
        double value() const { return val; }
        void pool() { val = sum_w > 0.0 ? sum_wv / sum_w : sum_v / static_cast<double>(count); }
    };
    std::vector<Block> stack;
    stack.reserve(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (weights[i] < 0.0) throw DomainError("pava: weights must be >= 0");
        stack.push_back({weights[i] * phi[i], weights[i], phi[i], 1, phi[i]});
        while (stack.size() > 1 && stack[stack.size() - 2].value() < stack.back().value()) {
            const Block top = stack.back();
            stack.pop_back();
            auto& b = stack.back();
            b.sum_wv += top.sum_wv;
            b.sum_w += top.sum_w;
            b.sum_v += top.sum_v;
            b.count += top.count;
            b.pool();
        }
    }
    std::vector<double> out;
    out.reserve(phi.size());
    for (const auto& b : stack) out.insert(out.end(), b.count, b.value());
    return out;
}

IsotonicFit isotonic_project(std::span<const double> phi, std::span<const double> weights,
                             std::span<const double> grid) {
    IsotonicFit fit;
    fit.phi.assign(phi.begin(), phi.end());
    if (weights.empty()) {
        fit.weights.assign(phi.size(), 1.0 / static_cast<double>(std::max<std::size_t>(phi.size(), 1)));
    } else {
        fit.weights.assign(weights.begin(), weights.end());
    }
    if (grid.empty()) {
        for (std::size_t i = 0; i < phi.size(); ++i) fit.grid.push_back(static_cast<double>(i));
    } else {
        if (grid.size() != phi.size()) throw DomainError("isotonic_project: grid and phi differ in length");
        fit.grid.assign(grid.begin(), grid.end());
    }
    fit.phi_hat = pava_nonincreasing(fit.phi, fit.weights);
    return fit;
}

}  // namespace optpay

#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>

namespace optpay {

/// Conditional Gaussian copula C_{1|v} for fixed v, as a cdf on (0,1)
/// together with its inverse.
struct ConditionalCopula {
    double rho;
    double v;

    double cdf(double x) const;
    double quantile(double y) const;
};

/// Throws DomainError unless |rho| < 1 and v in (0,1). The Fréchet limits
/// are separate CopulaSpec kinds, never rho = +-1.
ConditionalCopula gaussian_copula_conditional(double rho, double v);

/// Dependence constraint between a payoff and its benchmark.
class CopulaSpec {
public:
    enum class Kind { Gaussian, FrechetUpper, FrechetLower, Independence };

    static CopulaSpec gaussian(double rho);
    static CopulaSpec frechet_upper() { return CopulaSpec(Kind::FrechetUpper, 1.0); }
    static CopulaSpec frechet_lower() { return CopulaSpec(Kind::FrechetLower, -1.0); }
    static CopulaSpec independence() { return CopulaSpec(Kind::Independence, 0.0); }

    Kind kind() const { return kind_; }
    /// Gaussian correlation; +1 / -1 / 0 for the symbolic kinds.
    double rho() const { return rho_; }
    std::string name() const;

    /// C_{1|v}(x): conditional cdf of the first coordinate given the second is v.
    double conditional_cdf(double x, double v) const;
    /// Inverse of conditional_cdf in x.
    double conditional_quantile(double y, double v) const;

private:
    CopulaSpec(Kind kind, double rho) : kind_(kind), rho_(rho) {}

    Kind kind_;
    double rho_;
};

/// Admissible Gaussian correlations when the benchmark is S_t and the payoff
/// must end up increasing in the construction variable: [-sqrt(1-t/T), 1).
void validate_rho_for_intermediate(double rho, double t, double t_mat);

/// V = F_{Y|X=x}(y). Over the joint law V is uniform and independent of X.
double rosenblatt_uniform(const std::function<double(double, double)>& cond_cdf, double x_given, double y);

struct FrechetBounds {
    double lower;  ///< anti-monotone rearrangement mean of x*y
    double e_xy;   ///< sample mean of x*y
    double upper;  ///< comonotone rearrangement mean of x*y
};

/// Hoeffding-Fréchet bounds on E[XY] from the empirical marginals. All three
/// sums run in x-sorted order, so comonotone (anti-monotone) input reproduces
/// the upper (lower) bound bit for bit.
FrechetBounds frechet_bounds_check(std::span<const std::pair<double, double>> samples);

}  // namespace optpay

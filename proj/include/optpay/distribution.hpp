#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace optpay {

/// A one-dimensional distribution exposing a right-continuous cdf and its
/// left-continuous generalized inverse F^-1(p) = inf{x : F(x) >= p}.
///
/// Empirical grids are piecewise linear between knots. Below the first knot
/// the cdf is 0 and above the last it is 1, so the quantile clamps to the
/// first/last knot value in the tails.
class Dist1D {
public:
    enum class Kind { LogNormal, Normal, Empirical, PointMass, Custom };

    using CdfFn = std::function<double(double)>;
    using QuantileFn = std::function<double(double)>;

    /// ln X ~ N(m, s^2).
    static Dist1D lognormal(double m, double s);
    static Dist1D normal(double m, double s);
    static Dist1D point_mass(double value);
    /// Knots must have strictly increasing values and strictly increasing
    /// cdf values inside (0,1).
    static Dist1D empirical(std::vector<double> values, std::vector<double> cdfs);
    /// Empirical grid from raw samples using plotting positions rank/(n+1).
    /// Tied samples collapse into one knot. `max_knots` > 0 thins the grid.
    static Dist1D from_samples(std::vector<double> samples, std::size_t max_knots = 0);
    /// Arbitrary analytic law. `kink_probs` lists levels p where the quantile
    /// has kinks or jumps (atoms of the law); quadrature uses them.
    static Dist1D custom(CdfFn cdf, QuantileFn quantile, std::vector<double> kink_probs = {},
                         std::string label = "custom");

    double cdf(double x) const;
    /// Throws DomainError for p outside (0,1).
    double quantile(double p) const;

    Kind kind() const;
    const std::string& label() const { return label_; }
    const std::vector<double>& kink_probs() const { return kinks_; }
    bool is_point_mass() const { return kind() == Kind::PointMass; }

    /// Knot access, empirical grids only (empty otherwise).
    std::span<const double> knot_values() const;
    std::span<const double> knot_cdfs() const;

private:
    struct LogNormalParams { double m, s; };
    struct NormalParams { double m, s; };
    struct Grid { std::vector<double> values, cdfs; };
    struct Point { double value; };
    struct Analytic { CdfFn cdf; QuantileFn quantile; };

    using Impl = std::variant<LogNormalParams, NormalParams, Grid, Point, Analytic>;

    Dist1D(Impl impl, std::string label, std::vector<double> kinks = {});

    std::shared_ptr<const Impl> impl_;
    std::string label_;
    std::vector<double> kinks_;
};

/// CSV with header `value,cdf`; lines starting with '#' are ignored on read.
void write_dist_csv(std::ostream& out, const Dist1D& dist);
Dist1D read_dist_csv(std::istream& in);

}  // namespace optpay

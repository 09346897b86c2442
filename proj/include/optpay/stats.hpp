#pragma once

#include <functional>
#include <span>
#include <vector>

namespace optpay {

/// Asymptotic Kolmogorov-Smirnov constant at the 1% level.
inline constexpr double kKsC01 = 1.628;

/// sup_x |F_n(x) - F(x)|.
double ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);
/// sup_x |F_a(x) - F_b(x)|, ties handled by advancing through equal values together.
double ks_two_sample(std::span<const double> a, std::span<const double> b);
double ks_critical_1pct(std::size_t n);
double ks_critical_1pct(std::size_t n, std::size_t m);

double mean(std::span<const double> x);
/// Sample standard deviation (n-1 denominator).
double sample_sd(std::span<const double> x);
double pearson(std::span<const double> x, std::span<const double> y);
/// Average ranks (1-based), ties share the mean rank.
std::vector<double> ranks(std::span<const double> x);
double spearman(std::span<const double> x, std::span<const double> y);

struct KendallCounts {
    long long concordant = 0;
    long long discordant = 0;
    long long tied = 0;  ///< pairs tied in x or in y
    double tau() const;
};

/// O(n^2) pair count; callers cap n.
KendallCounts kendall_counts(std::span<const double> x, std::span<const double> y);

/// Standard error of the mean from `batches` contiguous batch means.
double batch_means_stderr(std::span<const double> x, std::size_t batches = 100);

}  // namespace optpay

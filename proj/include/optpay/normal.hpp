#pragma once

// Standard normal distribution helpers. Every closed-form price in the
// library bottoms out in these two functions.

namespace optpay {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal cdf, accurate to ~1e-16 absolute over the whole line.
double norm_cdf(double x);

/// Inverse of norm_cdf on (0,1). Throws DomainError outside (0,1).
double norm_quantile(double p);

/// Clamp a probability into the open interval (0,1). Used where norm_cdf
/// rounds to exactly 0 or 1 far in the tails.
double clamp_open_unit(double p);

}  // namespace optpay

#pragma once

// Black-Scholes market primitives: the lognormal law of the asset, the
// state-price density as an explicit decreasing function of the asset price,
// and the bivariate normal laws of log-observations used by the payoff
// constructions (terminal price, intermediate price, geometric average).

namespace optpay {

/// Black-Scholes parameters under the physical measure.
struct MarketParams {
    double mu = 0.06;     ///< drift per year
    double r = 0.02;      ///< risk-free rate per year
    double sigma = 0.3;   ///< volatility per year
    double s0 = 100.0;    ///< initial asset price
    double t_mat = 1.0;   ///< horizon T in years

    /// Throws DomainError unless sigma, s0, t_mat > 0 and (when
    /// require_risk_premium) mu > r.
    void validate(bool require_risk_premium = true) const;

    /// Market price of risk (mu - r) / sigma.
    double theta() const { return (mu - r) / sigma; }
    /// Elasticity of the state-price density with respect to the asset price.
    double beta() const { return theta() / sigma; }
    /// Drift of ln S under the physical measure.
    double log_drift() const { return mu - 0.5 * sigma * sigma; }
};

/// xi_t = alpha_t (S_t / S0)^(-beta).
struct StatePriceCoeffs {
    double alpha_t;
    double beta;
};

StatePriceCoeffs state_price_coeffs(const MarketParams& params, double t);

/// State-price density at time t as a function of the asset price there.
double state_price_density(const MarketParams& params, double s_t, double t);

/// Inverse of state_price_density in s_t (used to turn xi-thresholds into
/// price thresholds).
double state_price_inverse(const MarketParams& params, double xi, double t);

/// P(S_t <= x) under the physical measure.
double cdf_st(const MarketParams& params, double t, double x);
double quantile_st(const MarketParams& params, double t, double p);

inline double cdf_sT(const MarketParams& params, double x) { return cdf_st(params, params.t_mat, x); }
inline double quantile_sT(const MarketParams& params, double p) {
    return quantile_st(params, params.t_mat, p);
}

/// Black-Scholes European call and put prices at the horizon T.
double black_scholes_call(const MarketParams& params, double strike);
double black_scholes_put(const MarketParams& params, double strike);

/// One-dimensional normal law.
struct NormalLaw {
    double mean;
    double sd;

    double cdf(double x) const;
    double quantile(double p) const;
    double pdf(double x) const;
    double variance() const { return sd * sd; }
};

/// Joint normal law of two log-observations (X, Y) = (coord 0, coord 1).
struct BiLognormalLaw {
    double mean1;
    double mean2;
    double sd1;
    double sd2;
    double rho;

    void validate() const;
    double covariance() const { return rho * sd1 * sd2; }
    NormalLaw marginal(int coord) const;
};

/// Law of one coordinate given the other equals `given_value` (in log units).
NormalLaw conditional_law(const BiLognormalLaw& joint, int given_coord, double given_value);

/// Joint law of (ln G_T, ln S_T) where ln G_T is the time-average of ln S.
BiLognormalLaw geometric_average_joint(const MarketParams& params);

/// Joint law of (ln S_t, ln S_T) for 0 < t < T.
BiLognormalLaw pair_joint_sT_st(const MarketParams& params, double t);

}  // namespace optpay

#include "optpay/market.hpp"

#include <cmath>
#include <string>

#include "optpay/errors.hpp"
#include "optpay/normal.hpp"

namespace optpay {

void MarketParams::validate(bool require_risk_premium) const {
    if (!(sigma > 0.0)) throw DomainError("market: sigma must be > 0");
    if (!(s0 > 0.0)) throw DomainError("market: s0 must be > 0");
    if (!(t_mat > 0.0)) throw DomainError("market: T must be > 0");
    if (!std::isfinite(mu) || !std::isfinite(r)) throw DomainError("market: mu and r must be finite");
    if (require_risk_premium && !(mu > r)) {
        throw DomainError("market: mu must exceed r (decreasing state-price density)");
    }
}

StatePriceCoeffs state_price_coeffs(const MarketParams& params, double t) {
    const double theta = params.theta();
    const double beta = params.beta();
    const double alpha = std::exp(beta * params.log_drift() * t - (params.r + 0.5 * theta * theta) * t);
    return {alpha, beta};
}

double state_price_density(const MarketParams& params, double s_t, double t) {
    if (!(s_t > 0.0)) throw DomainError("state_price_density: price must be > 0");
    if (!(t > 0.0 && t <= params.t_mat)) throw DomainError("state_price_density: t must lie in (0,T]");
    const auto [alpha, beta] = state_price_coeffs(params, t);
    return alpha * std::pow(s_t / params.s0, -beta);
}

double state_price_inverse(const MarketParams& params, double xi, double t) {
    if (!(xi > 0.0)) throw DomainError("state_price_inverse: density must be > 0");
    const auto [alpha, beta] = state_price_coeffs(params, t);
    return params.s0 * std::pow(xi / alpha, -1.0 / beta);
}

double cdf_st(const MarketParams& params, double t, double x) {
    if (!(x > 0.0)) throw DomainError("cdf_sT: price must be > 0, got " + std::to_string(x));
    const double z = (std::log(x / params.s0) - params.log_drift() * t) / (params.sigma * std::sqrt(t));
    return norm_cdf(z);
}

double quantile_st(const MarketParams& params, double t, double p) {
    return params.s0 * std::exp(params.log_drift() * t + params.sigma * std::sqrt(t) * norm_quantile(p));
}

double black_scholes_call(const MarketParams& params, double strike) {
    if (!(strike >= 0.0)) throw DomainError("black_scholes_call: strike must be >= 0");
    const double disc = std::exp(-params.r * params.t_mat);
    if (strike == 0.0) return params.s0;
    const double vol = params.sigma * std::sqrt(params.t_mat);
    const double d1 = (std::log(params.s0 / strike) + params.r * params.t_mat) / vol + 0.5 * vol;
    return params.s0 * norm_cdf(d1) - strike * disc * norm_cdf(d1 - vol);
}

double black_scholes_put(const MarketParams& params, double strike) {
    return black_scholes_call(params, strike) - params.s0 + strike * std::exp(-params.r * params.t_mat);
}

double NormalLaw::cdf(double x) const { return norm_cdf((x - mean) / sd); }
double NormalLaw::quantile(double p) const { return mean + sd * norm_quantile(p); }
double NormalLaw::pdf(double x) const {
    const double z = (x - mean) / sd;
    return norm_pdf(z) / sd;
}

void BiLognormalLaw::validate() const {
    if (!(sd1 > 0.0 && sd2 > 0.0)) throw DomainError("bivariate law: standard deviations must be > 0");
    if (!(std::abs(rho) <= 1.0)) throw DomainError("bivariate law: |rho| must be <= 1");
}

NormalLaw BiLognormalLaw::marginal(int coord) const {
    return coord == 0 ? NormalLaw{mean1, sd1} : NormalLaw{mean2, sd2};
}

NormalLaw conditional_law(const BiLognormalLaw& joint, int given_coord, double given_value) {
    joint.validate();
    if (given_coord != 0 && given_coord != 1) throw DomainError("conditional_law: coordinate must be 0 or 1");
    const NormalLaw x = joint.marginal(1 - given_coord);
    const NormalLaw y = joint.marginal(given_coord);
    const double slope = joint.covariance() / y.variance();
    return {x.mean + slope * (given_value - y.mean), std::sqrt(1.0 - joint.rho * joint.rho) * x.sd};
}

BiLognormalLaw geometric_average_joint(const MarketParams& params) {
    const double t = params.t_mat;
    const double ln_s0 = std::log(params.s0);
    const double m = params.log_drift();
    return {ln_s0 + 0.5 * m * t, ln_s0 + m * t, params.sigma * std::sqrt(t / 3.0),
            params.sigma * std::sqrt(t), std::sqrt(3.0) / 2.0};
}

BiLognormalLaw pair_joint_sT_st(const MarketParams& params, double t) {
    if (!(t > 0.0 && t < params.t_mat)) throw DomainError("pair_joint_sT_st: t must lie in (0,T)");
    const double ln_s0 = std::log(params.s0);
    const double m = params.log_drift();
    return {ln_s0 + m * t, ln_s0 + m * params.t_mat, params.sigma * std::sqrt(t),
            params.sigma * std::sqrt(params.t_mat), std::sqrt(t / params.t_mat)};
}

}  // namespace optpay

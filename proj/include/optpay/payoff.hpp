#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace optpay {

/// Path observations handed to a payoff: S at the payoff's observation times
/// (in increasing order, the horizon T last) and, when requested, G_T.
struct Observables {
    std::span<const double> s;
    double g = std::numeric_limits<double>::quiet_NaN();

    double s_T() const { return s.back(); }
};

/// A payoff as a deterministic function of a few path observations.
class PayoffFn {
public:
    using Eval = std::function<double(const Observables&)>;
    using Terminal = std::function<double(double)>;

    /// `times` must be increasing, end at the horizon and lie in (0, T].
    PayoffFn(std::vector<double> times, bool needs_g, Eval eval, std::string name = "payoff");

    /// f(S_T).
    static PayoffFn terminal(double t_mat, Terminal f, std::string name = "terminal");
    /// f(S_t, S_T) for 0 < t < T.
    static PayoffFn pair(double t, double t_mat, std::function<double(double, double)> f,
                         std::string name = "pair");
    /// f(G_T, S_T).
    static PayoffFn with_average(double t_mat, std::function<double(double, double)> f,
                                 std::string name = "average");
    static PayoffFn constant(double t_mat, double c);

    double operator()(const Observables& obs) const { return eval_(obs); }
    /// Evaluate a payoff given observed values in the payoff's own layout.
    double eval(std::span<const double> s, double g = std::numeric_limits<double>::quiet_NaN()) const;

    const std::vector<double>& times() const { return times_; }
    double horizon() const { return times_.back(); }
    bool needs_g() const { return needs_g_; }
    const std::string& name() const { return name_; }

    /// True when the payoff is a known function of S_T alone.
    bool is_terminal() const { return static_cast<bool>(terminal_); }
    /// The S_T -> payoff map of a terminal payoff; empty otherwise.
    const Terminal& terminal_fn() const { return terminal_; }

private:
    std::vector<double> times_;
    bool needs_g_;
    Eval eval_;
    std::string name_;
    Terminal terminal_;
};

}  // namespace optpay

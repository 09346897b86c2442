#include "optpay/payoff.hpp"

#include "optpay/errors.hpp"

namespace optpay {

PayoffFn::PayoffFn(std::vector<double> times, bool needs_g, Eval eval, std::string name)
    : times_(std::move(times)), needs_g_(needs_g), eval_(std::move(eval)), name_(std::move(name)) {
    if (times_.empty()) throw DomainError("payoff: need at least the horizon as observation time");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!(times_[i] > 0.0)) throw DomainError("payoff: observation times must be > 0");
        if (i > 0 && !(times_[i] > times_[i - 1])) throw DomainError("payoff: times must increase");
    }
    if (!eval_) throw DomainError("payoff: empty evaluator");
}

PayoffFn PayoffFn::terminal(double t_mat, Terminal f, std::string name) {
    PayoffFn p({t_mat}, false, [f](const Observables& o) { return f(o.s_T()); }, std::move(name));
    p.terminal_ = std::move(f);
    return p;
}

PayoffFn PayoffFn::pair(double t, double t_mat, std::function<double(double, double)> f, std::string name) {
    if (!(t > 0.0 && t < t_mat)) throw DomainError("pair payoff: t must lie in (0,T)");
    return PayoffFn({t, t_mat}, false, [f = std::move(f)](const Observables& o) { return f(o.s[0], o.s[1]); },
                    std::move(name));
}

PayoffFn PayoffFn::with_average(double t_mat, std::function<double(double, double)> f, std::string name) {
    return PayoffFn({t_mat}, true, [f = std::move(f)](const Observables& o) { return f(o.g, o.s_T()); },
                    std::move(name));
}

PayoffFn PayoffFn::constant(double t_mat, double c) {
    return terminal(t_mat, [c](double) { return c; }, "constant");
}

double PayoffFn::eval(std::span<const double> s, double g) const {
    if (s.size() != times_.size()) throw DomainError("payoff: observation count mismatch");
    return eval_(Observables{s, g});
}

}  // namespace optpay

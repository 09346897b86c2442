// optpay command-line front end. Exit codes: 0 ok, 1 tolerance miss, 2 usage or input error.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "optpay/asian.hpp"
#include "optpay/benchmark.hpp"
#include "optpay/copula.hpp"
#include "optpay/cost_efficiency.hpp"
#include "optpay/distribution.hpp"
#include "optpay/errors.hpp"
#include "optpay/eut.hpp"
#include "optpay/market.hpp"
#include "optpay/mc.hpp"
#include "optpay/normal.hpp"
#include "optpay/spec_parser.hpp"
#include "optpay/table.hpp"
#include "optpay/target_prob.hpp"
#include "optpay/twins.hpp"

using namespace optpay;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMiss = 1;
constexpr int kExitUsage = 2;

constexpr double kPublishedFloatingPut = 6.74;
constexpr double kPublishedCheapestTwin = 5.86;
constexpr double kPublishedTol = 0.005;
constexpr double kRhoMaxTol = 1e-4;
constexpr double kTouchTol = 1e-10;

struct Options {
    MarketParams market;
    SimConfig sim;
    std::string out;
    std::string format = "csv";
    double eta = 2.0;
    bool eta_set = false;
    double w0 = 100.0;
    double b = 106.0;
    double t = std::numeric_limits<double>::quiet_NaN();
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("OPTPAY_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') throw DomainError(std::string("OPTPAY_SEED is not an integer: ") + env);
        return v;
    }
    return kDefaultSeed;
}

void add_provenance(Table& table, const std::string& command, const Options& o) {
    const auto& m = o.market;
    table.add_note("optpay " + command);
    table.add_note("market: mu=" + format_number(m.mu) + " r=" + format_number(m.r) + " sigma=" + format_number(m.sigma) +
                   " s0=" + format_number(m.s0) + " T=" + format_number(m.t_mat));
    table.add_note("simulation: paths=" + std::to_string(o.sim.n_paths) +
                   " steps_per_year=" + std::to_string(o.sim.steps_per_year) + " seed=" + std::to_string(o.sim.seed) +
                   " generator=philox4x32-10");
}

void emit(const Table& table, const Options& o) {
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw DomainError("cannot open output file " + o.out);
    }
    std::ostream& os = o.out.empty() ? std::cout : file;
    if (o.format == "json") {
        write_json(os, table);
    } else {
        write_csv(os, table);
    }
}

double horizon_t(const Options& o) { return std::isnan(o.t) ? o.market.t_mat / 2.0 : o.t; }

// ---- instruments -----------------------------------------------------------

// Terminal payoff read from a CSV with an s_T column and a payoff column;
// linear between rows, flat outside.
PayoffFn payoff_from_table(const std::string& path, const std::string& column, double t_mat) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read payoff table " + path);
    const Table tab = read_csv(in);
    auto s = tab.column("s_T");
    auto v = tab.column(column);
    if (s.size() < 2) throw DomainError("payoff table needs at least two rows");
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!(s[i] > s[i - 1])) throw DomainError("payoff table: s_T must be strictly increasing");
    }
    return PayoffFn::terminal(
        t_mat,
        [s, v](double x) {
            if (x <= s.front()) return v.front();
            if (x >= s.back()) return v.back();
            const auto it = std::upper_bound(s.begin(), s.end(), x);
            const std::size_t j = static_cast<std::size_t>(it - s.begin());
            const double w = (x - s[j - 1]) / (s[j] - s[j - 1]);
            return v[j - 1] + w * (v[j] - v[j - 1]);
        },
        "custom:" + path);
}

Table run_price(const std::string& spec_text, const Options& o) {
    const ParsedSpec spec = parse_spec(spec_text);
    const auto& p = o.market;
    const double t_mat = p.t_mat;
    Table tab({"instrument", "method", "value", "std_err"});
    auto row = [&](const std::string& method, double value, double se = 0.0) {
        tab.add_row({spec_text, method, value, se});
    };
    auto mc = [&](const PayoffFn& f) {
        const auto est = price(f, o.sim, p);
        row("monte-carlo", est.value, est.std_err);
    };
    const std::string& n = spec.name;
    if (n == "bond") {
        const double notional = spec.number_or("notional", 1.0);
        row("closed-form", notional * std::exp(-p.r * t_mat));
        mc(PayoffFn::constant(t_mat, notional));
    } else if (n == "european-call" || n == "european-put") {
        const double k = spec.number_or("K", p.s0);
        const bool call = n == "european-call";
        row("closed-form", call ? black_scholes_call(p, k) : black_scholes_put(p, k));
        auto f = [k, call](double s) { return std::max(call ? s - k : k - s, 0.0); };
        row("quadrature", price_terminal(p, f, std::vector<double>{k}));
        mc(PayoffFn::terminal(t_mat, f, n));
    } else if (n == "geo-asian-fixed") {
        const double k = spec.number_or("K", p.s0);
        row("closed-form", price_kemna_vorst(p, k).value);
        row("quadrature", quadrature_geometric_call(p, k).value);
        mc(geometric_call_payoff(p, k));
    } else if (n == "geo-asian-floating") {
        row("closed-form", price_floating_asian_put(p).value);
        row("quadrature", quadrature_floating_put(p).value);
        mc(floating_put_payoff(p));
    } else if (n == "cheapest-floating-twin") {
        row("closed-form", price_cheapest_floating_twin(p).value);
        row("quadrature", quadrature_cheapest_floating_twin(p).value);
        mc(cheapest_floating_twin_payoff(p));
    } else if (n == "power-call") {
        const double k = spec.number_or("K", p.s0);
        row("closed-form", price_cost_efficient_fixed_strike(p, k).value);
        row("quadrature", quadrature_power_call(p, k).value);
        mc(power_call_payoff(p, k));
    } else if (n == "custom") {
        if (!spec.has("file")) throw DomainError("custom instrument needs file=<payoff table csv>");
        const auto f = payoff_from_table(spec.text_or("file", ""), spec.text_or("column", "payoff"), t_mat);
        row("quadrature", price_terminal(p, f.terminal_fn()));
        mc(f);
    } else {
        throw SpecParseError("unknown instrument '" + n +
                                 "' (bond, european-call, european-put, geo-asian-fixed, geo-asian-floating, "
                                 "cheapest-floating-twin, power-call, custom)",
                             0);
    }
    return tab;
}

// ---- law / benchmark / copula specs -----------------------------------------

Dist1D parse_target(const std::string& text, const MarketParams& p) {
    const ParsedSpec s = parse_spec(text);
    if (s.name == "put") return put_payoff_distribution(p, s.number_or("K", p.s0));
    if (s.name == "lognormal") return Dist1D::lognormal(s.number("m"), s.number("s"));
    if (s.name == "geo-average") {
        return Dist1D::lognormal(std::log(p.s0) + 0.5 * p.log_drift() * p.t_mat, p.sigma * std::sqrt(p.t_mat / 3.0));
    }
    if (s.name == "constant") return Dist1D::point_mass(s.number("c"));
    if (s.name == "file") {
        std::ifstream in(s.text_or("path", ""));
        if (!in) throw DomainError("cannot read distribution file " + s.text_or("path", ""));
        return read_dist_csv(in);
    }
    throw SpecParseError("unknown target law '" + s.name + "' (put, lognormal, geo-average, constant, file)", 0);
}

BenchmarkSpec parse_benchmark(const std::string& text, const MarketParams& p) {
    const ParsedSpec s = parse_spec(text);
    if (s.name == "terminal") return BenchmarkSpec::terminal();
    if (s.name == "intermediate") return BenchmarkSpec::intermediate(s.number_or("t", p.t_mat / 2.0));
    if (s.name == "average") return BenchmarkSpec::geometric_average();
    throw SpecParseError("unknown benchmark '" + s.name + "' (terminal, intermediate:t=, average)", 0);
}

CopulaSpec parse_copula(const std::string& text) {
    const ParsedSpec s = parse_spec(text);
    if (s.name == "gaussian") return CopulaSpec::gaussian(s.number("rho"));
    if (s.name == "upper") return CopulaSpec::frechet_upper();
    if (s.name == "lower") return CopulaSpec::frechet_lower();
    if (s.name == "independence") return CopulaSpec::independence();
    throw SpecParseError("unknown copula '" + s.name + "' (gaussian:rho=, upper, lower, independence)", 0);
}

std::vector<double> s_grid(const MarketParams& p, int n = 25) {
    std::vector<double> g;
    for (int i = 1; i <= n; ++i) g.push_back(quantile_sT(p, static_cast<double>(i) / (n + 1)));
    return g;
}

double at(const PayoffFn& f, double s) {
    const double obs[] = {s};
    return f.eval(obs);
}

// ---- commands ---------------------------------------------------------------

Table run_cost_efficient(const std::string& target_text, std::optional<double> at_price, const Options& o) {
    const auto& p = o.market;
    const Dist1D law = parse_target(target_text, p);
    const auto ce = cost_efficient_payoff(law, p);
    const auto me = most_expensive_payoff(law, p);
    const auto range = attainable_prices(law, p);
    std::vector<std::string> cols{"s_T", "cost_efficient", "most_expensive"};
    std::optional<AtPrice> chosen;
    if (at_price) {
        chosen = payoff_at_price(law, *at_price, p);
        cols.push_back("at_price");
    }
    Table tab(cols);
    for (double s : s_grid(p)) {
        std::vector<Table::Cell> r{s, at(ce, s), at(me, s)};
        if (chosen) r.emplace_back(at(chosen->payoff, s));
        tab.add_row(r);
    }
    tab.add_note("target law: " + target_text);
    tab.add_note("cheapest price (quadrature): " + format_number(range.cheapest));
    tab.add_note("most expensive price (quadrature): " + format_number(range.most_expensive));
    if (chosen) {
        tab.add_note("payoff at price " + format_number(*at_price) + ": F_S(a*)=" + format_number(chosen->u_a) +
                     " a*=" + format_number(chosen->a) + " (" + chosen->method + ")");
    }
    return tab;
}

Table run_twin(const std::string& joint_name, std::optional<double> at_price, const Options& o) {
    const auto& p = o.market;
    if (joint_name == "average" || joint_name == "floating-put") {
        const JointSpec joint = joint_name == "average" ? average_given_sT(p) : floating_put_given_sT(p);
        std::vector<double> grid;
        for (int i = 1; i < 20; ++i) grid.push_back(p.t_mat * i / 20.0);
        const auto best = best_twin_by_correlation(joint, grid, p, o.sim);
        Table tab({"t", "rho", "std_err"});
        for (const auto& pt : best.curve) tab.add_row({pt.t, pt.rho, pt.std_err});
        tab.add_note("joint: " + joint.name);
        tab.add_note("best t* = " + format_number(best.t_star) + ", rho = " + format_number(best.rho_star) + " (" +
                     best.method + ")");
        return tab;
    }
    if (joint_name == "floating-put-g") {
        const JointSpec joint = floating_put_given_g(p);
        Table tab({"u", "price"});
        for (int i = 0; i <= 10; ++i) tab.add_row({i / 10.0, twin_family_price(joint, p, i / 10.0)});
        tab.add_note("joint: " + joint.name + "; u = 0 is the cheapest twin, u = 1 the most expensive");
        if (at_price) {
            const auto tw = twin_at_price(joint, *at_price, p, o.sim);
            tab.add_note("twin at price " + format_number(*at_price) + ": u=" + format_number(tw.u) + " (" + tw.method +
                         ")");
        }
        return tab;
    }
    throw SpecParseError("unknown joint '" + joint_name + "' (average, floating-put, floating-put-g)", 0);
}

Table run_eut(const std::string& bench_text, const std::string& copula_text, const Options& o) {
    const auto& p = o.market;
    const auto bench = parse_benchmark(bench_text, p);
    const auto copula = parse_copula(copula_text);
    const auto u = UtilitySpec::crra(o.eta);
    EutOptions opts;
    opts.phi.config = o.sim;
    const auto opt = constrained_eut_optimum(u, o.w0, bench, copula, p, opts);
    Table tab({"z", "phi", "phi_hat", "payoff"});
    const auto& f = opt.fit;
    const std::size_t step = std::max<std::size_t>(1, f.grid.size() / 50);
    for (std::size_t i = 0; i < f.grid.size(); i += step) {
        tab.add_row({f.grid[i], f.phi[i], f.phi_hat[i], opt.x_of_w(norm_quantile(f.grid[i]))});
    }
    tab.add_note("benchmark: " + bench.name() + ", copula: " + copula.name() + ", eta=" + format_number(o.eta) +
                 ", W0=" + format_number(o.w0));
    tab.add_note("lambda = " + format_number(opt.lambda) + ", phi method: " + opt.phi_method);
    if (opt.degenerate) tab.add_note("degenerate: " + opt.diagnostic);
    ExpectationOptions eo;
    eo.config = o.sim;
    tab.add_note("expected utility = " + format_number(expected_utility(opt.payoff, u, p, eo)) +
                 ", unconstrained = " + format_number(crra_expected_utility_unconstrained(o.eta, o.w0, p)));
    return tab;
}

Table run_target_prob(const std::string& bench_text, const std::string& copula_text, const Options& o) {
    const auto& p = o.market;
    Table tab({"quantity", "value", "method"});
    if (bench_text.empty()) {
        const auto opt = browne_optimum(o.w0, o.b, p);
        tab.add_row({std::string("lambda_S_T"), opt.lambda, opt.method});
        tab.add_row({std::string("success_probability"), opt.success_prob, opt.method});
        tab.add_row({std::string("expected_payoff"), o.b * opt.success_prob, opt.method});
        tab.add_row({std::string("budget"), opt.budget, opt.method});
        tab.add_note("unconstrained digital b 1{S_T > lambda}, W0=" + format_number(o.w0) + " b=" + format_number(o.b));
        return tab;
    }
    const auto bench = parse_benchmark(bench_text, p);
    const auto copula = parse_copula(copula_text);
    const auto opt = benchmark_constrained_optimum(o.w0, o.b, bench, copula, p, o.sim);
    tab.add_row({std::string("lambda_Z"), opt.lambda, opt.method});
    tab.add_row({std::string("success_probability"), opt.success_prob, opt.method});
    tab.add_row({std::string("expected_payoff"), o.b * opt.success_prob, opt.method});
    tab.add_row({std::string("budget"), opt.budget, opt.method});
    tab.add_row({std::string("unconstrained_expected_payoff"), unconstrained_expected_payoff(o.w0, o.b, p),
                 std::string("closed-form")});
    tab.add_note("constrained digital, benchmark " + bench.name() + ", copula " + copula.name());
    return tab;
}

// ---- reproduce --------------------------------------------------------------

struct Reproduced {
    Table table;
    bool ok;
};

Reproduced reproduce_asian(const Options& o) {
    const auto& p = o.market;
    Table tab({"quantity", "method", "value", "std_err", "reference", "within_tolerance"});
    bool ok = true;
    auto add = [&](const std::string& q, const PriceQuote& pq, double ref, double tol) {
        const bool hit = std::abs(pq.value - ref) <= tol;
        ok = ok && hit;
        tab.add_row({q, pq.method, pq.value, pq.std_err, ref, std::string(hit ? "yes" : "no")});
    };
    const auto put_cf = price_floating_asian_put(p);
    const auto twin_cf = price_cheapest_floating_twin(p);
    add("floating-asian-put", put_cf, kPublishedFloatingPut, kPublishedTol);
    add("cheapest-floating-twin", twin_cf, kPublishedCheapestTwin, kPublishedTol);
    const auto put_q = quadrature_floating_put(p);
    const auto twin_q = quadrature_cheapest_floating_twin(p);
    add("floating-asian-put", put_q, put_cf.value, 1e-6 * put_cf.value);
    add("cheapest-floating-twin", twin_q, twin_cf.value, 1e-6 * twin_cf.value);
    const std::vector<double> times{p.t_mat};
    const auto table = simulate_paths(o.sim, p, times, true);
    const auto put_mc = price_from_values(evaluate(floating_put_payoff(p), table), table, o.sim, p);
    const auto twin_mc = price_from_values(evaluate(cheapest_floating_twin_payoff(p), table), table, o.sim, p);
    add("floating-asian-put", {put_mc.value, "monte-carlo", put_mc.std_err, "floating-asian-put"}, put_cf.value,
        3.0 * put_mc.std_err);
    add("cheapest-floating-twin", {twin_mc.value, "monte-carlo", twin_mc.std_err, "cheapest-floating-twin"},
        twin_cf.value, 3.0 * twin_mc.std_err);
    tab.add_note("closed-form rows are checked against the published two-decimal values within " +
                 format_number(kPublishedTol) + "; quadrature rows within 1e-6 relative and MC rows within 3 std_err "
                 "of the closed form");
    return {std::move(tab), ok};
}

Reproduced reproduce_figure1(const Options& o) {
    const auto& p = o.market;
    const double t = horizon_t(o);
    const auto grid = admissible_rho_grid(t, p.t_mat, 41);
    std::vector<double> etas = o.eta_set ? std::vector<double>{o.eta} : std::vector<double>{1.0, 2.0};
    Table tab({"eta", "rho", "eu_constrained", "eu_unconstrained"});
    bool ok = true;
    for (double eta : etas) {
        const Table f = figure1(p, o.w0, eta, t, grid);
        int touches = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double rho = f.number(i, "rho"), con = f.number(i, "eu_constrained"),
                         unc = f.number(i, "eu_unconstrained");
            tab.add_row({eta, rho, con, unc});
            if (con > unc) ok = false;
            if (std::abs(con - unc) <= kTouchTol) ++touches;
        }
        ok = ok && touches == 1;
    }
    tab.add_note("benchmark S_t with t=" + format_number(t) + ", W0=" + format_number(o.w0) +
                 "; the curves touch only at rho = sqrt(t/T)");
    return {std::move(tab), ok};
}

Reproduced reproduce_figure2(const Options& o) {
    const auto& p = o.market;
    const double t = horizon_t(o);
    const auto grid = admissible_rho_grid(t, p.t_mat, 41);
    Table tab = figure2_curve(p, o.w0, o.b, t, grid);
    bool ok = true;
    int touches = 0;
    for (std::size_t i = 0; i < tab.size(); ++i) {
        const double con = tab.number(i, "expected_constrained"), unc = tab.number(i, "expected_unconstrained");
        if (con > unc) ok = false;
        if (std::abs(con - unc) <= kTouchTol) ++touches;
    }
    tab.add_note("benchmark S_t with t=" + format_number(t) + ", W0=" + format_number(o.w0) + ", b=" + format_number(o.b));
    return {std::move(tab), ok && touches == 1};
}

Reproduced reproduce_put_example(const Options& o) {
    const auto& p = o.market;
    const double k = p.s0;
    const double a = power_put_coefficient(p);
    const auto law = put_payoff_distribution(p, k);
    const auto imp = strict_improvement(law, black_scholes_put(p, k), p);
    const std::vector<double> times{p.t_mat};
    const auto table = simulate_paths(o.sim, p, times, false);
    const auto fx = evaluate(PayoffFn::terminal(p.t_mat, [=](double s) { return std::max(k - s, 0.0); }), table);
    const auto ff = evaluate(PayoffFn::terminal(p.t_mat, [=](double s) { return std::max(k - a / s, 0.0); }), table);
    const auto px = price_from_values(fx, table, o.sim, p);
    const auto pf = price_from_values(ff, table, o.sim, p);
    Table tab({"quantity", "method", "value", "std_err"});
    tab.add_row({std::string("put_price"), std::string("closed-form"), imp.input_price, 0.0});
    tab.add_row({std::string("power_put_price"), std::string("quadrature"), imp.cheapest_price, 0.0});
    tab.add_row({std::string("cash_at_T"), std::string("closed-form"), imp.cash, 0.0});
    tab.add_row({std::string("power_put_coefficient"), std::string("closed-form"), a, 0.0});
    tab.add_row({std::string("put_price"), std::string("monte-carlo"), px.value, px.std_err});
    tab.add_row({std::string("power_put_price"), std::string("monte-carlo"), pf.value, pf.std_err});
    tab.add_note("strike K=" + format_number(k) + "; the power put (K - a/S_T)^+ has the law of the put");
    const bool ok = px.value - pf.value > 3.0 * std::hypot(px.std_err, pf.std_err) &&
                    std::abs(pf.value - imp.cheapest_price) <= 3.0 * pf.std_err;
    return {std::move(tab), ok};
}

Reproduced reproduce_correlation(const Options& o) {
    const auto& p = o.market;
    std::vector<double> grid;
    for (int i = 1; i < 1000; ++i) grid.push_back(p.t_mat * i / 1000.0);
    const auto best = best_twin_by_correlation(average_given_sT(p), grid, p);
    Table tab({"t", "rho"});
    for (std::size_t i = 9; i < best.curve.size(); i += 10) tab.add_row({best.curve[i].t, best.curve[i].rho});
    const double want = 0.75 + std::sqrt(3.0) / 8.0;
    tab.add_note("t* = " + format_number(best.t_star) + ", rho_max = " + format_number(best.rho_star) +
                 " (reference 3/4 + sqrt(3)/8 = " + format_number(want) + ")");
    const bool ok = std::abs(best.t_star - p.t_mat / 2.0) < 1e-12 && std::abs(best.rho_star - want) <= kRhoMaxTol;
    return {std::move(tab), ok};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optpay: optimal payoffs under state-dependent constraints"};
    app.require_subcommand(1);
    Options o;
    std::size_t paths = o.sim.n_paths;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--mu", o.market.mu, "drift")->capture_default_str();
        sub->add_option("--r", o.market.r, "risk-free rate")->capture_default_str();
        sub->add_option("--sigma", o.market.sigma, "volatility")->capture_default_str();
        sub->add_option("--s0", o.market.s0, "initial price")->capture_default_str();
        sub->add_option("--T", o.market.t_mat, "horizon in years")->capture_default_str();
        sub->add_option("--paths", paths, "Monte Carlo paths")->capture_default_str();
        sub->add_option("--steps", o.sim.steps_per_year, "time steps per year")->capture_default_str();
        sub->add_option("--seed", seed, "random seed (default: $OPTPAY_SEED or built-in)");
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        sub->add_option("--w0", o.w0, "initial wealth")->capture_default_str();
    };

    std::string instrument;
    auto* price_cmd = app.add_subcommand("price", "price an instrument name[:k=v,...]");
    price_cmd->add_option("instrument", instrument, "instrument spec")->required();
    add_common(price_cmd);

    std::string target = "put:K=100";
    std::optional<double> at_price;
    auto* ce_cmd = app.add_subcommand("cost-efficient", "cost-efficient payoff for a target law");
    ce_cmd->add_option("--target", target, "put:K=, lognormal:m=,s=, geo-average, constant:c=, file:path=")
        ->capture_default_str();
    ce_cmd->add_option("--price", at_price, "also build the payoff with this price");
    add_common(ce_cmd);

    std::string joint = "average";
    auto* twin_cmd = app.add_subcommand("twin", "twins of a path-dependent payoff");
    twin_cmd->add_option("--joint", joint, "average, floating-put, floating-put-g")->capture_default_str();
    twin_cmd->add_option("--price", at_price, "twin with this price (floating-put-g)");
    add_common(twin_cmd);

    std::string bench = "intermediate:t=0.5", copula = "gaussian:rho=0.5";
    auto* eut_cmd = app.add_subcommand("eut", "CRRA optimum under a dependence constraint");
    eut_cmd->add_option("--eta", o.eta, "relative risk aversion")->capture_default_str();
    eut_cmd->add_option("--benchmark", bench, "terminal, intermediate:t=, average")->capture_default_str();
    eut_cmd->add_option("--copula", copula, "gaussian:rho=, upper, lower, independence")->capture_default_str();
    add_common(eut_cmd);

    std::string tp_bench, tp_copula = "gaussian:rho=0.5";
    auto* tp_cmd = app.add_subcommand("target-prob", "maximize P[X_T >= b]");
    tp_cmd->add_option("--b", o.b, "target level")->capture_default_str();
    tp_cmd->add_option("--benchmark", tp_bench, "omit for the unconstrained digital");
    tp_cmd->add_option("--copula", tp_copula, "copula with the benchmark")->capture_default_str();
    add_common(tp_cmd);

    std::string repro;
    auto* rep_cmd = app.add_subcommand("reproduce", "regenerate a published number or curve");
    rep_cmd->add_option("target", repro, "asian, figure1, figure2, put-example, correlation")
        ->required()
        ->check(CLI::IsMember({"asian", "figure1", "figure2", "put-example", "correlation"}));
    auto* eta_opt = rep_cmd->add_option("--eta", o.eta, "risk aversion for figure1 (default: both 1 and 2)");
    rep_cmd->add_option("--b", o.b, "target level for figure2")->capture_default_str();
    rep_cmd->add_option("--t", o.t, "benchmark time (default T/2)");
    add_common(rep_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        o.sim.n_paths = paths;
        o.sim.seed = seed != 0 ? seed : default_seed();
        o.eta_set = eta_opt->count() > 0;
        o.market.validate();
        o.sim.validate();

        auto* cmd = app.get_subcommands().front();
        const std::string name = cmd->get_name();
        Table table;
        bool ok = true;
        if (name == "price") {
            table = run_price(instrument, o);
        } else if (name == "cost-efficient") {
            table = run_cost_efficient(target, at_price, o);
        } else if (name == "twin") {
            table = run_twin(joint, at_price, o);
        } else if (name == "eut") {
            table = run_eut(bench, copula, o);
        } else if (name == "target-prob") {
            table = run_target_prob(tp_bench, tp_copula, o);
        } else {
            Reproduced r = repro == "asian"         ? reproduce_asian(o)
                           : repro == "figure1"     ? reproduce_figure1(o)
                           : repro == "figure2"     ? reproduce_figure2(o)
                           : repro == "put-example" ? reproduce_put_example(o)
                                                    : reproduce_correlation(o);
            table = std::move(r.table);
            ok = r.ok;
            table.add_note(std::string("checks: ") + (ok ? "all within tolerance" : "TOLERANCE MISS"));
        }
        Table out(table.columns());
        add_provenance(out, name + (name == "reproduce" ? " " + repro : ""), o);
        for (const auto& n : table.notes()) out.add_note(n);
        for (const auto& r : table.rows()) out.add_row(r);
        emit(out, o);
        if (!ok) std::cerr << "optpay: tolerance miss in reproduce " << repro << "\n";
        return ok ? kExitOk : kExitMiss;
    } catch (const SpecParseError& e) {
        std::cerr << "optpay: parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InfeasibleError& e) {
        std::cerr << "optpay: infeasible: " << e.what() << " (attainable range [" << e.lower() << ", " << e.upper()
                  << "])\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "optpay: error: " << e.what() << "\n";
        return kExitUsage;
    }
}

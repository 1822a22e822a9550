// harmonia: command-line front end for the library.
// Exit codes: 0 all checks passed, 1 a check failed, 2 bad input or unmet precondition.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "harmonia/bounds.hpp"
#include "harmonia/convexity.hpp"
#include "harmonia/errors.hpp"
#include "harmonia/harness.hpp"
#include "harmonia/identity.hpp"
#include "json.hpp"

using namespace harmonia;
using nlohmann::ordered_json;

namespace {

struct InstanceArgs {
    std::string f = "linear";
    double a = 1.0, b = 2.0, s = 1.0, m = 1.0, q = 1.0;
    double lambda = 0.5, mu = 0.5;

    void add_to(CLI::App* app, bool weights) {
        app->add_option("--f", f, "function spec, e.g. linear, power:c=1,p=2")->capture_default_str();
        app->add_option("--a", a, "left endpoint")->capture_default_str();
        app->add_option("--b", b, "right endpoint")->capture_default_str();
        app->add_option("--s", s, "s in (0, 1]")->capture_default_str();
        app->add_option("--m", m, "m in (0, 1]")->capture_default_str();
        app->add_option("--q", q, "q >= 1")->capture_default_str();
        if (weights) {
            app->add_option("--lambda", lambda, "lambda in [1/2, 1]")->capture_default_str();
            app->add_option("--mu", mu, "mu in [0, 1/2]")->capture_default_str();
        }
    }

    Instance build() const {
        Instance in;
        in.f = FunctionSpec::parse(f);
        in.a = a;
        in.b = b;
        in.s = s;
        in.m = m;
        in.q = q;
        in.lambda_ = lambda;
        in.mu_ = mu;
        in.validate();
        return in;
    }
};

ordered_json instance_json(const Instance& in) {
    return {{"f", in.f.to_string()}, {"a", in.a},           {"b", in.b},  {"s", in.s},
            {"m", in.m},             {"q", in.q},           {"lambda", in.lambda_}, {"mu", in.mu_}};
}

ordered_json term_json(const bounds::BoundTerm& t) {
    ordered_json j{{"index", t.index}, {"case", bounds::case_label(t.branch)}};
    j["closed_form"] = t.closed_form ? ordered_json(*t.closed_form) : ordered_json(nullptr);
    j["oracle"] = t.oracle;
    j["rel_diff"] = t.rel_diff ? ordered_json(*t.rel_diff) : ordered_json(nullptr);
    j["status"] = bounds::status_label(t.status);
    j["expected_erratum"] = bounds::expected_errata().count({t.index, t.branch}) == 1;
    return j;
}

void print(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Harmonically (s,m)-convex Hermite-Hadamard type inequalities: checks and sweeps"};
    app.require_subcommand(1);

    // check-convexity
    auto* conv = app.add_subcommand("check-convexity", "grid test of harmonic (s,m)-convexity of f on [lo, hi]");
    std::string conv_f = "linear";
    double conv_s = 1.0, conv_m = 1.0, conv_lo = 1.0, conv_hi = 2.0;
    std::size_t conv_grid = 41;
    bool conv_plain = false;
    conv->add_option("--f", conv_f, "function spec")->capture_default_str();
    conv->add_option("--s", conv_s, "s in (0, 1]")->capture_default_str();
    conv->add_option("--m", conv_m, "m in (0, 1]")->capture_default_str();
    conv->add_option("--lo", conv_lo, "left end of the grid")->capture_default_str();
    conv->add_option("--hi", conv_hi, "right end of the grid")->capture_default_str();
    conv->add_option("--grid", conv_grid, "nodes per x/y axis; t uses about half")->capture_default_str();
    conv->add_flag("--plain", conv_plain, "test ordinary (s,m)-convexity instead");

    // verify-identity
    auto* ident = app.add_subcommand("verify-identity", "check the integral identity for I_f");
    InstanceArgs id_args;
    id_args.add_to(ident, true);
    bool id_printed = false;
    double id_tol = identity::kDefaultTol;
    ident->add_flag("--printed", id_printed, "also evaluate the functional as originally printed");
    ident->add_option("--tol", id_tol, "absolute tolerance")->capture_default_str();

    // verify-bounds
    auto* bnd = app.add_subcommand("verify-bounds", "check |I_f| against a theorem's right-hand side");
    InstanceArgs bd_args;
    bd_args.add_to(bnd, true);
    int bd_theorem = 1;
    std::string bd_preset, bd_path = "oracle";
    bool bd_certified = false;
    bnd->add_option("--theorem", bd_theorem, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
    bnd->add_option("--preset", bd_preset, "trapezoid, midpoint or simpson (overrides --lambda/--mu)")
        ->check(CLI::IsMember({"trapezoid", "midpoint", "simpson"}));
    bnd->add_option("--path", bd_path, "oracle or closed")->check(CLI::IsMember({"oracle", "closed"}))->capture_default_str();
    bnd->add_flag("--assume-certified", bd_certified, "skip the convexity certification of |f'|^q");

    // crosscheck
    auto* cross = app.add_subcommand("crosscheck", "compare closed-form B_i against the quadrature oracle");
    InstanceArgs cx_args;
    cx_args.add_to(cross, true);
    std::string cx_index = "all";
    double cx_p = 0.0;
    cross->add_option("--index", cx_index, "1..12 or all")->capture_default_str();
    cross->add_option("--p", cx_p, "exponent for B7..B12 (default: conjugate of q, or 2 when q = 1)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "seeded randomized verification sweep");
    std::string sw_config, sw_out, sw_format = "json";
    std::optional<std::uint64_t> sw_seed;
    std::optional<unsigned> sw_jobs;
    std::optional<std::size_t> sw_samples;
    bool sw_printed = false;
    sweep->add_option("--config", sw_config, "JSON config file (defaults when omitted)");
    sweep->add_option("--out", sw_out, "write the report here instead of stdout");
    sweep->add_option("--format", sw_format, "json or csv")->capture_default_str();
    sweep->add_option("--seed", sw_seed, "override rng_seed");
    sweep->add_option("--jobs", sw_jobs, "worker threads (0: all cores)");
    sweep->add_option("--samples", sw_samples, "override samples");
    sweep->add_flag("--printed-regression", sw_printed, "include the printed-functional regression");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*conv) {
            const auto f = FunctionSpec::parse(conv_f);
            auto grid = convexity::GridSpec::over(conv_lo, conv_hi);
            grid.nx = grid.ny = conv_grid;
            grid.nt = conv_grid / 2 + 1;
            grid.validate();
            const auto r = conv_plain ? convexity::check_sm(f, conv_s, conv_m, grid)
                                      : convexity::check_harmonic_sm(f, conv_s, conv_m, grid);
            print({{"f", f.to_string()},
                   {"kind", conv_plain ? "sm" : "harmonic_sm"},
                   {"s", conv_s},
                   {"m", conv_m},
                   {"holds", r.holds},
                   {"worst_defect", r.worst_defect},
                   {"witness", {{"x", r.witness.x}, {"y", r.witness.y}, {"t", r.witness.t}}},
                   {"checked", r.checked}});
            return r.holds ? 0 : 1;
        }

        if (*ident) {
            const Instance in = id_args.build();
            const auto c = identity::verify_lemma1(in, {}, id_tol);
            ordered_json j{{"instance", instance_json(in)},
                           {"lhs", c.lhs},
                           {"rhs", c.rhs},
                           {"abs_diff", c.abs_diff},
                           {"tol", c.tol},
                           {"pass", c.pass}};
            if (id_printed) {
                const double printed = identity::paper_If_as_printed(in);
                j["printed"] = {{"value", printed},
                                {"abs_diff", std::abs(printed - c.rhs)},
                                {"pass", std::abs(printed - c.rhs) <= id_tol}};
            }
            print(j);
            return c.pass ? 0 : 1;
        }

        if (*bnd) {
            Instance in = bd_args.build();
            if (!bd_preset.empty()) {
                const auto c = bd_preset == "trapezoid" ? bounds::Corollary::trapezoid
                               : bd_preset == "midpoint" ? bounds::Corollary::midpoint
                                                         : bounds::Corollary::simpson;
                const auto [lambda, mu] = bounds::corollary_weights(c);
                in = in.with_weights(lambda, mu);
            }
            const auto v = bounds::check_theorem(in, bd_theorem, {}, bd_certified);
            const bool closed = bd_path == "closed";
            bool pass = v.pass;
            ordered_json j{{"instance", instance_json(in)}, {"theorem", bd_theorem}, {"path", bd_path},
                           {"lhs", v.lhs},                  {"rhs", v.rhs},            {"margin", v.margin}};
            if (closed) {
                j["closed_rhs"] = v.closed_rhs ? ordered_json(*v.closed_rhs) : ordered_json(nullptr);
                // with a suspected erratum there is no trustworthy closed-form bound
                pass = v.closed_rhs && *v.closed_rhs - v.lhs >= -bounds::kMarginTol;
            }
            j["pass"] = pass;
            j["terms"] = ordered_json::array();
            for (const auto& t : v.terms) j["terms"].push_back(term_json(t));
            print(j);
            return pass ? 0 : 1;
        }

        if (*cross) {
            const Instance in = cx_args.build();
            const double p = cx_p > 0.0 ? cx_p : in.q > 1.0 ? bounds::conjugate_exponent(in.q) : 2.0;
            int first = 1, last = 12;
            if (cx_index != "all") {
                std::size_t used = 0;
                int idx = 0;
                try {
                    idx = std::stoi(cx_index, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != cx_index.size() || idx < 1 || idx > 12)
                    throw ParameterError("--index must be 1..12 or all");
                first = last = idx;
            }
            ordered_json terms = ordered_json::array();
            bool ok = true;
            for (int i = first; i <= last; ++i) {
                const auto t = bounds::crosscheck_B(i, in, p, {});
                terms.push_back(term_json(t));
                ok = ok && (t.status != bounds::TermStatus::erratum_suspected ||
                            bounds::expected_errata().count({t.index, t.branch}) == 1);
            }
            print({{"instance", instance_json(in)}, {"p", p}, {"terms", terms}, {"all_expected", ok}});
            return ok ? 0 : 1;
        }

        if (*sweep) {
            harness::SweepConfig cfg =
                sw_config.empty() ? harness::SweepConfig::defaults() : harness::load_config(sw_config);
            if (sw_seed) cfg.rng_seed = *sw_seed;
            if (sw_jobs) cfg.jobs = *sw_jobs;
            if (sw_samples) cfg.samples = *sw_samples;
            if (sw_printed) cfg.printed_regression = true;
            cfg.validate();
            const auto format = harness::parse_format(sw_format);
            const auto report = harness::run_sweep(cfg);
            if (sw_out.empty())
                std::cout << (format == harness::Format::json ? harness::report_json(report) : harness::report_csv(report));
            else
                harness::emit_report(report, format, sw_out);
            const auto& s = report.summary;
            std::fprintf(stderr,
                         "instances %zu (discarded %zu), identity %zu/%zu, theorem1 %zu/%zu, theorem2 %zu/%zu, "
                         "unexpected errata %zu, errors %zu, %.2fs\n",
                         s.instances, s.discarded, s.identity_pass, s.identity_pass + s.identity_fail, s.bound_pass[0],
                         s.bound_checks[0], s.bound_pass[1], s.bound_checks[1], s.unexpected_errata, s.check_errors,
                         report.wall_seconds);
            return report.all_pass() ? 0 : 1;
        }
    } catch (const AccuracyError& e) {
        std::cerr << "harmonia: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        // domain, parameter, precondition, config and I/O problems
        std::cerr << "harmonia: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

#include "harmonia/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "harmonia/errors.hpp"
#include "json.hpp"

namespace harmonia::harness {

using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// config
// ---------------------------------------------------------------------------

[[noreturn]] void config_error(const std::string& what) { throw ConfigError("config: " + what); }

void check_range(const Range& r, const char* name, bool positive) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
        config_error(std::string(name) + " must be a finite [lo, hi] with lo <= hi");
    if (positive && !(r.lo > 0.0)) config_error(std::string(name) + " must be positive");
}

void check_values(const std::vector<double>& v, const char* name, double lo, double hi, bool open_lo) {
    if (v.empty()) config_error(std::string(name) + " must not be empty");
    for (double x : v) {
        const bool ok = (open_lo ? x > lo : x >= lo) && x <= hi && std::isfinite(x);
        if (!ok) config_error(std::string(name) + " has an out-of-range entry");
    }
}

Range range_from(const ordered_json& j, const char* name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        config_error(std::string(name) + " must be [lo, hi]");
    return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json range_to(const Range& r) { return ordered_json::array({r.lo, r.hi}); }

FamilyTemplate default_template(const std::string& name) {
    FamilyTemplate t;
    t.family = name;
    if (name == "linear" || name == "class_power") return t;
    if (name == "power") {
        t.c = {0.5, 2.0};
        t.p = {0.5, 3.0};
        return t;
    }
    if (name == "spower") {
        t.b = {0.5, 2.0};
        t.s = {0.1, 1.0};
        t.c = {0.0, 1.0};
        return t;
    }
    // anything else must be FunctionSpec text
    FunctionSpec::parse(name);
    t.family = "spec";
    t.spec = name;
    return t;
}

FamilyTemplate family_from(const ordered_json& j) {
    try {
        if (j.is_string()) return default_template(j.get<std::string>());
    } catch (const ParameterError& e) {
        config_error(std::string("families: ") + e.what());
    }
    if (!j.is_object()) config_error("families entries must be strings or objects");
    if (j.contains("spec")) {
        if (!j["spec"].is_string()) config_error("families: spec must be a string");
        FamilyTemplate t;
        t.family = "spec";
        t.spec = j["spec"].get<std::string>();
        try {
            FunctionSpec::parse(t.spec);
        } catch (const ParameterError& e) {
            config_error(std::string("families: ") + e.what());
        }
        return t;
    }
    if (!j.contains("family") || !j["family"].is_string()) config_error("families: object needs \"family\" or \"spec\"");
    const std::string name = j["family"].get<std::string>();
    if (name != "linear" && name != "power" && name != "spower" && name != "class_power")
        config_error("families: unknown family '" + name + "'");
    FamilyTemplate t = default_template(name);
    for (const auto& [key, value] : j.items()) {
        if (key == "family") continue;
        if (key == "c") t.c = range_from(value, "c");
        else if (key == "p" && name == "power") t.p = range_from(value, "p");
        else if (key == "b" && name == "spower") t.b = range_from(value, "b");
        else if (key == "s" && name == "spower") t.s = range_from(value, "s");
        else config_error("families: unexpected key '" + key + "' for " + name);
    }
    return t;
}

ordered_json family_to(const FamilyTemplate& t) {
    if (t.family == "spec") return ordered_json{{"spec", t.spec}};
    ordered_json j{{"family", t.family}};
    if (t.family == "power") {
        j["c"] = range_to(t.c);
        j["p"] = range_to(t.p);
    } else if (t.family == "spower") {
        j["b"] = range_to(t.b);
        j["s"] = range_to(t.s);
        j["c"] = range_to(t.c);
    }
    return j;
}

template <class T>
T number(const ordered_json& j, const char* name) {
    if (!j.is_number()) config_error(std::string(name) + " must be a number");
    if constexpr (std::is_integral_v<T>) {
        if (!j.is_number_integer() || j.get<long long>() < 0) config_error(std::string(name) + " must be a nonnegative integer");
        return static_cast<T>(j.get<unsigned long long>());
    } else {
        return j.get<T>();
    }
}

std::vector<double> values_from(const ordered_json& j, const char* name) {
    if (!j.is_array()) config_error(std::string(name) + " must be an array");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(number<double>(v, name));
    return out;
}

// ---------------------------------------------------------------------------
// generation
// ---------------------------------------------------------------------------

// Explicit mapping from the engine's bits, so draws are identical across
// standard libraries (std::uniform_real_distribution is not specified bit-exactly).
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double in(const Range& r) { return r.lo + (r.hi - r.lo) * unit(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

private:
    std::mt19937_64 rng_;
};

// 0.2 / 0.2 / 0.6 between the two boundary atoms and the interior, so every
// piecewise branch of B2, B3, B5, B6 is exercised.
double draw_weight(Draw& d, double lo, double hi) {
    const double u = d.unit();
    const double v = d.unit();
    if (u < 0.2) return lo;
    if (u < 0.4) return hi;
    return lo + (hi - lo) * v;
}

FunctionSpec draw_function(Draw& d, const FamilyTemplate& t, double s) {
    // Always consume the same number of draws so one family's parameters do not
    // shift another's.
    const double u1 = d.unit(), u2 = d.unit(), u3 = d.unit();
    auto at = [](const Range& r, double u) { return r.lo + (r.hi - r.lo) * u; };
    if (t.family == "linear") return FunctionSpec::linear();
    if (t.family == "power") return FunctionSpec::power(at(t.c, u1), at(t.p, u2));
    if (t.family == "spower") return FunctionSpec::s_power(at(t.b, u1), at(t.s, u2), at(t.c, u3));
    if (t.family == "class_power") return FunctionSpec::power(1.0 / (s + 1.0), s + 1.0);
    return FunctionSpec::parse(t.spec);
}

// ---------------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------------

const bounds::Corollary kCorollaries[] = {bounds::Corollary::trapezoid, bounds::Corollary::midpoint,
                                           bounds::Corollary::simpson};
constexpr double kConsistencyTol = 1e-12;

double rel_diff(double x, double y) {
    const double scale = std::max(std::abs(x), std::abs(y));
    return scale > 0.0 ? std::abs(x - y) / scale : 0.0;
}

CheckRow failed_row(std::string check, const Instance& in, const std::exception& e) {
    CheckRow r;
    r.check = std::move(check);
    r.lambda_ = in.lambda_;
    r.mu_ = in.mu_;
    r.lhs = r.rhs = r.margin = std::numeric_limits<double>::quiet_NaN();
    r.error = dynamic_cast<const AccuracyError*>(&e) ? std::string("accuracy: ") + e.what() : e.what();
    return r;
}

CheckRow term_row(const bounds::BoundTerm& t, const Instance& in, double tol) {
    CheckRow r;
    r.check = "B" + std::to_string(t.index);
    r.lambda_ = in.lambda_;
    r.mu_ = in.mu_;
    r.lhs = t.closed_form.value_or(std::numeric_limits<double>::quiet_NaN());
    r.rhs = t.oracle;
    r.margin = t.rel_diff ? tol - *t.rel_diff : 0.0;
    r.pass = t.status != bounds::TermStatus::erratum_suspected ||
             bounds::expected_errata().count({t.index, t.branch}) == 1;
    return r;
}

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

bool is_theorem_row(const std::string& check, int theorem) {
    const std::string prefix = "theorem" + std::to_string(theorem);
    return check.rfind(prefix, 0) == 0;
}

void note_worst(Worst& w, double margin, std::size_t id, const std::string& check) {
    if (std::isnan(margin)) return;
    if (!w.set || margin < w.margin) w = {margin, id, check, true};
}

ordered_json worst_to(const Worst& w) {
    if (!w.set) return nullptr;
    return ordered_json{{"margin", w.margin}, {"instance_id", w.instance_id}, {"check", w.check}};
}

}  // namespace

// ---------------------------------------------------------------------------

SweepConfig SweepConfig::defaults() {
    SweepConfig cfg;
    for (const char* name : {"linear", "power", "spower", "class_power"}) cfg.families.push_back(default_template(name));
    return cfg;
}

void SweepConfig::validate() const {
    check_range(a_range, "a_range", true);
    check_range(b_minus_a_range, "b_minus_a_range", true);
    check_values(s_values, "s_values", 0.0, 1.0, true);
    check_values(m_values, "m_values", 0.0, 1.0, true);
    check_values(q_values, "q_values", 1.0, std::numeric_limits<double>::max(), false);
    if (weights == WeightMode::fixed && !(mu_ >= 0.0 && mu_ <= 0.5 && lambda_ >= 0.5 && lambda_ <= 1.0))
        config_error("fixed weights need 0 <= mu <= 1/2 <= lambda <= 1");
    if (families.empty()) config_error("families must not be empty");
    if (samples < 1) config_error("samples must be >= 1");
    if (!(tolerances.identity_tol > 0.0) || !(tolerances.crosscheck_tol > 0.0) || !(tolerances.margin_tol >= 0.0))
        config_error("tolerances must be positive");
    try {
        quad.validate();
    } catch (const ParameterError& e) {
        config_error(e.what());
    }
}

SweepConfig parse_config(std::string_view json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        config_error(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) config_error("top level must be an object");

    SweepConfig cfg = SweepConfig::defaults();
    for (const auto& [key, v] : j.items()) {
        if (key == "a_range") cfg.a_range = range_from(v, "a_range");
        else if (key == "b_minus_a_range") cfg.b_minus_a_range = range_from(v, "b_minus_a_range");
        else if (key == "s_values") cfg.s_values = values_from(v, "s_values");
        else if (key == "m_values") cfg.m_values = values_from(v, "m_values");
        else if (key == "q_values") cfg.q_values = values_from(v, "q_values");
        else if (key == "weights") {
            if (v == "random") cfg.weights = WeightMode::random;
            else if (v == "fixed") cfg.weights = WeightMode::fixed;
            else config_error("weights must be \"random\" or \"fixed\"");
        } else if (key == "lambda") cfg.lambda_ = number<double>(v, "lambda");
        else if (key == "mu") cfg.mu_ = number<double>(v, "mu");
        else if (key == "families") {
            if (!v.is_array()) config_error("families must be an array");
            cfg.families.clear();
            for (const auto& f : v) cfg.families.push_back(family_from(f));
        } else if (key == "samples") cfg.samples = number<std::size_t>(v, "samples");
        else if (key == "rng_seed") cfg.rng_seed = number<std::uint64_t>(v, "rng_seed");
        else if (key == "tolerances") {
            if (!v.is_object()) config_error("tolerances must be an object");
            for (const auto& [tk, tv] : v.items()) {
                if (tk == "identity_tol") cfg.tolerances.identity_tol = number<double>(tv, "identity_tol");
                else if (tk == "crosscheck_tol") cfg.tolerances.crosscheck_tol = number<double>(tv, "crosscheck_tol");
                else if (tk == "margin_tol") cfg.tolerances.margin_tol = number<double>(tv, "margin_tol");
                else config_error("unknown tolerance '" + tk + "'");
            }
        } else if (key == "quad") {
            if (!v.is_object()) config_error("quad must be an object");
            for (const auto& [qk, qv] : v.items()) {
                if (qk == "abs_tol") cfg.quad.abs_tol = number<double>(qv, "abs_tol");
                else if (qk == "rel_tol") cfg.quad.rel_tol = number<double>(qv, "rel_tol");
                else if (qk == "max_subdivisions") cfg.quad.max_subdivisions = number<std::size_t>(qv, "max_subdivisions");
                else config_error("unknown quad setting '" + qk + "'");
            }
        } else if (key == "jobs") cfg.jobs = number<unsigned>(v, "jobs");
        else if (key == "printed_regression") {
            if (!v.is_boolean()) config_error("printed_regression must be true or false");
            cfg.printed_regression = v.get<bool>();
        } else config_error("unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path, path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const SweepConfig& cfg) {
    ordered_json j;
    j["a_range"] = range_to(cfg.a_range);
    j["b_minus_a_range"] = range_to(cfg.b_minus_a_range);
    j["s_values"] = cfg.s_values;
    j["m_values"] = cfg.m_values;
    j["q_values"] = cfg.q_values;
    j["weights"] = cfg.weights == WeightMode::random ? "random" : "fixed";
    j["lambda"] = cfg.lambda_;
    j["mu"] = cfg.mu_;
    j["families"] = ordered_json::array();
    for (const auto& f : cfg.families) j["families"].push_back(family_to(f));
    j["samples"] = cfg.samples;
    j["rng_seed"] = cfg.rng_seed;
    j["tolerances"] = {{"identity_tol", cfg.tolerances.identity_tol},
                       {"crosscheck_tol", cfg.tolerances.crosscheck_tol},
                       {"margin_tol", cfg.tolerances.margin_tol}};
    j["quad"] = {{"abs_tol", cfg.quad.abs_tol}, {"rel_tol", cfg.quad.rel_tol}, {"max_subdivisions", cfg.quad.max_subdivisions}};
    j["jobs"] = cfg.jobs;
    j["printed_regression"] = cfg.printed_regression;
    return j.dump(2);
}

Generation generate_instances(const SweepConfig& cfg) {
    cfg.validate();
    Draw d(cfg.rng_seed);
    Generation out;
    const std::size_t max_attempts = cfg.samples * 50;
    while (out.instances.size() < cfg.samples && out.attempts < max_attempts) {
        ++out.attempts;
        const FamilyTemplate& fam = cfg.families[d.index(cfg.families.size())];
        Instance in;
        in.a = d.in(cfg.a_range);
        in.b = in.a + d.in(cfg.b_minus_a_range);
        in.s = cfg.s_values[d.index(cfg.s_values.size())];
        in.m = cfg.m_values[d.index(cfg.m_values.size())];
        in.q = cfg.q_values[d.index(cfg.q_values.size())];
        const double mu = draw_weight(d, 0.0, 0.5);
        const double lambda = draw_weight(d, 0.5, 1.0);
        if (cfg.weights == WeightMode::random) {
            in.mu_ = mu;
            in.lambda_ = lambda;
        } else {
            in.mu_ = cfg.mu_;
            in.lambda_ = cfg.lambda_;
        }
        in.f = draw_function(d, fam, in.s);

        double defect = 0.0;
        try {
            const auto report = bounds::certify(in);
            defect = report.worst_defect;
            if (!report.holds) {
                ++out.discarded;
                continue;
            }
        } catch (const Error&) {
            // f or f' undefined somewhere on [a, b/m]
            ++out.discarded;
            continue;
        }
        out.instances.push_back({out.instances.size(), fam.family, in, defect});
    }
    if (out.instances.empty())
        throw ConfigError("config: no candidate could be certified in " + std::to_string(out.attempts) + " attempts");
    return out;
}

InstanceRecord verify_instance(const GeneratedInstance& g, const SweepConfig& cfg, std::vector<ErratumRow>& errata) {
    InstanceRecord rec;
    rec.source = g;
    const Instance& in = g.inst;
    const Tolerances& tol = cfg.tolerances;

    try {
        const auto c = identity::verify_lemma1(in, cfg.quad, tol.identity_tol);
        rec.checks.push_back({"lemma1", in.lambda_, in.mu_, c.lhs, c.rhs, tol.identity_tol - c.abs_diff, c.pass, {}});
    } catch (const Error& e) {
        rec.checks.push_back(failed_row("lemma1", in, e));
    }

    std::vector<bounds::BoundTerm> terms;
    const int last = in.q > 1.0 ? 2 : 1;
    for (int theorem = 1; theorem <= last; ++theorem) {
        const std::string name = "theorem" + std::to_string(theorem);
        try {
            const auto v = bounds::check_theorem(in, theorem, cfg.quad, true, tol.margin_tol, tol.crosscheck_tol);
            rec.checks.push_back({name, in.lambda_, in.mu_, v.lhs, v.rhs, v.margin, v.pass, {}});
            terms.insert(terms.end(), v.terms.begin(), v.terms.end());
        } catch (const Error& e) {
            rec.checks.push_back(failed_row(name, in, e));
        }
        for (bounds::Corollary c : kCorollaries) {
            const auto [lambda, mu] = bounds::corollary_weights(c);
            const Instance at = in.with_weights(lambda, mu);
            const std::string label = name + ":" + bounds::corollary_label(c);
            try {
                const auto v = bounds::check_theorem(at, theorem, cfg.quad, true, tol.margin_tol, tol.crosscheck_tol);
                rec.checks.push_back({label, lambda, mu, v.lhs, v.rhs, v.margin, v.pass, {}});
                const auto [fa, fb] = bounds::derivative_moments(at);
                const double spec = bounds::corollary_rhs(c, theorem, at, fa, fb, bounds::Path::oracle, cfg.quad);
                const double r = rel_diff(spec, v.rhs);
                rec.checks.push_back({"consistency:" + label, lambda, mu, spec, v.rhs, kConsistencyTol - r,
                                      r <= kConsistencyTol, {}});
            } catch (const Error& e) {
                rec.checks.push_back(failed_row(label, at, e));
            }
        }
    }

    // The theorem verdicts already cross-checked B1..B6 (and B7..B12 when q > 1).
    if (last == 1) {
        for (int index = 7; index <= 12; ++index) {
            try {
                terms.push_back(bounds::crosscheck_B(index, in, 2.0, cfg.quad, tol.crosscheck_tol));
            } catch (const Error& e) {
                rec.checks.push_back(failed_row("B" + std::to_string(index), in, e));
            }
        }
    }
    std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.index < y.index; });
    for (const auto& t : terms) {
        rec.checks.push_back(term_row(t, in, tol.crosscheck_tol));
        if (t.status == bounds::TermStatus::erratum_suspected) {
            const bool expected = bounds::expected_errata().count({t.index, t.branch}) == 1;
            errata.push_back({g.id, t.index, t.branch, *t.closed_form, t.oracle, *t.rel_diff, expected});
        }
    }
    return rec;
}

RunReport run_sweep(const SweepConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.config = cfg;
    report.generated_at = timestamp_utc();

    Generation gen = generate_instances(cfg);
    const std::size_t n = gen.instances.size();

    std::vector<InstanceRecord> records(n);
    std::vector<std::vector<ErratumRow>> errata(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto work = [&] {
        try {
            for (std::size_t i = next++; i < n && !failed; i = next++)
                records[i] = verify_instance(gen.instances[i], cfg, errata[i]);
        } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
        }
    };
    unsigned jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    Summary& s = report.summary;
    s.instances = n;
    s.discarded = gen.discarded;
    std::size_t quadrature_failures = 0;
    for (std::size_t i = 0; i < n; ++i) {
        bool accuracy_hit = false;
        for (const CheckRow& row : records[i].checks) {
            if (!row.error.empty()) {
                ++s.check_errors;
                accuracy_hit = accuracy_hit || row.error.rfind("accuracy: ", 0) == 0;
            }
            if (row.check == "lemma1") {
                (row.pass ? s.identity_pass : s.identity_fail)++;
                note_worst(report.worst_identity, row.margin, i, row.check);
            } else if (row.check.rfind("consistency:", 0) == 0) {
                (row.pass ? s.consistency_pass : s.consistency_fail)++;
            } else if (row.check[0] == 'B') {
                if (std::isnan(row.lhs) && row.error.empty()) ++s.crosscheck_oracle_only;
                else if (row.margin >= 0.0) ++s.crosscheck_ok;
                else if (row.error.empty()) {
                    ++s.crosscheck_erratum;
                    if (!row.pass) ++s.unexpected_errata;
                }
            } else {
                for (int t = 1; t <= 2; ++t) {
                    if (!is_theorem_row(row.check, t)) continue;
                    ++s.bound_checks[t - 1];
                    if (row.pass) ++s.bound_pass[t - 1];
                    note_worst(report.worst_bound[t - 1], row.margin, i, row.check);
                }
            }
        }
        if (accuracy_hit) ++quadrature_failures;
        for (const ErratumRow& e : errata[i]) {
            report.errata.push_back(e);
            report.flagged.insert({e.index, e.branch});
        }
    }
    if (quadrature_failures * 2 > n)
        throw AccuracyError("systemic quadrature failure: " + std::to_string(quadrature_failures) + " of " +
                                std::to_string(n) + " instances did not converge",
                            static_cast<double>(quadrature_failures), static_cast<double>(n));
    report.records = std::move(records);

    if (cfg.printed_regression) {
        Instance reg;  // f(x) = x on [1, 2], lambda = mu = 1/2
        PrintedRegression p;
        p.printed = identity::paper_If_as_printed(reg, cfg.quad);
        p.oracle = identity::lemma1_rhs(reg, cfg.quad);
        p.abs_diff = std::abs(p.printed - p.oracle);
        p.failed_as_expected = p.abs_diff > cfg.tolerances.identity_tol;
        if (p.failed_as_expected) s.expected_identity_failures = 1;
        report.printed = p;
    }

    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

bool RunReport::all_pass() const {
    const Summary& s = summary;
    return s.identity_fail == 0 && s.bound_pass[0] == s.bound_checks[0] && s.bound_pass[1] == s.bound_checks[1] &&
           s.consistency_fail == 0 && s.unexpected_errata == 0 && s.check_errors == 0 &&
           (!printed || printed->failed_as_expected);
}

Format parse_format(std::string_view name) {
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    throw ConfigError("format must be json or csv, got '" + std::string(name) + "'");
}

namespace {

ordered_json summary_to(const Summary& s) {
    return ordered_json{
        {"instances", s.instances},
        {"discarded", s.discarded},
        {"identity_pass", s.identity_pass},
        {"identity_fail", s.identity_fail},
        {"theorem1_checks", s.bound_checks[0]},
        {"theorem1_pass", s.bound_pass[0]},
        {"theorem2_checks", s.bound_checks[1]},
        {"theorem2_pass", s.bound_pass[1]},
        {"consistency_pass", s.consistency_pass},
        {"consistency_fail", s.consistency_fail},
        {"crosscheck_ok", s.crosscheck_ok},
        {"crosscheck_erratum", s.crosscheck_erratum},
        {"crosscheck_oracle_only", s.crosscheck_oracle_only},
        {"unexpected_errata", s.unexpected_errata},
        {"check_errors", s.check_errors},
        {"expected_identity_failures", s.expected_identity_failures},
    };
}

}  // namespace

std::string report_json(const RunReport& r) {
    ordered_json j;
    j["schema"] = kSchema;
    j["metadata"] = {{"generated_at", r.generated_at}, {"wall_seconds", r.wall_seconds}};
    j["config"] = ordered_json::parse(config_to_json(r.config));
    j["summary"] = summary_to(r.summary);
    j["all_pass"] = r.all_pass();
    j["worst_margins"] = {{"identity", worst_to(r.worst_identity)},
                          {"theorem1", worst_to(r.worst_bound[0])},
                          {"theorem2", worst_to(r.worst_bound[1])}};
    j["flagged"] = ordered_json::array();
    for (const auto& [index, branch] : r.flagged)
        j["flagged"].push_back({{"index", index},
                                {"case", bounds::case_label(branch)},
                                {"expected", bounds::expected_errata().count({index, branch}) == 1}});
    j["errata"] = ordered_json::array();
    for (const ErratumRow& e : r.errata)
        j["errata"].push_back({{"instance_id", e.instance_id},
                               {"index", e.index},
                               {"case", bounds::case_label(e.branch)},
                               {"closed_form", e.closed_form},
                               {"oracle", e.oracle},
                               {"rel_diff", e.rel_diff},
                               {"expected", e.expected}});
    if (r.printed)
        j["printed_regression"] = {{"printed", r.printed->printed},
                                   {"oracle", r.printed->oracle},
                                   {"abs_diff", r.printed->abs_diff},
                                   {"failed_as_expected", r.printed->failed_as_expected}};
    else
        j["printed_regression"] = nullptr;
    j["instances"] = ordered_json::array();
    for (const InstanceRecord& rec : r.records) {
        const Instance& in = rec.source.inst;
        ordered_json checks = ordered_json::array();
        for (const CheckRow& c : rec.checks) {
            ordered_json row{{"check", c.check}, {"lambda", c.lambda_}, {"mu", c.mu_}, {"lhs", c.lhs},
                             {"rhs", c.rhs},     {"margin", c.margin},  {"pass", c.pass}};
            if (!c.error.empty()) row["error"] = c.error;
            checks.push_back(std::move(row));
        }
        j["instances"].push_back({{"instance_id", rec.source.id},
                                  {"family", rec.source.family},
                                  {"f", in.f.to_string()},
                                  {"a", in.a},
                                  {"b", in.b},
                                  {"s", in.s},
                                  {"m", in.m},
                                  {"q", in.q},
                                  {"lambda", in.lambda_},
                                  {"mu", in.mu_},
                                  {"certification_defect", rec.source.certification_defect},
                                  {"checks", std::move(checks)}});
    }
    return j.dump(2) + "\n";
}

std::string report_csv(const RunReport& r) {
    std::string out = "instance_id,family,a,b,s,m,q,lambda,mu,check,lhs,rhs,margin,pass\n";
    auto row = [&](const std::string& id, const std::string& family, const Instance& in, const CheckRow& c) {
        out += id + "," + family + "," + num17(in.a) + "," + num17(in.b) + "," + num17(in.s) + "," + num17(in.m) + "," +
               num17(in.q) + "," + num17(c.lambda_) + "," + num17(c.mu_) + "," + c.check + "," + num17(c.lhs) + "," +
               num17(c.rhs) + "," + num17(c.margin) + "," + (c.pass ? "true" : "false") + "\n";
    };
    for (const InstanceRecord& rec : r.records)
        for (const CheckRow& c : rec.checks) row(std::to_string(rec.source.id), rec.source.family, rec.source.inst, c);
    if (r.printed) {
        const Instance reg;
        const CheckRow c{"printed_If_regression", reg.lambda_, reg.mu_, r.printed->printed, r.printed->oracle,
                         0.0 - r.printed->abs_diff, !r.printed->failed_as_expected, {}};
        row("regression", "linear", reg, c);
    }
    return out;
}

void emit_report(const RunReport& report, Format format, const std::string& path) {
    const std::string text = format == Format::json ? report_json(report) : report_csv(report);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing", path);
    out << text;
    out.flush();
    if (!out) throw IoError("write to " + path + " failed", path);
}

Summary parse_summary(std::string_view json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"] != kSchema) throw ConfigError("report schema is not harmonia/v1");
    try {
        const auto& js = j.at("summary");
        Summary s;
        s.instances = js.at("instances").get<std::size_t>();
        s.discarded = js.at("discarded").get<std::size_t>();
        s.identity_pass = js.at("identity_pass").get<std::size_t>();
        s.identity_fail = js.at("identity_fail").get<std::size_t>();
        s.bound_checks[0] = js.at("theorem1_checks").get<std::size_t>();
        s.bound_pass[0] = js.at("theorem1_pass").get<std::size_t>();
        s.bound_checks[1] = js.at("theorem2_checks").get<std::size_t>();
        s.bound_pass[1] = js.at("theorem2_pass").get<std::size_t>();
        s.consistency_pass = js.at("consistency_pass").get<std::size_t>();
        s.consistency_fail = js.at("consistency_fail").get<std::size_t>();
        s.crosscheck_ok = js.at("crosscheck_ok").get<std::size_t>();
        s.crosscheck_erratum = js.at("crosscheck_erratum").get<std::size_t>();
        s.crosscheck_oracle_only = js.at("crosscheck_oracle_only").get<std::size_t>();
        s.unexpected_errata = js.at("unexpected_errata").get<std::size_t>();
        s.check_errors = js.at("check_errors").get<std::size_t>();
        s.expected_identity_failures = js.at("expected_identity_failures").get<std::size_t>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("report summary incomplete: ") + e.what());
    }
}

}  // namespace harmonia::harness

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "harmonia/bounds.hpp"
#include "harmonia/identity.hpp"
#include "harmonia/quadrature.hpp"

namespace harmonia::harness {

inline constexpr const char* kSchema = "harmonia/v1";

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// How the generator draws f. Exactly one of the templates below.
///   {"family": "linear"}
///   {"family": "power", "c": [lo, hi], "p": [lo, hi]}        c x^p
///   {"family": "spower", "b": [lo, hi], "s": [lo, hi], "c": [lo, hi]}
///   {"family": "class_power"}                                x^{s+1}/(s+1), s the instance's s
///   {"spec": "<FunctionSpec text>"}                          fixed function
/// A bare string in the config is shorthand for the first, a named default
/// template ("power", "spower", "class_power") or a spec text.
struct FamilyTemplate {
    std::string family;  ///< "linear" | "power" | "spower" | "class_power" | "spec"
    Range c{1.0, 1.0};
    Range p{1.0, 1.0};
    Range b{1.0, 1.0};
    Range s{1.0, 1.0};
    std::string spec;
};

struct Tolerances {
    double identity_tol = identity::kDefaultTol;
    double crosscheck_tol = bounds::kCrosscheckTol;
    double margin_tol = bounds::kMarginTol;
};

enum class WeightMode { random, fixed };

struct SweepConfig {
    Range a_range{0.5, 2.0};
    Range b_minus_a_range{0.1, 2.0};
    std::vector<double> s_values{0.25, 0.5, 0.75, 1.0};
    std::vector<double> m_values{0.25, 0.5, 0.75, 1.0};
    std::vector<double> q_values{1.0, 1.5, 2.0, 3.0};
    WeightMode weights = WeightMode::random;
    double lambda_ = 0.5;  ///< used when weights == fixed
    double mu_ = 0.5;
    std::vector<FamilyTemplate> families;
    std::size_t samples = 200;  ///< certified instances to produce
    std::uint64_t rng_seed = 42;
    Tolerances tolerances;
    quad::QuadSettings quad;
    unsigned jobs = 0;  ///< 0: hardware concurrency
    bool printed_regression = false;

    /// The documented default sweep with the linear, power, spower and class_power families.
    static SweepConfig defaults();
    /// Throws ConfigError.
    void validate() const;
};

/// Parses a JSON config whose keys mirror the SweepConfig field names
/// (lambda/mu without the trailing underscore). Missing keys keep their
/// defaults; unknown keys are an error. Throws ConfigError.
SweepConfig parse_config(std::string_view json_text);
/// Reads and parses a config file. Throws IoError or ConfigError.
SweepConfig load_config(const std::string& path);
std::string config_to_json(const SweepConfig& cfg);

struct GeneratedInstance {
    std::size_t id = 0;
    std::string family;
    Instance inst;
    double certification_defect = 0.0;
};

struct Generation {
    std::vector<GeneratedInstance> instances;
    std::size_t attempts = 0;
    std::size_t discarded = 0;
};

/// Draws candidates from the seeded generator and keeps those whose |f'|^q is
/// certified harmonically (s,m)-convex on [a, b/m]; stops at cfg.samples
/// certified instances or after 50 * samples attempts.
/// Throws ConfigError when nothing could be certified.
Generation generate_instances(const SweepConfig& cfg);

struct CheckRow {
    std::string check;
    double lambda_ = 0.0;
    double mu_ = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool pass = false;
    std::string error;  ///< set when the check threw instead of producing a verdict
};

struct ErratumRow {
    std::size_t instance_id = 0;
    int index = 0;
    bounds::Case branch = bounds::Case::single;
    double closed_form = 0.0;
    double oracle = 0.0;
    double rel_diff = 0.0;
    bool expected = false;
};

struct InstanceRecord {
    GeneratedInstance source;
    std::vector<CheckRow> checks;
};

struct Worst {
    double margin = 0.0;
    std::size_t instance_id = 0;
    std::string check;
    bool set = false;
};

struct Summary {
    std::size_t instances = 0;
    std::size_t discarded = 0;
    std::size_t identity_pass = 0;
    std::size_t identity_fail = 0;
    std::size_t bound_checks[2] = {0, 0};  ///< theorem 1, theorem 2
    std::size_t bound_pass[2] = {0, 0};
    std::size_t consistency_pass = 0;
    std::size_t consistency_fail = 0;
    std::size_t crosscheck_ok = 0;
    std::size_t crosscheck_erratum = 0;
    std::size_t crosscheck_oracle_only = 0;
    std::size_t unexpected_errata = 0;
    std::size_t check_errors = 0;
    std::size_t expected_identity_failures = 0;  ///< the printed-I_f regression, when enabled

    bool operator==(const Summary&) const = default;
};

struct PrintedRegression {
    double printed = 0.0;
    double oracle = 0.0;
    double abs_diff = 0.0;
    bool failed_as_expected = false;
};

struct RunReport {
    SweepConfig config;
    Summary summary;
    std::vector<InstanceRecord> records;
    std::vector<ErratumRow> errata;
    std::set<std::pair<int, bounds::Case>> flagged;
    Worst worst_identity;
    Worst worst_bound[2];
    std::optional<PrintedRegression> printed;
    double wall_seconds = 0.0;
    std::string generated_at;

    /// Every verdict passed, nothing errored and all errata are in the locked set.
    bool all_pass() const;
};

/// Generates, then verifies every instance on a worker pool of cfg.jobs
/// threads; records are merged by instance id so the result does not depend
/// on the thread count. Individual check failures are recorded, not thrown.
/// More than half the instances failing on quadrature aborts with AccuracyError.
RunReport run_sweep(const SweepConfig& cfg);

/// The checks run_sweep performs on one certified instance.
InstanceRecord verify_instance(const GeneratedInstance& g, const SweepConfig& cfg, std::vector<ErratumRow>& errata);

enum class Format { json, csv };
/// Throws ConfigError for anything but "json" / "csv".
Format parse_format(std::string_view name);

std::string report_json(const RunReport& report);
std::string report_csv(const RunReport& report);
/// Writes report_json or report_csv to `path`. Throws IoError.
void emit_report(const RunReport& report, Format format, const std::string& path);

/// Reads the summary counters back from report_json output. Throws ConfigError.
Summary parse_summary(std::string_view json_text);

}  // namespace harmonia::harness

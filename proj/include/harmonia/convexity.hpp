#pragma once

#include <cstddef>
#include <span>
#include <variant>

#include "harmonia/function_spec.hpp"

namespace harmonia::convexity {

/// Grid verdict threshold. Defects are measured relative to
/// max(1, |t^s f(x)| + |m (1-t)^s f(y)|), so for values of order one this is
/// an absolute tolerance.
inline constexpr double kDefectTol = 1e-9;

/// Tolerance on adjacent differences when detecting monotonicity.
inline constexpr double kMonotoneTol = 1e-12;
inline constexpr std::size_t kMonotoneSamples = 401;

struct GridSpec {
    std::size_t nx = 41;
    std::size_t ny = 41;
    std::size_t nt = 21;
    double lo = 1.0;
    double hi = 2.0;

    static GridSpec over(double lo, double hi) { return GridSpec{41, 41, 21, lo, hi}; }
    /// Doubles the resolution on every axis while keeping the old nodes.
    GridSpec refined() const { return GridSpec{2 * nx - 1, 2 * ny - 1, 2 * nt - 1, lo, hi}; }
    void validate() const;
};

struct Witness {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
};

struct ConvexityReport {
    bool holds = true;
    double worst_defect = 0.0;  ///< normalised, see kDefectTol
    Witness witness;
    std::size_t checked = 0;
};

/// The point m x y / (m t y + (1 - t) x), i.e. the weighted harmonic mean of x and m y.
double harmonic_point(double x, double y, double t, double m);

/// f(m x y / (m t y + (1-t) x)) - [t^s f(x) + m (1-t)^s f(y)].
/// Nonpositive means the defining inequality holds at (x, y, t).
/// Throws DomainError if the combination is not inside f's domain.
double harmonic_sm_defect(const FunctionSpec& f, double x, double y, double t, double s, double m);

/// f(t x + m (1-t) y) - [t^s f(x) + m (1-t)^s f(y)]: the ordinary (s,m)-convexity defect.
double sm_defect(const FunctionSpec& f, double x, double y, double t, double s, double m);

/// Worst normalised harmonic (s,m) defect over the grid.
///
/// Ties are broken towards the lexicographically smallest (x, y, t), so the
/// witness does not depend on `workers`.
ConvexityReport check_harmonic_sm(const FunctionSpec& f, double s, double m, const GridSpec& grid,
                                  unsigned workers = 1);

/// Same sweep for the ordinary (s,m)-convexity combination.
ConvexityReport check_sm(const FunctionSpec& f, double s, double m, const GridSpec& grid, unsigned workers = 1);

enum class Monotonicity { nondecreasing, nonincreasing, neither };

struct Classification {
    Monotonicity monotone = Monotonicity::neither;
    bool nondecreasing = false;
    bool nonincreasing = false;
    bool sm_convex = false;
    bool harmonic_sm_convex = false;
    /// (sm_convex and nondecreasing) implies harmonic_sm_convex.
    bool first_implication_ok = true;
    /// (harmonic_sm_convex and nonincreasing) implies sm_convex.
    bool second_implication_ok = true;
    ConvexityReport sm_report;
    ConvexityReport harmonic_report;
};

/// Monotonicity over [m lo, hi] (every combination point lies in there) and
/// both convexity verdicts on the grid.
Classification classify(const FunctionSpec& f, double s, double m, const GridSpec& grid);

struct Prop2Result {
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// For x = t a + (1-t) b checks
///   f(ab/(a+b-x)) <= t^s [f(a)+f(b)] + m (1-t)^s [f(a/m)+f(b/m)] - f(ab/x).
/// Assumes f is harmonically (s,m)-convex (caller certifies).
Prop2Result prop2_witness(const FunctionSpec& f, double a, double b, double s, double m, double x);

/// A function together with the (s,m) class it is claimed to belong to.
struct ClassedSpec {
    FunctionSpec f;
    double s = 1.0;
    double m = 1.0;
};

struct MaxOf {};
struct SumOf {};
struct ScaleBy {
    double factor;
};
/// outer o inner; outer must be nondecreasing and (s,m)-convex on the range of inner.
struct ComposeWith {
    ClassedSpec outer;
};
/// The inputs are the sequence members, converging pointwise to `limit`.
struct SequenceLimit {
    FunctionSpec limit;
};
using CombineOp = std::variant<MaxOf, SumOf, ScaleBy, ComposeWith, SequenceLimit>;

/// Builds the composite and the class the closure results assign to it:
/// max and limits keep (s,m); sums take min(s1,s2); positive scaling keeps (s,m);
/// composition with a harmonically m-convex inner function takes outer's s.
/// Throws ParameterError on arity or class mismatches and for scale factors <= 0.
ClassedSpec combine(const CombineOp& op, std::span<const ClassedSpec> inputs);

}  // namespace harmonia::convexity

#pragma once

#include "harmonia/function_spec.hpp"
#include "harmonia/quadrature.hpp"

namespace harmonia {

/// One verification case.
struct Instance {
    double a = 1.0;
    double b = 2.0;
    double s = 1.0;
    double m = 1.0;
    double q = 1.0;
    double lambda_ = 0.5;
    double mu_ = 0.5;
    FunctionSpec f = FunctionSpec::linear();

    /// 0 < a < b, s and m in (0, 1], q >= 1.
    void validate() const;
    /// Additionally 0 <= mu <= 1/2 <= lambda <= 1, the weight range of the bounds.
    void validate_weights() const;

    Instance with_weights(double lambda, double mu) const;
};

}  // namespace harmonia

namespace harmonia::identity {

inline constexpr double kDefaultTol = 1e-8;

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_diff = 0.0;
    double tol = kDefaultTol;
    bool pass = false;
};

/// 2ab / (a + b).
double harmonic_mean(double a, double b);

/// (ab / (b - a)) * integral_a^b f(u) / u^2 du, the harmonic analogue of the
/// integral mean. Throws AccuracyError if the quadrature does not converge.
double harmonic_integral_mean(const FunctionSpec& f, double a, double b, const quad::QuadSettings& quad = {});

/// (lambda - mu) f(2ab/(a+b)) + (1 - lambda) f(a) + mu f(b) - (ab/(b-a)) int_a^b f(u)/u^2 du.
double corrected_If(const Instance& inst, const quad::QuadSettings& quad = {});

/// The same functional with the arithmetic midpoint f((a+b)/2) and the factor
/// 2ab/(b-a). Known not to satisfy the integral identity; kept for the errata report.
double paper_If_as_printed(const Instance& inst, const quad::QuadSettings& quad = {});

/// ab(b-a) [ int_0^{1/2} (mu-t)/A_t^2 f'(ab/A_t) dt + int_{1/2}^1 (lambda-t)/A_t^2 f'(ab/A_t) dt ],
/// with A_t = t b + (1-t) a.
double lemma1_rhs(const Instance& inst, const quad::QuadSettings& quad = {});

/// corrected_If against lemma1_rhs. Valid for every real lambda and mu.
IdentityCheck verify_lemma1(const Instance& inst, const quad::QuadSettings& quad = {}, double tol = kDefaultTol);

/// Left-hand sides of the three endpoint/midpoint rules, written out directly.
double trapezoid_lhs(const FunctionSpec& f, double a, double b, const quad::QuadSettings& quad = {});
double midpoint_lhs(const FunctionSpec& f, double a, double b, const quad::QuadSettings& quad = {});
double simpson_lhs(const FunctionSpec& f, double a, double b, const quad::QuadSettings& quad = {});

}  // namespace harmonia::identity

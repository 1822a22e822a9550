#include "harmonia/identity.hpp"

#include <cmath>
#include <sstream>

#include "harmonia/errors.hpp"

namespace harmonia {

void Instance::validate() const {
    if (!(a > 0.0) || !(a < b) || !std::isfinite(b)) throw DomainError("instance requires 0 < a < b");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("instance requires s in (0, 1]");
    if (!(m > 0.0 && m <= 1.0)) throw DomainError("instance requires m in (0, 1]");
    if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("instance requires q >= 1");
    if (!std::isfinite(lambda_) || !std::isfinite(mu_)) throw DomainError("instance weights must be finite");
}

void Instance::validate_weights() const {
    validate();
    if (!(mu_ >= 0.0 && mu_ <= 0.5 && lambda_ >= 0.5 && lambda_ <= 1.0))
        throw DomainError("bounds require 0 <= mu <= 1/2 <= lambda <= 1");
}

Instance Instance::with_weights(double lambda, double mu) const {
    Instance copy = *this;
    copy.lambda_ = lambda;
    copy.mu_ = mu;
    return copy;
}

}  // namespace harmonia

namespace harmonia::identity {

namespace {

void check_interval(double a, double b) {
    if (!(a > 0.0) || !(a < b) || !std::isfinite(b)) throw DomainError("requires 0 < a < b");
}

double converged_value(const quad::QuadResult& r, const char* what) {
    if (!r.converged) {
        std::ostringstream os;
        os << what << ": quadrature did not converge (estimate " << r.value << ", error " << r.err_estimate << ")";
        throw AccuracyError(os.str(), r.value, r.err_estimate);
    }
    return r.value;
}

double weighted_integral(const FunctionSpec& f, double a, double b, const quad::QuadSettings& quad) {
    const auto r = quad::integrate([&](double u) { return f.value(u) / (u * u); }, a, b, quad);
    return converged_value(r, "integral of f(u)/u^2");
}

}  // namespace

double harmonic_mean(double a, double b) { return 2.0 * a * b / (a + b); }

double harmonic_integral_mean(const FunctionSpec& f, double a, double b, const quad::QuadSettings& quad) {
    check_interval(a, b);
    return a * b / (b - a) * weighted_integral(f, a, b, quad);
}

double corrected_If(const Instance& inst, const quad::QuadSettings& quad) {
    check_interval(inst.a, inst.b);
    const FunctionSpec& f = inst.f;
    return (inst.lambda_ - inst.mu_) * f.value(harmonic_mean(inst.a, inst.b)) + (1.0 - inst.lambda_) * f.value(inst.a) +
           inst.mu_ * f.value(inst.b) - harmonic_integral_mean(f, inst.a, inst.b, quad);
}

double paper_If_as_printed(const Instance& inst, const quad::QuadSettings& quad) {
    check_interval(inst.a, inst.b);
    const FunctionSpec& f = inst.f;
    const double a = inst.a;
    const double b = inst.b;
    return (inst.lambda_ - inst.mu_) * f.value(0.5 * (a + b)) + (1.0 - inst.lambda_) * f.value(a) +
           inst.mu_ * f.value(b) - 2.0 * a * b / (b - a) * weighted_integral(f, a, b, quad);
}

double lemma1_rhs(const Instance& inst, const quad::QuadSettings& quad) {
    check_interval(inst.a, inst.b);
    const double a = inst.a;
    const double b = inst.b;
    const FunctionSpec& f = inst.f;
    auto kernel = [&](double weight) {
        return [&, weight](double t) {
            const double at = t * b + (1.0 - t) * a;
            return (weight - t) / (at * at) * f.derivative(a * b / at);
        };
    };
    const double left = converged_value(quad::integrate(kernel(inst.mu_), 0.0, 0.5, quad), "lemma left half");
    const double right = converged_value(quad::integrate(kernel(inst.lambda_), 0.5, 1.0, quad), "lemma right half");
    return a * b * (b - a) * (left + right);
}

IdentityCheck verify_lemma1(const Instance& inst, const quad::QuadSettings& quad, double tol) {
    IdentityCheck c;
    c.lhs = corrected_If(inst, quad);
    c.rhs = lemma1_rhs(inst, quad);
    c.abs_diff = std::abs(c.lhs - c.rhs);
    c.tol = tol;
    c.pass = c.abs_diff <= tol;
    return c;
}

double trapezoid_lhs(const FunctionSpec& f, double a, double b, const quad::QuadSettings& quad) {
    return 0.5 * (f.value(a) + f.value(b)) - harmonic_integral_mean(f, a, b, quad);
}

double midpoint_lhs(const FunctionSpec& f, double a, double b, const quad::QuadSettings& quad) {
    return f.value(harmonic_mean(a, b)) - harmonic_integral_mean(f, a, b, quad);
}

double simpson_lhs(const FunctionSpec& f, double a, double b, const quad::QuadSettings& quad) {
    return (0.5 * (f.value(a) + f.value(b)) + 2.0 * f.value(harmonic_mean(a, b))) / 3.0 -
           harmonic_integral_mean(f, a, b, quad);
}

}  // namespace harmonia::identity

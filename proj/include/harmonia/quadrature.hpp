#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace harmonia::quad {

using Integrand = std::function<double(double)>;

struct QuadSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t max_subdivisions = 2000;

    /// Throws ParameterError unless abs_tol > 0, rel_tol >= 0 and max_subdivisions >= 1.
    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Adaptive 7/15-point Gauss-Kronrod quadrature with global bisection of the
/// interval carrying the largest error estimate.
///
/// The error estimate of each panel is |K15 - G7|, which is pessimistic for
/// smooth integrands; the returned estimate is the sum over panels. Endpoints
/// are never evaluated. Returns converged=false (never throws) when the
/// subdivision budget runs out before the tolerance is met.
///
/// Throws EvaluationError if the integrand is non-finite at an interior node.
QuadResult integrate(const Integrand& f, double lo, double hi, const QuadSettings& settings = {});

/// Tanh-sinh (double exponential) quadrature with step halving.
///
/// Tolerates algebraic endpoint behaviour t^sigma with sigma > -1. Nodes that
/// round onto an endpoint are skipped. The error estimate is the difference
/// between the last two levels.
QuadResult integrate_de(const Integrand& f, double lo, double hi, const QuadSettings& settings = {});

/// f(x, x - lo, hi - x), with both distances computed without cancellation.
using EndpointIntegrand = std::function<double(double, double, double)>;

/// Tanh-sinh for integrands singular at an endpoint: the integrand receives the
/// exact distances to lo and hi, so factors like (1 - t)^(b-1) stay accurate
/// where t itself has rounded to 1.
QuadResult integrate_de_endpoint(const EndpointIntegrand& f, double lo, double hi, const QuadSettings& settings = {});

/// Sum of integrate() over consecutive panels [breaks[i], breaks[i+1]].
/// Used for integrands with a kink at a known abscissa.
QuadResult integrate_panels(const Integrand& f, const std::vector<double>& breaks,
                            const QuadSettings& settings = {});

}  // namespace harmonia::quad

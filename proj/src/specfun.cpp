#include "harmonia/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "harmonia/errors.hpp"
#include "harmonia/quadrature.hpp"

namespace harmonia::specfun {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

// Lanczos sum A(x) for Gamma(x + 1).
double lanczos_sum(double x) {
    double acc = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (x + static_cast<double>(i));
    return acc;
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << what << " requires a positive finite argument, got " << x;
        throw DomainError(os.str());
    }
}

}  // namespace

void AccuracyBudget::validate() const {
    if (!(rel_tol > 0.0)) throw ParameterError("AccuracyBudget.rel_tol must be > 0");
    if (max_work < 1) throw ParameterError("AccuracyBudget.max_work must be >= 1");
}

double gamma(double x) {
    require_positive(x, "gamma");
    if (x < 0.5) {
        // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
    }
    if (x == std::floor(x) && x <= 21.0) {
        double fact = 1.0;
        for (int k = 2; k < static_cast<int>(x); ++k) fact *= k;
        return fact;
    }
    const double xm = x - 1.0;
    const double base = xm + kLanczosG + 0.5;
    // Split the power to delay overflow for x near 171.
    const double half_pow = std::pow(base, 0.5 * (xm + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-base)) * lanczos_sum(xm);
}

double log_gamma(double x) {
    require_positive(x, "log_gamma");
    if (x < 0.5) {
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    }
    const double xm = x - 1.0;
    const double base = xm + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (xm + 0.5) * std::log(base) - base +
           std::log(lanczos_sum(xm));
}

double beta(double a, double b) {
    require_positive(a, "beta");
    require_positive(b, "beta");
    if (a + b < 170.0) {
        // Gamma(a) Gamma(b) is commutative in floating point, so beta(a,b) == beta(b,a).
        return (gamma(a) * gamma(b)) / gamma(a + b);
    }
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

namespace {

void check_hyp2f1_domain(double alpha, double beta_, double gamma_, double z) {
    if (!std::isfinite(alpha) || !(beta_ > 0.0) || !(gamma_ > beta_) || !std::isfinite(gamma_) ||
        !(z >= 0.0 && z < 1.0)) {
        std::ostringstream os;
        os << "hyp2f1 requires gamma > beta > 0 and 0 <= z < 1, got (" << alpha << ", " << beta_
           << "; " << gamma_ << "; " << z << ")";
        throw DomainError(os.str());
    }
}

struct SeriesValue {
    double value;
    std::size_t terms;
};

SeriesValue gauss_series(double alpha, double beta_, double gamma_, double z, const AccuracyBudget& budget) {
    constexpr double kEps = 1e-17;
    double term = 1.0;
    double sum = 1.0;
    for (std::size_t k = 0; k < budget.max_work; ++k) {
        const double kd = static_cast<double>(k);
        const double ratio = (alpha + kd) * (beta_ + kd) / ((gamma_ + kd) * (kd + 1.0)) * z;
        term *= ratio;
        sum += term;
        if (term == 0.0) return {sum, k + 1};
        // Past the peak the ratio tends to z from either side; bound the tail
        // geometrically with the larger of the two.
        const double r = std::max(std::abs(ratio), z);
        if (r < 1.0 && kd + 1.0 > std::abs(alpha) && std::abs(term) * r / (1.0 - r) <= kEps * std::abs(sum))
            return {sum, k + 1};
    }
    throw AccuracyError("hyp2f1 series did not converge within the work budget", sum, term);
}

}  // namespace

Hyp2f1Paths hyp2f1_paths(double alpha, double beta_, double gamma_, double z, const AccuracyBudget& budget) {
    budget.validate();
    check_hyp2f1_domain(alpha, beta_, gamma_, z);
    if (z == 0.0) return {1.0, 1.0, 0, 0};

    const SeriesValue series = gauss_series(alpha, beta_, gamma_, z, budget);

    const double lead = beta_ - 1.0;
    const double tail = gamma_ - beta_ - 1.0;
    const double norm = beta(beta_, gamma_ - beta_);
    auto integrand = [=](double t) {
        return std::pow(t, lead) * std::pow(1.0 - t, tail) * std::pow(1.0 - z * t, -alpha) / norm;
    };
    auto endpoint_integrand = [=](double t, double from0, double to1) {
        return std::pow(from0, lead) * std::pow(to1, tail) * std::pow(1.0 - z * t, -alpha) / norm;
    };

    quad::QuadSettings settings;
    settings.rel_tol = std::min(budget.rel_tol, 1e-10) * 1e-2;
    settings.abs_tol = 1e-300;
    settings.max_subdivisions = std::max<std::size_t>(1, budget.max_work / 30);

    // Both exponents nonnegative: bounded integrand, Gauss-Kronrod is enough.
    const quad::QuadResult r = (lead >= 0.0 && tail >= 0.0)
                                   ? quad::integrate(integrand, 0.0, 1.0, settings)
                                   : quad::integrate_de_endpoint(endpoint_integrand, 0.0, 1.0, settings);
    if (!r.converged)
        throw AccuracyError("hyp2f1 Euler integral did not converge within the work budget", r.value,
                            series.value);
    return {r.value, series.value, series.terms, r.evaluations};
}

double hyp2f1(double alpha, double beta_, double gamma_, double z, const AccuracyBudget& budget) {
    const Hyp2f1Paths p = hyp2f1_paths(alpha, beta_, gamma_, z, budget);
    const double tol = std::max(budget.rel_tol, 1e-10);
    if (std::abs(p.euler - p.series) > tol * std::abs(p.series)) {
        std::ostringstream os;
        os.precision(17);
        os << "hyp2f1 Euler and series routes disagree: " << p.euler << " vs " << p.series;
        throw AccuracyError(os.str(), p.euler, p.series);
    }
    return p.euler;
}

}  // namespace harmonia::specfun

#pragma once

#include <cstddef>

namespace harmonia::specfun {

struct AccuracyBudget {
    double rel_tol = 1e-10;
    std::size_t max_work = 200000;

    void validate() const;
};

/// Gamma function for x > 0 (Lanczos, g = 7, nine terms; reflection below 1/2).
/// Overflows to +inf above x ~ 171.6. Throws DomainError for x <= 0.
double gamma(double x);

/// log Gamma for x > 0, used where the direct product would overflow.
double log_gamma(double x);

/// Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b). Exactly symmetric.
double beta(double a, double b);

/// Both evaluation routes of 2F1, exposed so tests can compare them.
struct Hyp2f1Paths {
    double euler = 0.0;   ///< Euler integral via adaptive quadrature
    double series = 0.0;  ///< Gauss power series
    std::size_t series_terms = 0;
    std::size_t quadrature_evaluations = 0;
};

/// Evaluates 2F1 by both routes without comparing them.
/// Requires gamma_ > beta_ > 0 and 0 <= z < 1 (DomainError otherwise).
/// Throws AccuracyError if either route exhausts the budget.
Hyp2f1Paths hyp2f1_paths(double alpha, double beta_, double gamma_, double z,
                         const AccuracyBudget& budget = {});

/// Gauss hypergeometric 2F1(alpha, beta_; gamma_; z) on gamma_ > beta_ > 0, 0 <= z < 1.
///
/// The Euler integral value is returned after it has been checked against the
/// power series; a relative disagreement above max(budget.rel_tol, 1e-10)
/// raises AccuracyError carrying both values.
double hyp2f1(double alpha, double beta_, double gamma_, double z, const AccuracyBudget& budget = {});

}  // namespace harmonia::specfun

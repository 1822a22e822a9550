#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "harmonia/convexity.hpp"
#include "harmonia/identity.hpp"
#include "harmonia/quadrature.hpp"
#include "harmonia/specfun.hpp"

namespace harmonia::bounds {

inline constexpr double kCrosscheckTol = 1e-6;  ///< closed form vs oracle, relative
inline constexpr double kMarginTol = 1e-9;      ///< verdict slack, absolute

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

enum class Weight { abs_mu_minus_t, abs_lambda_minus_t, abs_weight_pow_p, none };
enum class Factor { t_pow_s, one_minus_t_pow_s, none };
enum class Side { left, right };  ///< [0, 1/2] or [1/2, 1]

/// One of the coefficient integrals. With factor == none the integrand is the
/// bare weight; otherwise it is weight * factor / A_t^{2q}, A_t = t b + (1-t) a.
/// abs_weight_pow_p means |mu - t|^p on the left side and |lambda - t|^p on the right.
struct KernelKind {
    Weight weight;
    Factor factor;
    Side side;
};

/// The kernel defining coefficient B_index, index in 1..12.
KernelKind kernel_for(int index);

/// Direct quadrature of the kernel, split at t = mu (left) or t = lambda (right)
/// when the split point is interior. p is only read for abs_weight_pow_p.
/// Throws AccuracyError if the quadrature does not converge.
double kernel_oracle(const KernelKind& kind, const Instance& inst, double p, const quad::QuadSettings& quad = {});

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// {mu^2 - mu/2 + 1/8, lambda^2 - 3 lambda/2 + 5/8}.
std::pair<double, double> b1_b4(double mu, double lambda);

/// [mu^{p+1} + (1/2 - mu)^{p+1}] / (p+1).
double b7(double mu, double p);
/// [(lambda - 1/2)^{p+1} + (1 - lambda)^{p+1}] / (p+1).
double b10(double lambda, double p);

enum class Case { single, mu_zero, mu_interior, mu_half, lambda_half, lambda_interior, lambda_one };

/// Piecewise branch selected for `index` by the instance weights. The three
/// lambda branches of B5/B6 are printed under the labels "lambda = 0",
/// "0 < lambda < 1/2" and "lambda = 1/2"; they are read as lambda = 1,
/// 1/2 < lambda < 1 and lambda = 1/2.
Case case_for(int index, const Instance& inst);
std::string case_label(Case c);

/// The printed Beta/2F1 expression of B_index for index in {2,3,5,6,8,9,11,12}.
/// Throws ParameterError for other indices; hyp2f1 errors propagate.
double closed_B(int index, const Instance& inst, const specfun::AccuracyBudget& budget = {});

// ---------------------------------------------------------------------------
// Cross-checks
// ---------------------------------------------------------------------------

enum class TermStatus { ok, erratum_suspected, oracle_only };
std::string status_label(TermStatus s);

struct BoundTerm {
    int index = 0;
    Case branch = Case::single;
    std::optional<double> closed_form;
    double oracle = 0.0;
    std::optional<double> rel_diff;
    TermStatus status = TermStatus::oracle_only;
};

/// Oracle and (where it evaluates) closed form of B_index. A closed form that
/// cannot be evaluated gives status oracle_only; one that disagrees by more
/// than kCrosscheckTol gives erratum_suspected.
BoundTerm crosscheck_B(int index, const Instance& inst, double p, const quad::QuadSettings& quad = {},
                       double crosscheck_tol = kCrosscheckTol);

/// (index, branch) pairs whose printed closed form is known to disagree with
/// its defining integral.
const std::set<std::pair<int, Case>>& expected_errata();

// ---------------------------------------------------------------------------
// Right-hand sides and verdicts
// ---------------------------------------------------------------------------

enum class Path { closed_form, oracle };
std::string path_label(Path p);

/// Conjugate exponent q / (q - 1). Throws ParameterError for q <= 1.
double conjugate_exponent(double q);

/// ab(b-a) { B1^{1-1/q} (fa_q B2 + m fbm_q B3)^{1/q} + B4^{1-1/q} (fa_q B5 + m fbm_q B6)^{1/q} }.
/// fa_q = |f'(a)|^q, fbm_q = |f'(b/m)|^q.
double theorem1_rhs(const Instance& inst, double fa_q, double fbm_q, Path path, const quad::QuadSettings& quad = {});

/// ab(b-a) { B7^{1/p} (fa_q B8 + m fbm_q B9)^{1/q} + B10^{1/p} (fa_q B11 + m fbm_q B12)^{1/q} }, q > 1.
double theorem2_rhs(const Instance& inst, double fa_q, double fbm_q, Path path, const quad::QuadSettings& quad = {});

enum class Corollary { trapezoid, midpoint, simpson };
std::string corollary_label(Corollary c);
std::pair<double, double> corollary_weights(Corollary c);  ///< (lambda, mu)

/// Leading constant of the specialised bound: (1/8)^{1-1/q} or (5/72)^{1-1/q}
/// for theorem 1, (1/((p+1)2^{p+1}))^{1/p} or ((2^{p+1}+1)/((p+1)6^{p+1}))^{1/p} for theorem 2.
double corollary_prefactor(Corollary c, int theorem, double q);
/// Simpson prefactor of theorem 2 as printed, without the "+1".
double corollary6_printed_prefactor(double p);

/// The specialised bound at the corollary's fixed weights, assembled from its
/// own constant prefactor. Throws ParameterError if inst's weights differ.
double corollary_rhs(Corollary c, int theorem, const Instance& inst, double fa_q, double fbm_q,
                     Path path = Path::oracle, const quad::QuadSettings& quad = {});

/// |f'(a)|^q and |f'(b/m)|^q.
std::pair<double, double> derivative_moments(const Instance& inst);

/// Grid check that |f'|^q is harmonically (s,m)-convex on [a, b/m].
convexity::ConvexityReport certify(const Instance& inst, const convexity::GridSpec* grid = nullptr);

struct Verdict {
    double lhs = 0.0;  ///< |I_f| with the corrected functional
    double rhs = 0.0;
    double margin = 0.0;
    bool pass = false;
    int theorem = 1;
    Path path = Path::oracle;
    std::optional<double> closed_rhs;  ///< present when every closed term checked out
    std::vector<BoundTerm> terms;
};

/// Checks |I_f(lambda, mu, a, b)| <= RHS with the oracle path.
/// Unless `already_certified`, runs certify() first and throws PreconditionError
/// when |f'|^q fails the grid check.
Verdict check_theorem(const Instance& inst, int theorem, const quad::QuadSettings& quad = {},
                      bool already_certified = false, double margin_tol = kMarginTol,
                      double crosscheck_tol = kCrosscheckTol);

}  // namespace harmonia::bounds

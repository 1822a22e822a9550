#include "harmonia/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "harmonia/errors.hpp"

namespace harmonia::bounds {

namespace {

using specfun::beta;

void check_index(int index) {
    if (index < 1 || index > 12) throw ParameterError("coefficient index must be in 1..12");
}

double converged_value(const quad::QuadResult& r, int index_hint) {
    if (!r.converged) {
        std::ostringstream os;
        os << "coefficient oracle";
        if (index_hint > 0) os << " B" << index_hint;
        os << " did not converge (estimate " << r.value << ", error " << r.err_estimate << ")";
        throw AccuracyError(os.str(), r.value, r.err_estimate);
    }
    return r.value;
}

double oracle_for(int index, const Instance& inst, double p, const quad::QuadSettings& quad) {
    const auto r = kernel_oracle(kernel_for(index), inst, p, quad);
    return r;
}

// a*b*(b-a) { w1 (fa B_first + m fbm B_second)^{1/q} + w2 (fa B_third + m fbm B_fourth)^{1/q} }
double assemble(const Instance& inst, double fa_q, double fbm_q, double left_weight, double right_weight,
                const std::array<double, 4>& b) {
    const double inv_q = 1.0 / inst.q;
    const double left = std::pow(fa_q * b[0] + inst.m * fbm_q * b[1], inv_q);
    const double right = std::pow(fa_q * b[2] + inst.m * fbm_q * b[3], inv_q);
    return inst.a * inst.b * (inst.b - inst.a) * (left_weight * left + right_weight * right);
}

// The four A_t-weighted coefficients of a theorem, via the chosen path.
std::array<double, 4> weighted_terms(int theorem, const Instance& inst, Path path, const quad::QuadSettings& quad) {
    const std::array<int, 4> idx = theorem == 1 ? std::array{2, 3, 5, 6} : std::array{8, 9, 11, 12};
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i)
        out[i] = path == Path::oracle ? oracle_for(idx[i], inst, 0.0, quad) : closed_B(idx[i], inst);
    return out;
}

std::pair<double, double> power_mean_weights(const Instance& inst, Path path, const quad::QuadSettings& quad) {
    double b1 = 0.0, b4 = 0.0;
    if (path == Path::oracle) {
        b1 = oracle_for(1, inst, 0.0, quad);
        b4 = oracle_for(4, inst, 0.0, quad);
    } else {
        std::tie(b1, b4) = b1_b4(inst.mu_, inst.lambda_);
    }
    const double e = 1.0 - 1.0 / inst.q;
    return {std::pow(b1, e), std::pow(b4, e)};
}

std::pair<double, double> holder_weights(const Instance& inst, double p, Path path, const quad::QuadSettings& quad) {
    double b7v = 0.0, b10v = 0.0;
    if (path == Path::oracle) {
        b7v = oracle_for(7, inst, p, quad);
        b10v = oracle_for(10, inst, p, quad);
    } else {
        b7v = b7(inst.mu_, p);
        b10v = b10(inst.lambda_, p);
    }
    return {std::pow(b7v, 1.0 / p), std::pow(b10v, 1.0 / p)};
}

void check_moments(double fa_q, double fbm_q) {
    if (!(fa_q >= 0.0) || !(fbm_q >= 0.0)) throw ParameterError("|f'|^q values must be nonnegative");
}

}  // namespace

KernelKind kernel_for(int index) {
    check_index(index);
    static constexpr std::array<KernelKind, 12> table = {{
        {Weight::abs_mu_minus_t, Factor::none, Side::left},
        {Weight::abs_mu_minus_t, Factor::t_pow_s, Side::left},
        {Weight::abs_mu_minus_t, Factor::one_minus_t_pow_s, Side::left},
        {Weight::abs_lambda_minus_t, Factor::none, Side::right},
        {Weight::abs_lambda_minus_t, Factor::t_pow_s, Side::right},
        {Weight::abs_lambda_minus_t, Factor::one_minus_t_pow_s, Side::right},
        {Weight::abs_weight_pow_p, Factor::none, Side::left},
        {Weight::none, Factor::t_pow_s, Side::left},
        {Weight::none, Factor::one_minus_t_pow_s, Side::left},
        {Weight::abs_weight_pow_p, Factor::none, Side::right},
        {Weight::none, Factor::t_pow_s, Side::right},
        {Weight::none, Factor::one_minus_t_pow_s, Side::right},
    }};
    return table[static_cast<std::size_t>(index - 1)];
}

double kernel_oracle(const KernelKind& kind, const Instance& inst, double p, const quad::QuadSettings& quad) {
    if (!(inst.a > 0.0) || !(inst.a < inst.b)) throw DomainError("kernel_oracle requires 0 < a < b");
    if (kind.weight == Weight::abs_weight_pow_p && !(p > 0.0)) throw ParameterError("kernel exponent p must be > 0");

    const double lo = kind.side == Side::left ? 0.0 : 0.5;
    const double hi = kind.side == Side::left ? 0.5 : 1.0;
    const double pivot = kind.side == Side::left ? inst.mu_ : inst.lambda_;
    const double a = inst.a;
    const double b = inst.b;
    const double two_q = 2.0 * inst.q;
    const double s = inst.s;

    auto integrand = [&](double t) {
        double w = 1.0;
        switch (kind.weight) {
            case Weight::abs_mu_minus_t: w = std::abs(inst.mu_ - t); break;
            case Weight::abs_lambda_minus_t: w = std::abs(inst.lambda_ - t); break;
            case Weight::abs_weight_pow_p: w = std::pow(std::abs(pivot - t), p); break;
            case Weight::none: break;
        }
        if (kind.factor == Factor::none) return w;
        const double factor = kind.factor == Factor::t_pow_s ? std::pow(t, s) : std::pow(1.0 - t, s);
        return w * factor / std::pow(t * b + (1.0 - t) * a, two_q);
    };

    std::vector<double> breaks{lo, hi};
    if (kind.weight != Weight::none && pivot > lo && pivot < hi) breaks = {lo, pivot, hi};
    // Coefficients can be far below 1 (A_t^{2q} grows with b), so an absolute
    // floor would swamp the relative cross-check; only rel_tol governs here.
    // The bare weights are cheap and enter every right side through a power;
    // resolving them near round-off keeps specialised constants comparable at 1e-12.
    quad::QuadSettings settings = quad;
    settings.abs_tol = 1e-300;
    if (kind.factor == Factor::none) settings.rel_tol = std::min(settings.rel_tol, 1e-12);
    return converged_value(quad::integrate_panels(integrand, breaks, settings), 0);
}

std::pair<double, double> b1_b4(double mu, double lambda) {
    return {mu * mu - mu / 2.0 + 1.0 / 8.0, lambda * lambda - 1.5 * lambda + 5.0 / 8.0};
}

double b7(double mu, double p) {
    return (std::pow(mu, p + 1.0) + std::pow(0.5 - mu, p + 1.0)) / (p + 1.0);
}

double b10(double lambda, double p) {
    return (std::pow(lambda - 0.5, p + 1.0) + std::pow(1.0 - lambda, p + 1.0)) / (p + 1.0);
}

Case case_for(int index, const Instance& inst) {
    check_index(index);
    if (index == 2 || index == 3) {
        const double mu = inst.mu_;
        if (!(mu >= 0.0 && mu <= 0.5)) throw DomainError("B2/B3 need 0 <= mu <= 1/2");
        if (mu == 0.0) return Case::mu_zero;
        if (mu == 0.5) return Case::mu_half;
        return Case::mu_interior;
    }
    if (index == 5 || index == 6) {
        const double lambda = inst.lambda_;
        if (!(lambda >= 0.5 && lambda <= 1.0)) throw DomainError("B5/B6 need 1/2 <= lambda <= 1");
        if (lambda == 0.5) return Case::lambda_half;
        if (lambda == 1.0) return Case::lambda_one;
        return Case::lambda_interior;
    }
    return Case::single;
}

std::string case_label(Case c) {
    switch (c) {
        case Case::single: return "-";
        case Case::mu_zero: return "mu=0";
        case Case::mu_interior: return "0<mu<1/2";
        case Case::mu_half: return "mu=1/2";
        case Case::lambda_half: return "lambda=1/2";
        case Case::lambda_interior: return "1/2<lambda<1";
        case Case::lambda_one: return "lambda=1";
    }
    return "?";
}

double closed_B(int index, const Instance& inst, const specfun::AccuracyBudget& budget) {
    const double a = inst.a;
    const double b = inst.b;
    const double s = inst.s;
    const double Q = 2.0 * inst.q;
    auto F = [&](double beta_, double gamma_, double z) { return specfun::hyp2f1(Q, beta_, gamma_, z, budget); };

    // Arguments that recur across the displays.
    const double z_hm = 1.0 - 2.0 * a / (a + b);  // 1 - 2a/(b+a)
    const double z_ab = 1.0 - a / b;              // 1 - a/b
    const double z_mid = 1.0 - (b + a) / (2.0 * b);
    const double sum_q = std::pow(a + b, Q);
    const double b_q = std::pow(b, Q);
    const double two_pow = std::pow(2.0, Q - s - 2.0);  // 2^{2q-s-2}

    switch (index) {
        case 2: {
            switch (case_for(2, inst)) {
                case Case::mu_zero: return two_pow * beta(1, s + 2) / sum_q * F(1, s + 3, z_hm);
                case Case::mu_half: return two_pow * beta(2, s + 1) / sum_q * F(2, s + 3, z_hm);
                default: {
                    const double mu = inst.mu_;
                    const double am = mu * b + (1.0 - mu) * a;
                    return 2.0 * std::pow(mu, s + 2) * beta(2, s + 1) / std::pow(am, Q) * F(2, s + 3, 1.0 - a / am) -
                           mu * two_pow * beta(1, s + 1) / sum_q * F(1, s + 2, z_hm) +
                           two_pow * beta(1, s + 2) / sum_q * F(1, s + 3, z_hm);
                }
            }
        }
        case 3: {
            const double d = std::pow(2.0, s + 2) * b_q;
            switch (case_for(3, inst)) {
                case Case::mu_zero:
                    return beta(s + 1, s + 3) / b_q * F(s + 1, s + 3, z_ab) - beta(s + 1, 1) / d * F(s + 1, s + 2, z_mid) -
                           beta(s + 1, 2) / d * F(s + 1, s + 3, z_mid);
                case Case::mu_half:
                    // The display has no operator before its last term; '-' is assumed.
                    return beta(s + 1, 1) / (2.0 * b_q) * F(s + 2, s + 3, z_ab) -
                           beta(s + 1, 2) / (2.0 * b_q) * F(s + 2, s + 3, z_ab) - beta(s + 1, 2) / d * F(s + 2, s + 3, z_mid);
                default: {
                    const double mu = inst.mu_;
                    return mu * beta(s + 1, 1) / b_q * F(s + 1, s + 2, z_ab) - beta(s + 1, 2) / b_q * F(s + 1, s + 3, z_ab) +
                           2.0 * std::pow(1.0 - mu, s + 2) * beta(s + 1, 2) / b_q * F(s + 1, s + 3, (1.0 - mu) * z_ab) +
                           (mu - 1.0) * beta(s + 1, 1) / d * F(s + 1, s + 2, z_mid) + beta(s + 1, 2) / d * F(s + 1, s + 3, z_mid);
                }
            }
        }
        case 5: {
            switch (case_for(5, inst)) {
                case Case::lambda_one:
                    return beta(1, s + 2) / b_q * F(1, s + 3, z_ab) - two_pow * beta(1, s + 2) / sum_q * F(1, s + 3, z_hm);
                case Case::lambda_half:
                    return beta(1, s + 2) / (2.0 * b_q) * F(1, s + 3, z_ab) + two_pow * beta(2, s + 1) / sum_q * F(2, s + 3, z_hm) -
                           beta(2, s + 1) / (2.0 * b_q) * F(2, s + 3, z_ab);
                default: {
                    const double l = inst.lambda_;
                    const double al = l * b + (1.0 - l) * a;
                    return 2.0 * std::pow(l, s + 2) * beta(2, s + 1) / std::pow(al, Q) * F(2, s + 3, 1.0 - a / al) -
                           l * two_pow * beta(1, s + 1) / sum_q * F(1, s + 2, z_hm) +
                           two_pow * beta(1, s + 2) / sum_q * F(1, s + 3, z_hm) + beta(1, s + 2) / b_q * F(1, s + 3, z_ab) -
                           l * beta(1, s + 1) / b_q * F(1, s + 2, z_ab);
                }
            }
        }
        case 6: {
            const double d2 = std::pow(2.0, s + 2) * b_q;
            const double d1 = std::pow(2.0, s + 1) * b_q;
            switch (case_for(6, inst)) {
                case Case::lambda_one:
                    return beta(s + 1, 1) / d2 * F(s + 1, s + 2, z_mid) - beta(s + 1, 2) / d2 * F(s + 1, s + 3, z_mid);
                case Case::lambda_half: return beta(s + 1, 2) / d2 * F(s + 2, s + 3, z_mid);
                default: {
                    const double l = inst.lambda_;
                    return 2.0 * l * beta(s + 1, 1) / b_q * F(s + 1, s + 2, z_ab) +
                           (l - 1.0) * beta(1, s + 1) / d1 * F(1, s + 2, z_mid) +
                           2.0 * std::pow(1.0 - l, s + 2) * beta(s + 1, 2) / b_q * F(s + 1, s + 3, (1.0 - l) * z_ab) +
                           beta(2, s + 1) / d1 * F(2, s + 3, z_mid);
                }
            }
        }
        case 8: return two_pow * beta(1, s + 1) / sum_q * F(1, s + 2, z_hm);
        case 9:
            return beta(s + 1, 1) / b_q * F(s + 1, s + 2, z_ab) -
                   beta(s + 1, 2) / (std::pow(2.0, s + 1) * b_q) * F(s + 1, s + 2, z_mid);
        case 11:
            return beta(1, s + 1) / b_q * F(1, s + 2, z_ab) -
                   std::pow(2.0, Q - s - 1.0) * beta(1, s + 1) / sum_q * F(1, s + 2, z_hm);
        case 12: return beta(s + 1, 2) / (std::pow(2.0, s + 1) * b_q) * F(s + 1, s + 3, z_mid);
        default: break;
    }
    throw ParameterError("closed_B covers indices 2, 3, 5, 6, 8, 9, 11 and 12 only");
}

std::string status_label(TermStatus s) {
    switch (s) {
        case TermStatus::ok: return "ok";
        case TermStatus::erratum_suspected: return "erratum_suspected";
        case TermStatus::oracle_only: return "oracle_only";
    }
    return "?";
}

BoundTerm crosscheck_B(int index, const Instance& inst, double p, const quad::QuadSettings& quad, double crosscheck_tol) {
    check_index(index);
    BoundTerm term;
    term.index = index;
    term.branch = case_for(index, inst);
    term.oracle = oracle_for(index, inst, p, quad);

    try {
        switch (index) {
            case 1: term.closed_form = b1_b4(inst.mu_, inst.lambda_).first; break;
            case 4: term.closed_form = b1_b4(inst.mu_, inst.lambda_).second; break;
            case 7: term.closed_form = b7(inst.mu_, p); break;
            case 10: term.closed_form = b10(inst.lambda_, p); break;
            default: term.closed_form = closed_B(index, inst); break;
        }
    } catch (const AccuracyError&) {
        term.closed_form.reset();
    } catch (const DomainError&) {
        term.closed_form.reset();
    }

    if (!term.closed_form) {
        term.status = TermStatus::oracle_only;
        return term;
    }
    const double scale = std::abs(term.oracle);
    const double diff = std::abs(*term.closed_form - term.oracle);
    term.rel_diff = scale > 0.0 ? diff / scale : diff;
    term.status = *term.rel_diff <= crosscheck_tol ? TermStatus::ok : TermStatus::erratum_suspected;
    return term;
}

const std::set<std::pair<int, Case>>& expected_errata() {
    static const std::set<std::pair<int, Case>> set = {
        {2, Case::mu_interior},     {3, Case::mu_zero},        {3, Case::mu_interior}, {3, Case::mu_half},
        {5, Case::lambda_one},      {5, Case::lambda_interior}, {6, Case::lambda_interior},
        {6, Case::lambda_half},     {8, Case::single},          {9, Case::single},      {12, Case::single},
    };
    return set;
}

std::string path_label(Path p) { return p == Path::oracle ? "oracle" : "closed_form"; }

double conjugate_exponent(double q) {
    if (!(q > 1.0) || !std::isfinite(q)) throw ParameterError("the Holder form needs q > 1");
    return q / (q - 1.0);
}

double theorem1_rhs(const Instance& inst, double fa_q, double fbm_q, Path path, const quad::QuadSettings& quad) {
    inst.validate_weights();
    check_moments(fa_q, fbm_q);
    const auto [w1, w4] = power_mean_weights(inst, path, quad);
    return assemble(inst, fa_q, fbm_q, w1, w4, weighted_terms(1, inst, path, quad));
}

double theorem2_rhs(const Instance& inst, double fa_q, double fbm_q, Path path, const quad::QuadSettings& quad) {
    inst.validate_weights();
    check_moments(fa_q, fbm_q);
    const double p = conjugate_exponent(inst.q);
    const auto [w7, w10] = holder_weights(inst, p, path, quad);
    return assemble(inst, fa_q, fbm_q, w7, w10, weighted_terms(2, inst, path, quad));
}

std::string corollary_label(Corollary c) {
    switch (c) {
        case Corollary::trapezoid: return "trapezoid";
        case Corollary::midpoint: return "midpoint";
        case Corollary::simpson: return "simpson";
    }
    return "?";
}

std::pair<double, double> corollary_weights(Corollary c) {
    switch (c) {
        case Corollary::trapezoid: return {0.5, 0.5};
        case Corollary::midpoint: return {1.0, 0.0};
        case Corollary::simpson: return {5.0 / 6.0, 1.0 / 6.0};
    }
    return {0.5, 0.5};
}

double corollary_prefactor(Corollary c, int theorem, double q) {
    if (theorem == 1) {
        const double base = c == Corollary::simpson ? 5.0 / 72.0 : 1.0 / 8.0;
        return std::pow(base, 1.0 - 1.0 / q);
    }
    if (theorem == 2) {
        const double p = conjugate_exponent(q);
        const double base = c == Corollary::simpson
                                ? (std::pow(2.0, p + 1.0) + 1.0) / ((p + 1.0) * std::pow(6.0, p + 1.0))
                                : 1.0 / ((p + 1.0) * std::pow(2.0, p + 1.0));
        return std::pow(base, 1.0 / p);
    }
    throw ParameterError("theorem must be 1 or 2");
}

double corollary6_printed_prefactor(double p) {
    return std::pow(std::pow(2.0, p + 1.0) / ((p + 1.0) * std::pow(6.0, p + 1.0)), 1.0 / p);
}

double corollary_rhs(Corollary c, int theorem, const Instance& inst, double fa_q, double fbm_q, Path path,
                     const quad::QuadSettings& quad) {
    const auto [lambda, mu] = corollary_weights(c);
    if (std::abs(inst.lambda_ - lambda) > 1e-15 || std::abs(inst.mu_ - mu) > 1e-15)
        throw ParameterError("instance weights do not match the " + corollary_label(c) + " triple");
    if (theorem != 1 && theorem != 2) throw ParameterError("theorem must be 1 or 2");
    inst.validate_weights();
    check_moments(fa_q, fbm_q);
    const double k = corollary_prefactor(c, theorem, inst.q);
    return assemble(inst, fa_q, fbm_q, k, k, weighted_terms(theorem, inst, path, quad));
}

std::pair<double, double> derivative_moments(const Instance& inst) {
    return {std::pow(std::abs(inst.f.derivative(inst.a)), inst.q),
            std::pow(std::abs(inst.f.derivative(inst.b / inst.m)), inst.q)};
}

convexity::ConvexityReport certify(const Instance& inst, const convexity::GridSpec* grid) {
    inst.validate();
    const FunctionSpec g = FunctionSpec::abs_derivative_pow(inst.f, inst.q);
    const convexity::GridSpec spec = grid ? *grid : convexity::GridSpec::over(inst.a, inst.b / inst.m);
    return convexity::check_harmonic_sm(g, inst.s, inst.m, spec);
}

Verdict check_theorem(const Instance& inst, int theorem, const quad::QuadSettings& quad, bool already_certified,
                      double margin_tol, double crosscheck_tol) {
    if (theorem != 1 && theorem != 2) throw ParameterError("theorem must be 1 or 2");
    inst.validate_weights();
    if (theorem == 2) conjugate_exponent(inst.q);
    if (!already_certified) {
        const auto report = certify(inst);
        if (!report.holds) {
            std::ostringstream os;
            os << "|f'|^q is not harmonically (s,m)-convex on [a, b/m] for " << inst.f.to_string()
               << " (worst defect " << report.worst_defect << ")";
            throw PreconditionError(os.str());
        }
    }

    const double p = theorem == 2 ? conjugate_exponent(inst.q) : 2.0;
    const std::array<int, 6> idx = theorem == 1 ? std::array{1, 2, 3, 4, 5, 6} : std::array{7, 8, 9, 10, 11, 12};

    Verdict v;
    v.theorem = theorem;
    v.path = Path::oracle;
    bool all_ok = true;
    for (int i : idx) {
        v.terms.push_back(crosscheck_B(i, inst, p, quad, crosscheck_tol));
        all_ok = all_ok && v.terms.back().status == TermStatus::ok;
    }

    const auto [fa_q, fbm_q] = derivative_moments(inst);
    auto rhs_from = [&](auto value_of) {
        const double e = theorem == 1 ? 1.0 - 1.0 / inst.q : 1.0 / p;
        const double w_left = std::pow(value_of(v.terms[0]), e);
        const double w_right = std::pow(value_of(v.terms[3]), e);
        return assemble(inst, fa_q, fbm_q, w_left, w_right,
                        {value_of(v.terms[1]), value_of(v.terms[2]), value_of(v.terms[4]), value_of(v.terms[5])});
    };

    v.lhs = std::abs(identity::corrected_If(inst, quad));
    v.rhs = rhs_from([](const BoundTerm& t) { return t.oracle; });
    if (all_ok) v.closed_rhs = rhs_from([](const BoundTerm& t) { return *t.closed_form; });
    v.margin = v.rhs - v.lhs;
    v.pass = v.margin >= -margin_tol;
    return v;
}

}  // namespace harmonia::bounds

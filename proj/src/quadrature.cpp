#include "harmonia/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include "harmonia/errors.hpp"

namespace harmonia::quad {

namespace {

// Kronrod abscissae on [0,1] half-line; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    double lo;
    double hi;
    double value;
    double err;
};

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const { return x.err < y.err; }
};

double eval_checked(const Integrand& f, double x) {
    const double y = f(x);
    if (!std::isfinite(y)) {
        std::ostringstream os;
        os.precision(17);
        os << "integrand is not finite at x = " << x;
        throw EvaluationError(os.str(), x);
    }
    return y;
}

Panel gauss_kronrod_15(const Integrand& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const double fc = eval_checked(f, center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_sum = std::abs(kronrod);

    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = eval_checked(f, center - dx);
        const double f2 = eval_checked(f, center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }

    const double value = kronrod * half;
    const double roundoff = 50.0 * kEps * abs_sum * std::abs(half);
    const double err = std::max(std::abs((kronrod - gauss) * half), roundoff);
    return {lo, hi, value, err};
}

void check_interval(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw DomainError("integration interval must satisfy lo < hi with finite endpoints");
}

}  // namespace

void QuadSettings::validate() const {
    if (!(abs_tol > 0.0)) throw ParameterError("QuadSettings.abs_tol must be > 0");
    if (!(rel_tol >= 0.0)) throw ParameterError("QuadSettings.rel_tol must be >= 0");
    if (max_subdivisions < 1) throw ParameterError("QuadSettings.max_subdivisions must be >= 1");
}

QuadResult integrate(const Integrand& f, double lo, double hi, const QuadSettings& settings) {
    settings.validate();
    check_interval(lo, hi);

    std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
    heap.push(gauss_kronrod_15(f, lo, hi));
    std::size_t evaluations = 15;

    double value = heap.top().value;
    double err = heap.top().err;

    auto tolerance = [&] { return std::max(settings.abs_tol, settings.rel_tol * std::abs(value)); };

    bool converged = err <= tolerance();
    while (!converged && heap.size() < settings.max_subdivisions) {
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(worst.lo < mid && mid < worst.hi)) break;  // panel at floating-point resolution
        heap.pop();

        const Panel left = gauss_kronrod_15(f, worst.lo, mid);
        const Panel right = gauss_kronrod_15(f, mid, worst.hi);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        converged = err <= tolerance();
    }

    // Re-sum to shed the drift of the running totals.
    value = 0.0;
    err = 0.0;
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
    for (const Panel& p : panels) {
        value += p.value;
        err += p.err;
    }
    converged = err <= tolerance();
    return {value, err, evaluations, converged};
}

namespace {

QuadResult tanh_sinh(const EndpointIntegrand& f, double lo, double hi, const QuadSettings& settings,
                     bool skip_rounded) {
    settings.validate();
    check_interval(lo, hi);

    // x = c + h*tanh(pi/2 sinh t). Distances to the endpoints are formed
    // directly from exp(-2u) so nodes near lo/hi keep full relative accuracy.
    constexpr double kHalfPi = std::numbers::pi / 2.0;
    constexpr double kTMax = 6.1;  // exp(-2u) reaches ~1e-300 here
    constexpr int kMaxLevel = 12;

    const double width = hi - lo;
    const double half = 0.5 * width;
    std::size_t evaluations = 0;

    auto eval = [&](double x, double from_lo, double to_hi) {
        ++evaluations;
        const double y = f(x, from_lo, to_hi);
        if (!std::isfinite(y)) {
            std::ostringstream os;
            os.precision(17);
            os << "integrand is not finite at x = " << x;
            throw EvaluationError(os.str(), x);
        }
        return y;
    };

    auto node_sum = [&](double t) {
        const double u = kHalfPi * std::sinh(std::abs(t));
        const double e = std::exp(-2.0 * u);
        const double weight = kHalfPi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
        if (t == 0.0) return weight * eval(lo + half, half, half);
        if (weight == 0.0) return 0.0;
        const double offset = half * (2.0 * e / (1.0 + e));  // half * (1 - tanh u)
        if (!(offset > 0.0)) return 0.0;
        const double x_lo = lo + offset;
        const double x_hi = hi - offset;
        double sum = 0.0;
        if (!skip_rounded || (x_lo > lo && x_lo < hi)) sum += weight * eval(x_lo, offset, width - offset);
        if (!skip_rounded || (x_hi < hi && x_hi > lo)) sum += weight * eval(x_hi, width - offset, offset);
        return sum;
    };

    double h = 1.0;
    double sum = node_sum(0.0);
    for (int k = 1; k * h <= kTMax; ++k) sum += node_sum(k * h);
    double estimate = half * h * sum;
    double err = std::numeric_limits<double>::infinity();
    bool converged = false;

    for (int level = 1; level <= kMaxLevel; ++level) {
        h *= 0.5;
        double added = 0.0;
        for (int k = 1; k * h <= kTMax; k += 2) added += node_sum(k * h);
        sum += added;
        const double next = half * h * sum;
        err = std::abs(next - estimate);
        estimate = next;
        const double tol = std::max(settings.abs_tol, settings.rel_tol * std::abs(estimate));
        if (level >= 3 && err <= tol) {
            converged = true;
            break;
        }
    }
    return {estimate, err, evaluations, converged};
}

}  // namespace

QuadResult integrate_de(const Integrand& f, double lo, double hi, const QuadSettings& settings) {
    // Nodes that round onto an endpoint are skipped: f only sees x.
    return tanh_sinh([&f](double x, double, double) { return f(x); }, lo, hi, settings, true);
}

QuadResult integrate_de_endpoint(const EndpointIntegrand& f, double lo, double hi, const QuadSettings& settings) {
    return tanh_sinh(f, lo, hi, settings, false);
}

QuadResult integrate_panels(const Integrand& f, const std::vector<double>& breaks,
                            const QuadSettings& settings) {
    if (breaks.size() < 2) throw DomainError("integrate_panels needs at least two break points");
    QuadSettings per_panel = settings;
    per_panel.abs_tol = settings.abs_tol / static_cast<double>(breaks.size() - 1);
    QuadResult total{0.0, 0.0, 0, true};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const QuadResult part = integrate(f, breaks[i], breaks[i + 1], per_panel);
        total.value += part.value;
        total.err_estimate += part.err_estimate;
        total.evaluations += part.evaluations;
        total.converged = total.converged && part.converged;
    }
    total.converged = total.converged &&
                      total.err_estimate <= std::max(settings.abs_tol, settings.rel_tol * std::abs(total.value));
    return total;
}

}  // namespace harmonia::quad

#include "harmonia/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "harmonia/errors.hpp"

namespace harmonia::convexity {

namespace {

void check_class(double s, double m) {
    if (!(s > 0.0 && s <= 1.0) || !(m > 0.0 && m <= 1.0))
        throw ParameterError("class parameters must satisfy s, m in (0, 1]");
}

void check_point(const FunctionSpec& f, double v, const char* what) {
    if (!(v > f.domain_lo()) || !std::isfinite(v)) {
        std::ostringstream os;
        os << what << " = " << v << " is outside the domain (" << f.domain_lo() << ", inf) of " << f.to_string();
        throw DomainError(os.str());
    }
}

struct Defect {
    double raw;
    double scale;
};

template <typename Combination>
Defect defect_at(const FunctionSpec& f, double x, double y, double t, double s, double m, Combination comb) {
    check_point(f, x, "x");
    check_point(f, y, "y");
    const double point = comb(x, y, t, m);
    check_point(f, point, "combination point");
    const double left = std::pow(t, s) * f.value(x);
    const double right = m * std::pow(1.0 - t, s) * f.value(y);
    return {f.value(point) - (left + right), std::max(1.0, std::abs(left) + std::abs(right))};
}

double arithmetic_point(double x, double y, double t, double m) { return t * x + m * (1.0 - t) * y; }

double node(double lo, double hi, std::size_t i, std::size_t n) {
    if (i + 1 == n) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

struct Worst {
    double defect = -std::numeric_limits<double>::infinity();
    std::size_t ix = 0, iy = 0, it = 0;
    std::size_t checked = 0;
};

template <typename Combination>
ConvexityReport sweep(const FunctionSpec& f, double s, double m, const GridSpec& grid, unsigned workers,
                      Combination comb) {
    check_class(s, m);
    grid.validate();
    workers = std::clamp(workers, 1u, static_cast<unsigned>(grid.nx));

    auto scan = [&](std::size_t ix_begin, std::size_t ix_end) {
        Worst w;
        for (std::size_t ix = ix_begin; ix < ix_end; ++ix) {
            const double x = node(grid.lo, grid.hi, ix, grid.nx);
            for (std::size_t iy = 0; iy < grid.ny; ++iy) {
                const double y = node(grid.lo, grid.hi, iy, grid.ny);
                for (std::size_t it = 0; it < grid.nt; ++it) {
                    const double t = node(0.0, 1.0, it, grid.nt);
                    const Defect d = defect_at(f, x, y, t, s, m, comb);
                    const double normalised = d.raw / d.scale;
                    ++w.checked;
                    // Strict comparison keeps the lexicographically first witness.
                    if (normalised > w.defect) w = {normalised, ix, iy, it, w.checked};
                }
            }
        }
        return w;
    };

    std::vector<Worst> parts(workers);
    if (workers == 1) {
        parts[0] = scan(0, grid.nx);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::jthread> pool;
        const std::size_t chunk = (grid.nx + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t b = std::min(grid.nx, w * chunk);
            const std::size_t e = std::min(grid.nx, b + chunk);
            pool.emplace_back([&, w, b, e] {
                try {
                    parts[w] = scan(b, e);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        pool.clear();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    Worst best;
    std::size_t checked = 0;
    for (const Worst& p : parts) {
        checked += p.checked;
        if (p.checked > 0 && p.defect > best.defect) best = p;
    }

    ConvexityReport report;
    report.worst_defect = best.defect;
    report.holds = best.defect <= kDefectTol;
    report.witness = {node(grid.lo, grid.hi, best.ix, grid.nx), node(grid.lo, grid.hi, best.iy, grid.ny),
                      node(0.0, 1.0, best.it, grid.nt)};
    report.checked = checked;
    return report;
}

}  // namespace

void GridSpec::validate() const {
    if (nx < 2 || ny < 2 || nt < 2) throw ParameterError("grid sample counts must be >= 2");
    if (!(lo > 0.0) || !(lo < hi) || !std::isfinite(hi)) throw ParameterError("grid interval must satisfy 0 < lo < hi");
}

double harmonic_point(double x, double y, double t, double m) {
    return m * x * y / (m * t * y + (1.0 - t) * x);
}

double harmonic_sm_defect(const FunctionSpec& f, double x, double y, double t, double s, double m) {
    check_class(s, m);
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t must lie in [0, 1]");
    return defect_at(f, x, y, t, s, m, harmonic_point).raw;
}

double sm_defect(const FunctionSpec& f, double x, double y, double t, double s, double m) {
    check_class(s, m);
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t must lie in [0, 1]");
    return defect_at(f, x, y, t, s, m, arithmetic_point).raw;
}

ConvexityReport check_harmonic_sm(const FunctionSpec& f, double s, double m, const GridSpec& grid, unsigned workers) {
    return sweep(f, s, m, grid, workers, harmonic_point);
}

ConvexityReport check_sm(const FunctionSpec& f, double s, double m, const GridSpec& grid, unsigned workers) {
    return sweep(f, s, m, grid, workers, arithmetic_point);
}

Classification classify(const FunctionSpec& f, double s, double m, const GridSpec& grid) {
    check_class(s, m);
    grid.validate();

    Classification c;
    const double lo = m * grid.lo;
    bool up = true;
    bool down = true;
    double prev = f.value(lo);
    for (std::size_t i = 1; i < kMonotoneSamples; ++i) {
        const double cur = f.value(node(lo, grid.hi, i, kMonotoneSamples));
        const double diff = cur - prev;
        if (diff < -kMonotoneTol) up = false;
        if (diff > kMonotoneTol) down = false;
        prev = cur;
    }
    c.nondecreasing = up;
    c.nonincreasing = down;
    c.monotone = up ? Monotonicity::nondecreasing : (down ? Monotonicity::nonincreasing : Monotonicity::neither);

    c.sm_report = check_sm(f, s, m, grid);
    c.harmonic_report = check_harmonic_sm(f, s, m, grid);
    c.sm_convex = c.sm_report.holds;
    c.harmonic_sm_convex = c.harmonic_report.holds;
    c.first_implication_ok = !(c.sm_convex && c.nondecreasing) || c.harmonic_sm_convex;
    c.second_implication_ok = !(c.harmonic_sm_convex && c.nonincreasing) || c.sm_convex;
    return c;
}

Prop2Result prop2_witness(const FunctionSpec& f, double a, double b, double s, double m, double x) {
    check_class(s, m);
    if (!(a > 0.0) || !(a < b)) throw DomainError("prop2_witness requires 0 < a < b");
    if (!(x >= a && x <= b)) throw DomainError("prop2_witness requires x in [a, b]");
    check_point(f, a / m, "a/m");
    check_point(f, b / m, "b/m");

    Prop2Result r;
    r.t = (b - x) / (b - a);
    const double ts = std::pow(r.t, s);
    const double us = m * std::pow(1.0 - r.t, s);
    r.lhs = f.value(a * b / (a + b - x));
    const double positive = ts * (f.value(a) + f.value(b)) + us * (f.value(a / m) + f.value(b / m));
    const double subtracted = f.value(a * b / x);
    r.rhs = positive - subtracted;
    const double scale = std::max({1.0, std::abs(ts * f.value(a)) + std::abs(ts * f.value(b)) +
                                            std::abs(us * f.value(a / m)) + std::abs(us * f.value(b / m)) +
                                            std::abs(subtracted)});
    r.holds = r.lhs <= r.rhs + kDefectTol * scale;
    return r;
}

ClassedSpec combine(const CombineOp& op, std::span<const ClassedSpec> inputs) {
    auto need = [&](std::size_t n, const char* name) {
        if (inputs.size() < n) throw ParameterError(std::string(name) + " needs at least " + std::to_string(n) + " inputs");
    };
    return std::visit(
        [&](const auto& o) -> ClassedSpec {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, MaxOf>) {
                need(1, "max");
                ClassedSpec out = inputs[0];
                for (std::size_t i = 1; i < inputs.size(); ++i) {
                    if (inputs[i].s != out.s || inputs[i].m != out.m)
                        throw ParameterError("max requires every input in the same (s,m) class");
                    out.f = FunctionSpec::max(out.f, inputs[i].f);
                }
                return out;
            } else if constexpr (std::is_same_v<T, SumOf>) {
                need(2, "sum");
                ClassedSpec out = inputs[0];
                for (std::size_t i = 1; i < inputs.size(); ++i) {
                    if (inputs[i].m != out.m) throw ParameterError("sum requires a common m");
                    out.f = FunctionSpec::sum(out.f, inputs[i].f);
                    out.s = std::min(out.s, inputs[i].s);
                }
                return out;
            } else if constexpr (std::is_same_v<T, ScaleBy>) {
                need(1, "scale");
                if (inputs.size() != 1) throw ParameterError("scale takes exactly one input");
                return {FunctionSpec::scale(o.factor, inputs[0].f), inputs[0].s, inputs[0].m};
            } else if constexpr (std::is_same_v<T, ComposeWith>) {
                if (inputs.size() != 1) throw ParameterError("compose takes exactly one inner function");
                const ClassedSpec& inner = inputs[0];
                if (inner.s != 1.0) throw ParameterError("compose needs a harmonically m-convex inner function (s = 1)");
                if (inner.m != o.outer.m) throw ParameterError("compose requires matching m");
                return {FunctionSpec::compose(o.outer.f, inner.f), o.outer.s, inner.m};
            } else {
                need(1, "sequence limit");
                std::vector<FunctionSpec> members;
                for (const ClassedSpec& c : inputs) {
                    if (c.s != inputs[0].s || c.m != inputs[0].m)
                        throw ParameterError("sequence members must share one (s,m) class");
                    members.push_back(c.f);
                }
                return {FunctionSpec::sequence(std::move(members), o.limit), inputs[0].s, inputs[0].m};
            }
        },
        op);
}

}  // namespace harmonia::convexity

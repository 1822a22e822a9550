#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "harmonia/errors.hpp"
#include "harmonia/quadrature.hpp"
#include "harmonia/specfun.hpp"

using namespace harmonia;
using specfun::AccuracyBudget;

namespace {

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

// Slow oracle: Gamma(x) = int_0^1 t^{x-1} e^{-t} dt + int_0^1 u^{-x-1} e^{-1/u} du.
double gamma_by_integral(double x) {
    quad::QuadSettings s;
    s.abs_tol = 1e-14;
    s.rel_tol = 1e-13;
    const auto head = quad::integrate_de([x](double t) { return std::pow(t, x - 1.0) * std::exp(-t); }, 0.0, 1.0, s);
    const auto tail = quad::integrate_de(
        [x](double u) { return std::exp(-1.0 / u - (x + 1.0) * std::log(u)); }, 0.0, 1.0, s);
    return head.value + tail.value;
}

// Independent series oracle in long double with explicit Pochhammer products.
long double series_oracle(double a, double b, double c, double z, int terms) {
    long double sum = 0.0L;
    for (int k = 0; k < terms; ++k) {
        long double num = 1.0L;
        for (int j = 0; j < k; ++j) num *= (a + j) * (b + j) / ((c + j) * (j + 1.0L)) * z;
        sum += num;
    }
    return sum;
}

}  // namespace

TEST_CASE("gamma: golden values") {
    CHECK(specfun::gamma(1.0) == 1.0);
    CHECK(specfun::gamma(5.0) == 24.0);
    CHECK(rel(specfun::gamma(0.5), 1.7724538509055160) <= 1e-14);
    CHECK(rel(specfun::gamma(0.5), std::sqrt(std::numbers::pi)) <= 1e-14);
    CHECK_THROWS_AS(specfun::gamma(0.0), DomainError);
    CHECK_THROWS_AS(specfun::gamma(-1.5), DomainError);
}

TEST_CASE("gamma: recurrence on the 0.1..10 grid") {
    for (int i = 1; i <= 100; ++i) {
        const double x = 0.1 * i;
        CAPTURE(x);
        CHECK(rel(specfun::gamma(x + 1.0), x * specfun::gamma(x)) <= 1e-12);
    }
}

TEST_CASE("gamma: agrees with the defining integral") {
    for (double x : {0.3, 0.75, 1.5, 2.25, 3.7, 6.0}) {
        CAPTURE(x);
        CHECK(rel(specfun::gamma(x), gamma_by_integral(x)) <= 1e-9);
    }
}

TEST_CASE("log_gamma matches log(gamma)") {
    for (double x : {0.2, 1.0, 2.5, 10.0, 50.0, 150.0}) CHECK(std::abs(specfun::log_gamma(x) - std::log(specfun::gamma(x))) <= 1e-12 * std::max(1.0, std::abs(std::log(specfun::gamma(x)))));
}

TEST_CASE("beta: golden values and errors") {
    CHECK(rel(specfun::beta(1, 1), 1.0) <= 1e-14);
    CHECK(rel(specfun::beta(2, 3), 1.0 / 12.0) <= 1e-14);
    CHECK(rel(specfun::beta(1, 2.5), 0.4) <= 1e-14);
    CHECK_THROWS_AS(specfun::beta(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(specfun::beta(1.0, -2.0), DomainError);
    CHECK(std::isfinite(specfun::beta(200.0, 300.0)));
}

TEST_CASE("beta: symmetric on random pairs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> arg(1e-3, 20.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = arg(rng);
        const double b = arg(rng);
        CHECK(rel(specfun::beta(a, b), specfun::beta(b, a)) <= 1e-13);
    }
}

TEST_CASE("beta: agrees with its defining integral (tanh-sinh)") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> arg(0.05, 4.0);
    quad::QuadSettings s;
    s.abs_tol = 1e-12;
    s.rel_tol = 1e-12;
    for (int i = 0; i < 60; ++i) {
        const double a = arg(rng);
        const double b = arg(rng);
        const auto r = quad::integrate_de_endpoint(
            [a, b](double, double t, double one_minus_t) {
                return std::pow(t, a - 1.0) * std::pow(one_minus_t, b - 1.0);
            },
            0.0, 1.0, s);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(std::abs(specfun::beta(a, b) - r.value) <= 1e-9);
    }
}

TEST_CASE("hyp2f1: worked examples") {
    CHECK(specfun::hyp2f1(3.0, 1.0, 2.5, 0.0) == 1.0);
    CHECK(specfun::hyp2f1(-2.0, 0.5, 4.0, 0.0) == 1.0);

    const double v = specfun::hyp2f1(1, 1, 2, 0.5);
    CHECK(rel(v, 2.0 * std::log(2.0)) <= 1e-10);
    CHECK(rel(v, static_cast<double>(series_oracle(1, 1, 2, 0.5, 200))) <= 1e-10);
    CHECK(v == doctest::Approx(1.3862943611).epsilon(1e-10));

    const double w = specfun::hyp2f1(2, 1, 3, 0.5);
    CHECK(rel(w, static_cast<double>(series_oracle(2, 1, 3, 0.5, 200))) <= 1e-10);
}

TEST_CASE("hyp2f1: Euler and series routes agree on the coefficient grid") {
    for (double q = 1.0; q <= 5.0; q += 0.5) {
        for (double s : {0.25, 0.5, 0.75, 1.0}) {
            const double patterns[][2] = {{1, s + 3}, {2, s + 3}, {1, s + 2}, {s + 1, s + 3}, {s + 1, s + 2}, {s + 2, s + 3}};
            for (const auto& pg : patterns) {
                for (double z : {0.05, 0.2, 0.4, 0.6, 0.75, 0.9}) {
                    const auto paths = specfun::hyp2f1_paths(2 * q, pg[0], pg[1], z);
                    CAPTURE(q);
                    CAPTURE(pg[0]);
                    CAPTURE(pg[1]);
                    CAPTURE(z);
                    CHECK(rel(paths.euler, paths.series) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("hyp2f1: nondecreasing in z for positive parameters") {
    for (double a : {1.0, 2.0, 5.0}) {
        for (double s : {0.25, 1.0}) {
            double prev = 0.0;
            for (int i = 0; i <= 18; ++i) {
                const double z = 0.05 * i;
                const double v = specfun::hyp2f1(a, s + 1, s + 3, z);
                CHECK(v >= prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("hyp2f1: singular Euler weights go through tanh-sinh") {
    // beta_ < 1: t^{-1/2} endpoint singularity
    const auto p = specfun::hyp2f1_paths(1.0, 0.5, 1.5, 0.5);
    CHECK(rel(p.euler, p.series) <= 1e-10);
    // 2F1(1/2, 1; 3/2; z^2) = atanh(z)/z  with a = 1, b = 1/2
    CHECK(rel(specfun::hyp2f1(1.0, 0.5, 1.5, 0.25), std::atanh(0.5) / 0.5) <= 1e-10);
}

TEST_CASE("hyp2f1: domain and accuracy errors") {
    CHECK_THROWS_AS(specfun::hyp2f1(1, 2, 2, 0.5), DomainError);
    CHECK_THROWS_AS(specfun::hyp2f1(1, 0, 2, 0.5), DomainError);
    CHECK_THROWS_AS(specfun::hyp2f1(1, 1, 2, 1.0), DomainError);
    CHECK_THROWS_AS(specfun::hyp2f1(1, 1, 2, -0.1), DomainError);

    AccuracyBudget starved;
    starved.max_work = 3;
    try {
        specfun::hyp2f1(4.0, 1.0, 3.0, 0.8, starved);
        FAIL("expected AccuracyError");
    } catch (const AccuracyError& e) {
        CHECK(std::isfinite(e.primary()));
    }

    AccuracyBudget bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(specfun::hyp2f1(1, 1, 2, 0.5, bad), ParameterError);
}

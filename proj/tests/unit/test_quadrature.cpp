#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mdnz/errors.hpp"
#include "mdnz/quadrature.hpp"

using namespace mdnz;

namespace {
double sc_density(double x) {
    const double d = 4.0 - x * x;
    return d > 0.0 ? std::sqrt(d) / (2.0 * M_PI) : 0.0;
}
}  // namespace

TEST_CASE("semicircle mass integrates to one") {
    const double v = quad::adaptive_integral(sc_density, -2.0, 2.0, 1e-10);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cube of the semicircle has the closed-form integral") {
    // Antiderivative of (4 - x^2)^{3/2} gives 3/(4 pi^2).
    const double v = quad::adaptive_integral(
        [](double x) {
            const double r = sc_density(x);
            return r * r * r;
        },
        -2.0, 2.0, 1e-10);
    CHECK(v == doctest::Approx(3.0 / (4.0 * M_PI * M_PI)).epsilon(1e-9));
    CHECK(v == doctest::Approx(0.0759909).epsilon(1e-5));
}

TEST_CASE("integrable log singularity at the endpoint") {
    const double v =
        quad::adaptive_integral([](double x) { return std::log(x); }, 0.0, 1.0,
                                1e-10);
    CHECK(v == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("sqrt-edge substitution handles hard edges") {
    const double v = quad::adaptive_integral_sqrt_edges(sc_density, -2.0, 2.0,
                                                        quad::Options{});
    CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two-tolerance agreement") {
    auto f = [](double x) { return std::exp(-x) * std::cos(5.0 * x); };
    for (double tol : {1e-6, 1e-8}) {
        const double a = quad::adaptive_integral(f, 0.0, 3.0, tol);
        const double b = quad::adaptive_integral(f, 0.0, 3.0, tol / 10.0);
        CHECK(std::abs(a - b) <= 10.0 * tol * std::max(std::abs(b), 1e-3));
    }
}

TEST_CASE("non-integrable singularity reports the failure with an estimate") {
    CHECK_THROWS_AS(
        quad::adaptive_integral([](double x) { return 1.0 / x; }, 0.0, 1.0,
                                1e-9),
        accuracy_error);
    try {
        quad::adaptive_integral([](double x) { return 1.0 / x; }, 0.0, 1.0,
                                1e-9);
    } catch (const accuracy_error& e) {
        CHECK(std::isfinite(e.best_estimate));
        CHECK(e.best_estimate > 10.0);
    }
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const auto [x, w] = quad::gauss_legendre(8);
    double m0 = 0.0, m2 = 0.0, m14 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        m0 += w[i];
        m2 += w[i] * x[i] * x[i];
        m14 += w[i] * std::pow(x[i], 14);
    }
    CHECK(m0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(m14 == doctest::Approx(2.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("gauss-hermite expectation of gaussian moments") {
    CHECK(quad::gauss_expectation([](double z) { return z * z; }) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quad::gauss_expectation([](double z) { return z * z * z * z; }) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(quad::gauss_expectation([](double z) { return std::cosh(z); }) ==
          doctest::Approx(std::exp(0.5)).epsilon(1e-12));
}

TEST_CASE("reversed bounds flip the sign") {
    const double a = quad::adaptive_integral(sc_density, -2.0, 2.0, 1e-9);
    const double b = quad::adaptive_integral(sc_density, 2.0, -2.0, 1e-9);
    CHECK(a == doctest::Approx(-b).epsilon(1e-12));
}

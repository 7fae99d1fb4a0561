#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mdnz/errors.hpp"
#include "mdnz/measure.hpp"

using namespace mdnz;

TEST_CASE("point mass convolves to the semicircle") {
    const auto fc = free_convolve_semicircle(delta_measure(0.0));
    REQUIRE(fc.density.support().size() == 1);
    CHECK(fc.density.support()[0].lo == doctest::Approx(-2.0).epsilon(1e-8));
    CHECK(fc.density.support()[0].hi == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(fc.density.density(0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-9));
    CHECK(fc.density.density(1.0) ==
          doctest::Approx(std::sqrt(3.0) / (2.0 * M_PI)).epsilon(1e-9));

    // Subordination functions of the point mass: v = sqrt(1-u^2), psi = 2u.
    for (std::size_t i = 0; i < fc.map.u_grid.size(); ++i) {
        const double u = fc.map.u_grid[i];
        if (std::abs(u) < 0.95) {
            CHECK(fc.map.v_values[i] ==
                  doctest::Approx(std::sqrt(1.0 - u * u)).epsilon(1e-9));
            CHECK(fc.map.psi_values[i] ==
                  doctest::Approx(2.0 * u).epsilon(1e-9));
        }
    }
}

TEST_CASE("two-atom input reproduces the known center value and split") {
    const double gamma = 0.5;
    const auto fc = free_convolve_semicircle(
        scale_measure(rademacher_spectrum(), std::sqrt(gamma)));
    CHECK(fc.density.density(0.0) ==
          doctest::Approx(std::sqrt(1.0 - gamma) / M_PI).epsilon(1e-8));
    CHECK(fc.density.support().size() == 1);

    const auto fc2 = free_convolve_semicircle(
        scale_measure(rademacher_spectrum(), std::sqrt(2.0)));
    CHECK(fc2.density.support().size() == 2);
}

TEST_CASE("second moment grows by exactly one") {
    const std::vector<SpectralMeasure> inputs = {
        scale_measure(rademacher_spectrum(), 1.3),
        uniform_measure(1.0, 2.0),
        bernoulli_spectrum(0.7),
    };
    for (const auto& m : inputs) {
        const auto fc = free_convolve_semicircle(m);
        CHECK(fc.density.total_mass() == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(fc.density.second_moment() ==
              doctest::Approx(m.second_moment() + 1.0).epsilon(1e-5));
    }
}

TEST_CASE("subordination map invariants") {
    const auto fc = free_convolve_semicircle(uniform_measure(-1.0, 1.0));
    for (std::size_t i = 0; i < fc.map.u_grid.size(); ++i) {
        CHECK(fc.map.v_values[i] >= 0.0);
        CHECK(fc.map.v_values[i] <= 1.0);
        if (i > 0) {
            CHECK(fc.map.u_grid[i] > fc.map.u_grid[i - 1]);
            CHECK(fc.map.psi_values[i] >=
                  fc.map.psi_values[i - 1] - 1e-12);
        }
    }
}

TEST_CASE("rejects non-normalized input") {
    CHECK_THROWS_AS(
        free_convolve_semicircle(SpectralMeasure::from_atoms({{0.0, 0.5}})),
        invalid_parameter);
    CHECK_THROWS_AS(free_convolve_semicircle(SpectralMeasure{}),
                    invalid_parameter);
}

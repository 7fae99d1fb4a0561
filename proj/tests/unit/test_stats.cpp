#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mdnz/errors.hpp"
#include "mdnz/stats.hpp"

using namespace mdnz;

TEST_CASE("wasserstein2 basic values") {
    CHECK(wasserstein2_empirical({3.0, 1.0, 2.0}, {2.0, 3.0, 1.0}) ==
          doctest::Approx(0.0));
    CHECK(wasserstein2_empirical({0.0, 1.0}, {1.0, 0.0}) ==
          doctest::Approx(0.0));
    CHECK(wasserstein2_empirical({0.0, 0.0}, {1.0, 1.0}) ==
          doctest::Approx(1.0));
    CHECK_THROWS_AS(wasserstein2_empirical({1.0}, {1.0, 2.0}),
                    invalid_parameter);
}

TEST_CASE("wasserstein2 is a metric on sorted multisets") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 20);
        std::vector<double> u(n), v(n), w(n);
        for (int i = 0; i < n; ++i) {
            u[i] = normal(rng);
            v[i] = normal(rng);
            w[i] = normal(rng);
        }
        const double duv = wasserstein2_empirical(u, v);
        const double dvu = wasserstein2_empirical(v, u);
        const double duw = wasserstein2_empirical(u, w);
        const double dwv = wasserstein2_empirical(w, v);
        CHECK(duv == doctest::Approx(dvu).epsilon(1e-14));  // symmetry
        CHECK(wasserstein2_empirical(u, u) == doctest::Approx(0.0));
        CHECK(duv <= duw + dwv + 1e-12);  // triangle inequality
    }
}

TEST_CASE("histogram integrates to one") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal;
    std::vector<double> xs(500);
    for (auto& x : xs) x = normal(rng);
    const auto hist = spectral_histogram(xs, 40);
    double mass = 0.0;
    for (const auto& b : hist) mass += b.density * (b.hi - b.lo);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(spectral_histogram({}, 10), invalid_parameter);
    CHECK_THROWS_AS(spectral_histogram({1.0}, 0), invalid_parameter);
}

TEST_CASE("ks distance against atoms and densities") {
    CHECK(ks_distance({0.0}, delta_measure(0.0)) == doctest::Approx(0.0));

    // Uniform sample quantiles vs the uniform law.
    std::vector<double> grid;
    const int n = 2000;
    for (int i = 0; i < n; ++i) grid.push_back((i + 0.5) / n);
    CHECK(ks_distance(grid, uniform_measure(0.0, 1.0)) < 1e-3);

    // A sample shifted off the law has visible distance.
    std::vector<double> shifted = grid;
    for (auto& x : shifted) x += 0.3;
    CHECK(ks_distance(shifted, uniform_measure(0.0, 1.0)) >
          doctest::Approx(0.29));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "mdnz/ensemble.hpp"
#include "mdnz/errors.hpp"
#include "mdnz/matrix_io.hpp"
#include "mdnz/stats.hpp"

using namespace mdnz;

TEST_CASE("goe sampling is deterministic and symmetric") {
    const auto a = sample_goe(300, 99);
    const auto b = sample_goe(300, 99);
    CHECK(a.entries() == b.entries());  // bitwise
    CHECK(a.entries() == a.entries().transpose());
    const auto c = sample_goe(300, 100);
    CHECK(a.entries() != c.entries());
    CHECK_THROWS_AS(sample_goe(0, 1), invalid_parameter);
}

TEST_CASE("goe second moment and spectral edge") {
    const auto z = sample_goe(2000, 42);
    const double m2 = z.entries().squaredNorm() / 2000.0;
    CHECK(m2 > 0.95);
    CHECK(m2 < 1.05);
    const auto eigs = z.eigenvalues();
    CHECK(std::abs(eigs.front()) < 2.2);
    CHECK(std::abs(eigs.back()) < 2.2);
    CHECK(ks_distance(eigs, semicircle(1.0)) < 0.05);
}

TEST_CASE("goe spectrum converges to the semicircle with n") {
    double prev = 1.0;
    for (int n : {200, 800, 3200}) {
        const double ks =
            ks_distance(sample_goe(n, 7).eigenvalues(), semicircle(1.0));
        CHECK(ks < prev + 0.02);  // monotone within noise
        prev = ks;
    }
    CHECK(prev < 0.02);
}

TEST_CASE("haar frames are orthogonal and sign-fixed") {
    const int n = 500;
    const auto q = sample_haar_orthogonal(n, 5);
    const double residual =
        (q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).norm();
    CHECK(residual < 1e-10);

    // First column is uniform on the sphere: entry mean near zero.
    double mean = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        const auto qt = sample_haar_orthogonal(n, 1000 + t);
        mean += qt.col(0).sum();
    }
    mean /= n * trials;
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n) * trials));
}

TEST_CASE("haar law is invariant under row permutation") {
    // Entry marginals of a permuted row match the top row across seeds.
    const int n = 60, reps = 400;
    std::vector<double> top, permuted;
    for (int t = 0; t < reps; ++t) {
        const auto q = sample_haar_orthogonal(n, 5000 + t);
        top.push_back(std::sqrt(n) * q(0, 0));
        permuted.push_back(std::sqrt(n) * q(n / 2, 0));
    }
    std::sort(top.begin(), top.end());
    std::sort(permuted.begin(), permuted.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < top.size() && j < permuted.size()) {
        if (top[i] <= permuted[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / top.size() -
                                 static_cast<double>(j) / permuted.size()));
    }
    CHECK(d < 1.36 * std::sqrt(2.0 / reps) * 1.5);  // ~5% level with slack
}

TEST_CASE("rotation invariant signals from explicit eigenvalues") {
    CHECK(sample_rot_inv_signal(50, std::vector<double>(10, 0.0), 1)
              .entries()
              .isZero());

    const int n = 1000;
    std::vector<double> pm(n);
    for (int i = 0; i < n; ++i) pm[i] = i < n / 2 ? -1.0 : 1.0;
    const auto s = sample_rot_inv_signal(n, pm, 2);
    CHECK(ks_distance(s.eigenvalues(), rademacher_spectrum()) < 0.05);
    CHECK(s.eigen_cached());  // full-rank path prefills the cache

    const int m = static_cast<int>(std::sqrt(n));
    const auto sub = sample_rot_inv_signal(n, std::vector<double>(m, 1.0), 3);
    const auto eigs = sub.eigenvalues();
    const double scale = std::abs(eigs.back());
    int rank = 0;
    for (double l : eigs)
        if (std::abs(l) > 1e-10 * scale) ++rank;
    CHECK(rank == m);

    CHECK_THROWS_AS(sample_rot_inv_signal(5, std::vector<double>(6, 1.0), 1),
                    invalid_parameter);
}

TEST_CASE("prefilled eigen cache matches a fresh decomposition") {
    const int n = 120;
    std::vector<double> lam(n);
    for (int i = 0; i < n; ++i) lam[i] = std::sin(0.37 * i);
    const auto s = sample_rot_inv_signal(n, lam, 4);
    REQUIRE(s.eigen_cached());
    const auto& cached = s.eigen();
    // Values sorted ascending and orthonormal vectors.
    for (int i = 1; i < n; ++i) CHECK(cached.values(i) >= cached.values(i - 1));
    const double ortho =
        (cached.vectors.transpose() * cached.vectors -
         Eigen::MatrixXd::Identity(n, n))
            .norm();
    CHECK(ortho < 1e-8);
    // Reconstruction matches the matrix itself.
    const Eigen::MatrixXd rebuilt = cached.vectors *
                                    cached.values.asDiagonal() *
                                    cached.vectors.transpose();
    CHECK((rebuilt - s.entries()).norm() < 1e-10);
}

TEST_CASE("factor signals") {
    const auto prior = ScalarPrior::rademacher();
    const auto fs = sample_factor_signal(100, 5, prior, 9);
    for (int j = 0; j < 5; ++j)
        for (int i = 0; i < 100; ++i)
            CHECK(std::abs(fs.x(i, j)) == doctest::Approx(1.0));
    CHECK((fs.s.entries() - fs.x * fs.x.transpose() / 100.0).norm() < 1e-12);

    // m = 1: rank one with eigenvalue ||x||^2 / n near rho.
    const auto r1 = sample_factor_signal(2000, 1, ScalarPrior::gaussian(), 10);
    const auto eigs = r1.s.eigenvalues();
    CHECK(eigs.back() == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(eigs[eigs.size() - 2]) < 1e-10);

    // Numerical rank is exactly min(m, n) for gaussian entries.
    const auto fs2 = sample_factor_signal(300, 40, ScalarPrior::gaussian(), 11);
    const auto e2 = fs2.s.eigenvalues();
    int rank = 0;
    for (double l : e2)
        if (std::abs(l) > 1e-10 * e2.back()) ++rank;
    CHECK(rank == 40);
}

TEST_CASE("sub-linear wishart eigenvalues cluster near one") {
    const int n = 2500;
    const int m = static_cast<int>(std::sqrt(n));
    const auto fs = sample_factor_signal(n, m, ScalarPrior::gaussian(), 21);
    auto eigs = fs.s.eigenvalues();
    std::sort(eigs.begin(), eigs.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    int near = 0;
    for (int i = 0; i < m; ++i)
        if (std::abs(eigs[i] - 1.0) < 0.32) ++near;
    // Marchenko-Pastur spread of the nonzero block is (1 +- sqrt(m/n))^2.
    CHECK(near >= static_cast<int>(0.95 * m));
}

TEST_CASE("observation channel") {
    const auto s = sample_rot_inv_signal(200, std::vector<double>(5, 1.0), 1);
    const auto y0 = observe(s, 0.0, NoiseSpec::wigner(), 77);
    const auto z = sample_goe(200, 77);
    CHECK(y0.entries() == z.entries());  // gamma = 0 passes the noise through
    CHECK_THROWS_AS(observe(s, -1.0, NoiseSpec::wigner(), 1),
                    invalid_parameter);
}

TEST_CASE("single spike detaches at the predicted location") {
    const int n = 2000;
    const auto s = sample_rot_inv_signal(n, std::vector<double>(1, 1.0), 3);
    const auto y = observe(s, 4.0, NoiseSpec::wigner(), 5);
    CHECK(y.eigenvalues().back() == doctest::Approx(2.5).epsilon(0.04));
    const auto y2 = observe(s, 0.25, NoiseSpec::wigner(), 6);
    CHECK(y2.eigenvalues().back() == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("uniform-spectrum noise draws i.i.d. eigenvalues") {
    const auto s = sample_rot_inv_signal(400, std::vector<double>(1, 0.0), 1);
    const auto y = observe(s, 0.0, NoiseSpec::uniform_spectrum(1.0, 2.0), 9);
    const auto eigs = y.eigenvalues();
    CHECK(eigs.front() > 0.99);
    CHECK(eigs.back() < 2.01);
    CHECK(ks_distance(eigs, uniform_measure(1.0, 2.0)) < 0.1);
}

TEST_CASE("noise spec parsing") {
    CHECK(NoiseSpec::parse("wigner").kind == NoiseSpec::Kind::wigner);
    const auto u = NoiseSpec::parse("uniform:1,2");
    CHECK(u.support().lo == doctest::Approx(1.0));
    CHECK(u.support().hi == doctest::Approx(2.0));
    const auto r = NoiseSpec::parse("rademacher");
    CHECK(r.kind == NoiseSpec::Kind::rot_inv);
    CHECK(r.support().lo == doctest::Approx(-1.0));
    CHECK_THROWS_AS(NoiseSpec::parse("uniform:1"), invalid_parameter);
}

TEST_CASE("seed derivation separates roles and trials") {
    const auto a = derive_seed(1, 0, "signal");
    CHECK(a == derive_seed(1, 0, "signal"));
    CHECK(a != derive_seed(1, 1, "signal"));
    CHECK(a != derive_seed(1, 0, "noise"));
    CHECK(a != derive_seed(2, 0, "signal"));
}

TEST_CASE("matrix container round trip") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "mdnz_io_test";
    fs::create_directories(dir);

    const auto m = sample_goe(37, 123);
    const std::string bin = (dir / "m.mdnz").string();
    save_matrix(bin, m);
    const auto back = load_matrix(bin);
    CHECK(back.entries() == m.entries());  // bitwise through the container

    const std::string csv = (dir / "m.csv").string();
    save_matrix_csv(csv, m);
    const auto csv_back = load_matrix_csv(csv);
    CHECK((csv_back.entries() - m.entries()).norm() < 1e-12);

    CHECK_THROWS_AS(load_matrix(csv), invalid_parameter);  // bad magic
    CHECK_THROWS_AS(load_matrix((dir / "absent.mdnz").string()),
                    invalid_parameter);
    fs::remove_all(dir);
}

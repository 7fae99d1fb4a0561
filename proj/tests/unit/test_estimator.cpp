#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mdnz/ensemble.hpp"
#include "mdnz/errors.hpp"
#include "mdnz/estimator.hpp"
#include "mdnz/theory.hpp"

using namespace mdnz;

TEST_CASE("oracle on a 2x2 brute-force case") {
    Eigen::MatrixXd y(2, 2);
    y << 2.0, 0.0, 0.0, 1.0;
    Eigen::MatrixXd s(2, 2);
    s << 1.0, 1.0, 1.0, 1.0;
    const auto res = oracle(SymmetricMatrixInstance(y),
                            SymmetricMatrixInstance(s));
    // Eigenvectors of Y are e1, e2; xi_i = e_i^T S e_i = 1.
    CHECK(res.xi[0] == doctest::Approx(1.0));
    CHECK(res.xi[1] == doctest::Approx(1.0));
}

TEST_CASE("oracle of the observation itself returns its eigenvalues") {
    const auto y = sample_goe(80, 3);
    const auto res = oracle(y, y);
    const auto& vals = y.eigen().values;
    for (int i = 0; i < 80; ++i)
        CHECK(res.xi[i] == doctest::Approx(vals(i)).epsilon(1e-10));
    CHECK_THROWS_AS(oracle(y, sample_goe(40, 3)), invalid_parameter);
}

TEST_CASE("sub-linear thresholding function values") {
    // Evaluate through a tiny matrix whose eigenvalues are the probes.
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.5;
    d(2, 2) = -3.0;
    const auto res =
        rie_sublinear(SymmetricMatrixInstance(d), 4.0, NoiseSpec::wigner());
    // Ascending eigenvalues: -3, 1.5, 3.
    CHECK(res.xi[0] == doctest::Approx(-std::sqrt(5.0) / 2.0).epsilon(1e-12));
    CHECK(res.xi[1] == doctest::Approx(0.0));
    CHECK(res.xi[2] == doctest::Approx(std::sqrt(5.0) / 2.0).epsilon(1e-12));

    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(2, 2);
    d2(0, 0) = 3.0;
    d2(1, 1) = 2.0;  // exactly on the support edge -> 0
    const auto res2 = rie_sublinear(SymmetricMatrixInstance(d2), 1.0,
                                    NoiseSpec::uniform_spectrum(1.0, 2.0));
    CHECK(res2.xi[0] == doctest::Approx(0.0));
    CHECK(res2.xi[1] == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("generic-noise thresholding matches the uniform closed form") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 0.5;
    const SymmetricMatrixInstance y(d);
    const auto closed =
        rie_sublinear(y, 1.0, NoiseSpec::uniform_spectrum(1.0, 2.0));
    const auto generic =
        rie_sublinear(y, 1.0, NoiseSpec::rot_inv(uniform_measure(1.0, 2.0)));
    for (int i = 0; i < 2; ++i)
        CHECK(closed.xi[i] == doctest::Approx(generic.xi[i]).epsilon(1e-7));
}

TEST_CASE("density-mode shrinkage is linear for semicircular data") {
    // rho_Y = sc(1+gamma) gives xi = sqrt(gamma) lambda / (1+gamma).
    const double gamma = 3.0;
    const auto rho_y = semicircle(1.0 + gamma);
    const auto y = sample_goe(400, 17);  // its spectrum sits inside [-4, 4]
    Eigen::MatrixXd scaled = 2.0 * y.entries();
    const SymmetricMatrixInstance y2(std::move(scaled));
    const auto res = rie_linear(y2, gamma, HilbertMode::density, &rho_y);
    const auto& vals = y2.eigen().values;
    for (int i = 0; i < y2.dim(); ++i) {
        CHECK(res.xi[i] == doctest::Approx(std::sqrt(gamma) * vals(i) /
                                           (1.0 + gamma))
                               .epsilon(1e-6)
                               .scale(1.0));
    }
    CHECK_THROWS_AS(rie_linear(y2, gamma, HilbertMode::density, nullptr),
                    invalid_parameter);
    CHECK_THROWS_AS(rie_linear(y2, 0.0, HilbertMode::empirical),
                    invalid_parameter);
}

TEST_CASE("empirical and density modes agree eigenvalue-wise") {
    const int n = 2000;
    std::vector<double> pm(n);
    for (int i = 0; i < n; ++i) pm[i] = i < n / 2 ? -1.0 : 1.0;
    const double gamma = 1.0;
    const auto s = sample_rot_inv_signal(n, pm, 31);
    const auto y = observe(s, gamma, NoiseSpec::wigner(), 32);
    const auto rho_y = rademacher_rho_y(gamma);
    const auto emp = rie_linear(y, gamma, HilbertMode::empirical);
    const auto den = rie_linear(y, gamma, HilbertMode::density, &rho_y);
    double rms = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = emp.xi[i] - den.xi[i];
        rms += d * d;
    }
    rms = std::sqrt(rms / n);
    CHECK(rms < 0.05);
}

TEST_CASE("estimators are rotation invariant") {
    const int n = 60;
    const auto s = sample_rot_inv_signal(n, std::vector<double>(6, 1.5), 41);
    const auto y = observe(s, 2.0, NoiseSpec::wigner(), 42);
    const auto o = sample_haar_orthogonal(n, 43);
    Eigen::MatrixXd roty = o * y.entries() * o.transpose();
    const SymmetricMatrixInstance y_rot(0.5 * (roty + roty.transpose()));

    const auto direct = rie_sublinear(y, 2.0, NoiseSpec::wigner());
    const auto rotated = rie_sublinear(y_rot, 2.0, NoiseSpec::wigner());
    const Eigen::MatrixXd back =
        o.transpose() * rotated.estimate.entries() * o;
    CHECK((back - direct.estimate.entries()).norm() < 1e-8);

    const auto direct_l = rie_linear(y, 2.0, HilbertMode::empirical);
    const auto rotated_l = rie_linear(y_rot, 2.0, HilbertMode::empirical);
    const Eigen::MatrixXd back_l =
        o.transpose() * rotated_l.estimate.entries() * o;
    CHECK((back_l - direct_l.estimate.entries()).norm() < 1e-8);
}

TEST_CASE("shrinkage result reconstructs from the observation basis") {
    const auto y = sample_goe(100, 55);
    const auto res = rie_linear(y, 1.5, HilbertMode::empirical);
    const auto& eig = y.eigen();
    Eigen::VectorXd xi(100);
    for (int i = 0; i < 100; ++i) xi(i) = res.xi[i];
    const Eigen::MatrixXd rebuilt =
        eig.vectors * xi.asDiagonal() * eig.vectors.transpose();
    CHECK((rebuilt - res.estimate.entries()).norm() /
              std::max(1.0, res.estimate.entries().norm()) <
          1e-10);
}

TEST_CASE("oracle dominates the other shrinkers realization-wise") {
    const int n = 500;
    const int m = 22;
    const auto s = sample_rot_inv_signal(n, std::vector<double>(m, 1.0), 61);
    const auto y = observe(s, 3.0, NoiseSpec::wigner(), 62);
    const double mse_oracle =
        mse(s, oracle(y, s).estimate, Normalization::per_rank, m);
    const double mse_sub = mse(
        s, rie_sublinear(y, 3.0, NoiseSpec::wigner()).estimate,
        Normalization::per_rank, m);
    const double mse_lin =
        mse(s, rie_linear(y, 3.0, HilbertMode::empirical).estimate,
            Normalization::per_rank, m);
    CHECK(mse_oracle <= mse_sub + 1e-12);
    CHECK(mse_oracle <= mse_lin + 1e-12);
}

TEST_CASE("mse normalizations") {
    const auto s = sample_rot_inv_signal(64, std::vector<double>(64, 1.0), 7);
    CHECK(mse(s, s, Normalization::per_dim) == doctest::Approx(0.0));
    const SymmetricMatrixInstance zero(Eigen::MatrixXd::Zero(64, 64));
    CHECK(mse(s, zero, Normalization::per_dim) == doctest::Approx(1.0));
    CHECK(mse(s, zero, Normalization::per_rank, 64) ==
          doctest::Approx(mse(s, zero, Normalization::per_dim)));
    CHECK_THROWS_AS(mse(s, zero, Normalization::per_rank, 0),
                    invalid_parameter);
}

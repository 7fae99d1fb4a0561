#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mdnz/measure.hpp"
#include "mdnz/prior.hpp"

namespace mdnz {

// Stable per-trial stream derivation: hash(master_seed, trial, role) so that
// parallel trials reproduce independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial,
                          std::string_view role);

struct EigenDecomposition {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns, aligned with values
};

// Dense symmetric matrix with a lazily computed, shared eigendecomposition.
// Instances are immutable; copies share storage and the eigen cache.
class SymmetricMatrixInstance {
  public:
    SymmetricMatrixInstance() = default;
    explicit SymmetricMatrixInstance(Eigen::MatrixXd entries);
    SymmetricMatrixInstance(Eigen::MatrixXd entries, EigenDecomposition eig);

    int dim() const;
    const Eigen::MatrixXd& entries() const;

    // Computed once on first use (symmetric tridiagonalization path),
    // then shared read-only.
    const EigenDecomposition& eigen() const;
    bool eigen_cached() const;

    std::vector<double> eigenvalues() const;

  private:
    struct State;
    std::shared_ptr<State> state_;
};

SymmetricMatrixInstance sample_goe(int n, std::uint64_t seed);

// Exactly Haar: QR of an i.i.d. Gaussian matrix with the R-diagonal sign
// correction.
Eigen::MatrixXd sample_haar_orthogonal(int n, std::uint64_t seed);

// S = V diag(eigenvalues) V^T with Haar-distributed V on the Stiefel
// manifold; missing eigenvalues are zero-padded.
SymmetricMatrixInstance sample_rot_inv_signal(
    int n, const std::vector<double>& eigenvalues, std::uint64_t seed);

// Same with m i.i.d. eigenvalue draws from the given law.
SymmetricMatrixInstance sample_rot_inv_signal(int n,
                                              const SpectralMeasure& law,
                                              int m, std::uint64_t seed);

struct FactorSignal {
    Eigen::MatrixXd x;          // N x M factor
    SymmetricMatrixInstance s;  // X X^T / N
    int m = 0;
    double alpha = 0.0;  // rank exponent when m = floor(N^alpha), else 0
};

FactorSignal sample_factor_signal(int n, int m, const ScalarPrior& prior,
                                  std::uint64_t seed);

struct NoiseSpec {
    enum class Kind { wigner, uniform_spectrum, rot_inv };
    Kind kind = Kind::wigner;
    double a = 1.0, b = 2.0;  // uniform_spectrum bounds
    std::shared_ptr<const SpectralMeasure> law;  // rot_inv eigenvalue law

    static NoiseSpec wigner();
    static NoiseSpec uniform_spectrum(double a, double b);
    static NoiseSpec rot_inv(SpectralMeasure law);
    // "wigner" | "uniform:1,2" | any parse_measure() string (rot_inv)
    static NoiseSpec parse(const std::string& text);

    // Support of the limiting noise spectrum, for thresholding estimators.
    Interval support() const;
    std::string describe() const;
};

// Y = sqrt(gamma) S + Z.
SymmetricMatrixInstance observe(const SymmetricMatrixInstance& s, double gamma,
                                const NoiseSpec& noise, std::uint64_t seed);

}  // namespace mdnz

#pragma once

#include <string>
#include <vector>

#include "mdnz/ensemble.hpp"
#include "mdnz/measure.hpp"

namespace mdnz {

// A rotation invariant estimate: the observation's eigenvectors with
// shrunk eigenvalues xi, estimate = sum_i xi_i y_i y_i^T.
struct ShrinkageResult {
    SymmetricMatrixInstance estimate;
    std::vector<double> xi;  // aligned with ascending observation eigenvalues
    std::string method;
    std::vector<std::string> warnings;
};

enum class HilbertMode { empirical, density };

// Linear-rank optimal shrinkage xi_i = (lambda_i - 2 pi H[rho_Y](lambda_i))
// / sqrt(gamma). Empirical mode replaces the Hilbert transform by the
// eigenvalue sum (2/N) sum_{j != i} 1/(lambda_i - lambda_j); density mode
// evaluates it against rho_y.
ShrinkageResult rie_linear(const SymmetricMatrixInstance& y, double gamma,
                           HilbertMode mode,
                           const SpectralMeasure* rho_y = nullptr);

// Sub-linear thresholding estimator: xi = f_Z(lambda) with
// f_Z(x) = -(1/sqrt(gamma)) 1{x outside noise support} G(x) / G'(x);
// closed forms for Wigner and uniform-spectrum noise, transforms of the
// supplied law otherwise.
ShrinkageResult rie_sublinear(const SymmetricMatrixInstance& y, double gamma,
                              const NoiseSpec& noise);

// xi_i = y_i^T S y_i; requires the signal, minimizes the MSE in the class.
ShrinkageResult oracle(const SymmetricMatrixInstance& y,
                       const SymmetricMatrixInstance& s);

enum class Normalization { per_rank, per_dim };

// Squared Frobenius distance over rank (sub-linear convention) or over
// dimension (linear-rank convention).
double mse(const SymmetricMatrixInstance& s,
           const SymmetricMatrixInstance& estimate, Normalization norm,
           int rank = 0);

}  // namespace mdnz

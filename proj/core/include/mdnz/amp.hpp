#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mdnz/ensemble.hpp"
#include "mdnz/prior.hpp"

namespace mdnz {

struct AmpOptions {
    double tol = 1e-7;
    int max_iter = 200;
    enum class Init { spectral, random };
    Init init = Init::spectral;
    double random_scale = 1.0;
    std::uint64_t seed = 0;  // for the power-iteration / random start
};

struct AmpState {
    Eigen::VectorXd iterate;
    Eigen::VectorXd previous;
    double onsager = 0.0;
    double effective_snr = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Bayes-optimal AMP for the single-spike model Y = sqrt(g) x x^T / N + Z.
// Returns x_hat at the O(1)-entry scale (||x_hat||^2 ~ sigma N); divide by
// sqrt(N) when assembling spikes of S. Throws divergence_error on NaN/Inf;
// non-convergence returns converged = false.
std::pair<Eigen::VectorXd, AmpState> amp_rank_one(
    const SymmetricMatrixInstance& y, double gamma, const ScalarPrior& prior,
    const AmpOptions& options = {});

struct DecimationReport {
    int spikes = 0;
    std::vector<int> unconverged;  // spike indices whose AMP hit max_iter
    std::vector<double> spike_snr;
};

// Runs rank-one AMP, subtracts the estimated spike, repeats m times, and
// returns the accumulated estimate of S = X X^T / N. Theta(m n^2) work.
SymmetricMatrixInstance decimation_amp(const SymmetricMatrixInstance& y,
                                       double gamma, int m,
                                       const ScalarPrior& prior,
                                       const AmpOptions& options = {},
                                       DecimationReport* report = nullptr);

}  // namespace mdnz

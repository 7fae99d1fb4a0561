#pragma once

#include "mdnz/measure.hpp"
#include "mdnz/prior.hpp"

namespace mdnz {

// Logarithmic energy: the double integral of ln|s-t| against rho x rho.
// Atomic measures are rejected, the log kernel diverges on atom pairs.
double log_energy(const SpectralMeasure& m, double rel_tol = 1e-7);

// Per-dimension MMSE of linear-rank denoising from the data density alone:
// (1/gamma) * (1 - (4 pi^2 / 3) int rho_Y^3).
double mmse_linear(const SpectralMeasure& rho_y, double gamma);

// Asymptotic mutual information per dimension^2: log_energy/2 + 1/8.
double mi_linear(const SpectralMeasure& rho_y);

// Voiculescu's free entropy and free Fisher information.
double free_entropy(const SpectralMeasure& m);
double free_fisher(const SpectralMeasure& m);

// Scalar Gaussian channel  sqrt(s) X + Z  at SNR s.
double scalar_mmse(const ScalarPrior& prior, double snr);
double scalar_mi(const ScalarPrior& prior, double snr);

// Rank-one replica solution; also exact for every sub-linear rank.
struct ReplicaSolution {
    double sigma_star = 0.0;
    double mi = 0.0;
    double mmse = 0.0;
    int fixed_point_iterations = 0;
    // Two fixed points gave variational values within 1e-9 of each other.
    bool near_degenerate = false;
};

ReplicaSolution rank_one_replica(const ScalarPrior& prior, double gamma);

// Per-rank MSE of the thresholding estimator under Wigner noise:
// int x^2 rho_S - int_{|x| >= 1/sqrt(g)} (x - 1/(g x))^2 rho_S.
double sublinear_rie_mse_wigner(const SpectralMeasure& rho_s, double gamma);

// Same under noise with uniform([1,2]) spectrum.
double sublinear_rie_mse_uniform_noise(const SpectralMeasure& rho_s,
                                       double gamma);

// Sub-linear spherical-integral rate function
// K = theta l' + (v - l') G(v) - ln|theta| - int ln|v-x| dmu - 1.
double husson_k(double theta, double lambda, const SpectralMeasure& mu);

// Mutual information per (rank x dimension) via the spherical integral:
// (g/2) int x^2 rho_S - (1/2) E_S[ K(sqrt(g) x, h(sqrt(g) x), sc) ].
double sublinear_mi_spherical(const SpectralMeasure& rho_s, double gamma);

// Mutual information under smoothed rotation-invariant noise.
double arin_mi(const SpectralMeasure& rho_y_eps,
               const SpectralMeasure& rho_z_eps);

// Integral representations of MMSE'(gamma) and MMSE''(gamma) for the
// Rademacher spectral prior, with the density's gamma-derivatives obtained
// by centered differencing of the closed form at step 1e-5.
struct MmseDerivatives {
    double first = 0.0;
    double second = 0.0;
    bool near_singular = false;  // gamma within 1e-4 of the critical point
};

MmseDerivatives mmse_derivative_integrals(double gamma);

}  // namespace mdnz

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mdnz/errors.hpp"
#include "mdnz/theory.hpp"

namespace mdnz {

namespace {

constexpr double kDamping = 0.5;
constexpr int kMaxIterations = 10000;
constexpr double kFixedPointTol = 1e-13;

struct FixedPoint {
    double sigma;
    int iterations;
};

// Damped iteration sigma <- rho - mmse(prior, gamma sigma); the fixed points
// are exactly the stationary points of the variational functional. Iterates
// that drift into an already-found fixed point, or decay monotonically into
// the sigma = 0 basin, adopt that limit instead of burning the full budget
// (the plain iteration slows to a power law at the critical SNR).
std::optional<FixedPoint> iterate_from(const ScalarPrior& prior, double gamma,
                                       double sigma0,
                                       const std::vector<FixedPoint>& known) {
    const double rho = prior.variance();
    double sigma = sigma0;
    for (int it = 1; it <= kMaxIterations; ++it) {
        const double next = rho - scalar_mmse(prior, gamma * sigma);
        const double damped = (1.0 - kDamping) * sigma + kDamping * next;
        const double step = std::abs(damped - sigma);
        const bool decaying = damped < sigma;
        sigma = std::clamp(damped, 0.0, rho);
        if (step < kFixedPointTol) return FixedPoint{sigma, it};
        for (const auto& fp : known)
            if (std::abs(sigma - fp.sigma) < 1e-10)
                return FixedPoint{fp.sigma, it};
        if (decaying && sigma < 1e-3 * rho && step < 1e-7 * rho)
            return FixedPoint{0.0, it};
    }
    return std::nullopt;
}

double functional(const ScalarPrior& prior, double gamma, double sigma) {
    const double rho = prior.variance();
    return 0.25 * gamma * (sigma - rho) * (sigma - rho) +
           scalar_mi(prior, gamma * sigma);
}

}  // namespace

ReplicaSolution rank_one_replica(const ScalarPrior& prior, double gamma) {
    if (!(gamma > 0.0))
        throw invalid_parameter("rank_one_replica: gamma must be > 0");
    const double rho = prior.variance();

    std::vector<FixedPoint> candidates;
    int total_iterations = 0;
    bool converged_any = false;

    auto consider = [&](double sigma0) {
        const auto fp = iterate_from(prior, gamma, sigma0, candidates);
        if (!fp) return;
        converged_any = true;
        total_iterations += fp->iterations;
        for (const auto& c : candidates)
            if (std::abs(c.sigma - fp->sigma) < 1e-9) return;
        candidates.push_back(*fp);
    };

    // The scan includes sigma = 0 (always a fixed point, and the global
    // minimizer below the transition, where iterations from positive starts
    // stall at a power-law rate near the critical SNR).
    consider(rho);
    for (int k = 0; k < 64; ++k) consider(rho * k / 63.0);

    if (!converged_any)
        throw convergence_error(
            "rank_one_replica: no fixed point reached in 10^4 iterations");

    double best_sigma = 0.0, best_value = 0.0;
    bool first = true, near_degenerate = false;
    for (const auto& c : candidates) {
        const double value = functional(prior, gamma, c.sigma);
        if (first || value < best_value - 1e-15) {
            if (!first && std::abs(value - best_value) < 1e-9 &&
                std::abs(c.sigma - best_sigma) > 1e-6)
                near_degenerate = true;
            best_sigma = c.sigma;
            best_value = value;
            first = false;
        } else if (std::abs(value - best_value) < 1e-9 &&
                   std::abs(c.sigma - best_sigma) > 1e-6) {
            near_degenerate = true;
        }
    }

    ReplicaSolution out;
    out.sigma_star = best_sigma;
    out.mi = best_value;
    out.mmse = rho * rho - best_sigma * best_sigma;
    out.fixed_point_iterations = total_iterations;
    out.near_degenerate = near_degenerate;
    return out;
}

}  // namespace mdnz

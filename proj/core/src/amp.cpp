#include "mdnz/amp.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "mdnz/errors.hpp"

namespace mdnz {

namespace {

// Top eigenvector by shifted power iteration; the spike regimes handled
// here have it separated from the bulk, and the AMP loop only needs a
// warm direction, not machine precision.
Eigen::VectorXd top_direction(const Eigen::MatrixXd& y, std::uint64_t seed,
                              double* rayleigh) {
    const int n = static_cast<int>(y.rows());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    v.normalize();
    const double shift = 3.0;  // keeps -lambda_min from dominating
    Eigen::VectorXd w(n);
    for (int it = 0; it < 200; ++it) {
        w.noalias() = y.selfadjointView<Eigen::Lower>() * v;
        w += shift * v;
        const double norm = w.norm();
        if (norm == 0.0) break;
        v = w / norm;
    }
    if (rayleigh) {
        w.noalias() = y.selfadjointView<Eigen::Lower>() * v;
        *rayleigh = v.dot(w);
    }
    return v;
}

}  // namespace

std::pair<Eigen::VectorXd, AmpState> amp_rank_one(
    const SymmetricMatrixInstance& y, double gamma, const ScalarPrior& prior,
    const AmpOptions& options) {
    if (!(gamma > 0.0)) throw invalid_parameter("amp_rank_one: gamma must be > 0");
    const int n = y.dim();
    const double rg = std::sqrt(gamma);
    const Eigen::MatrixXd& ym = y.entries();

    Eigen::VectorXd x(n);
    if (options.init == AmpOptions::Init::spectral) {
        double rayleigh = 0.0;
        Eigen::VectorXd v = top_direction(ym, options.seed, &rayleigh);
        // Overlap prediction from the spike position: lambda = theta + 1/theta
        // outside the bulk, sigma ~ (theta/sqrt(g)) (1 - 1/theta^2).
        double sigma_est = 0.0;
        if (rayleigh > 2.0 + 1e-3) {
            const double theta =
                0.5 * (rayleigh + std::sqrt(rayleigh * rayleigh - 4.0));
            sigma_est = (theta / rg) * (1.0 - 1.0 / (theta * theta));
        }
        sigma_est = std::max(sigma_est, 0.01);
        x = v * std::sqrt(n * sigma_est);
    } else {
        std::mt19937_64 rng(derive_seed(options.seed, 0, "amp-random-init"));
        std::normal_distribution<double> normal(0.0, options.random_scale);
        for (int i = 0; i < n; ++i) x(i) = normal(rng);
    }

    AmpState state;
    Eigen::VectorXd x_prev = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd u(n), u_prev(n);
    double s_prev = 0.0;
    bool have_prev = false;

    for (int t = 1; t <= options.max_iter; ++t) {
        const double s = gamma * x.squaredNorm() / n;
        double b = 0.0;
        if (have_prev) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += prior.posterior_var(u_prev(i), s_prev);
            b = gamma * acc / n;
        }
        u.noalias() = rg * (ym.selfadjointView<Eigen::Lower>() * x);
        u -= b * x_prev;

        Eigen::VectorXd x_next(n);
        for (int i = 0; i < n; ++i) x_next(i) = prior.posterior_mean(u(i), s);
        if (!x_next.allFinite()) {
            std::ostringstream os;
            os << "amp_rank_one: diverged at iteration " << t;
            throw divergence_error(os.str());
        }

        const double step = (x_next - x).norm() / std::max(x.norm(), 1e-12);
        x_prev = x;
        u_prev = u;
        s_prev = s;
        x = x_next;
        state.iterations = t;
        state.onsager = b;
        state.effective_snr = s;
        have_prev = true;
        if (step < options.tol) {
            state.converged = true;
            break;
        }
    }
    state.iterate = x;
    state.previous = x_prev;
    return {x, state};
}

SymmetricMatrixInstance decimation_amp(const SymmetricMatrixInstance& y,
                                       double gamma, int m,
                                       const ScalarPrior& prior,
                                       const AmpOptions& options,
                                       DecimationReport* report) {
    if (!(gamma > 0.0))
        throw invalid_parameter("decimation_amp: gamma must be > 0");
    const int n = y.dim();
    if (m < 1 || m > n)
        throw invalid_parameter("decimation_amp: need 1 <= m <= n");
    const double rg = std::sqrt(gamma);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    Eigen::MatrixXd residual = y.entries();
    Eigen::MatrixXd estimate = Eigen::MatrixXd::Zero(n, n);
    if (report) *report = DecimationReport{};

    for (int t = 0; t < m; ++t) {
        AmpOptions opt = options;
        opt.seed = derive_seed(options.seed, static_cast<std::uint64_t>(t),
                               "decimation-spike");
        SymmetricMatrixInstance yt(residual);
        std::pair<Eigen::VectorXd, AmpState> result;
        try {
            result = amp_rank_one(yt, gamma, prior, opt);
        } catch (const divergence_error& e) {
            std::ostringstream os;
            os << e.what() << " (spike " << t << ")";
            throw divergence_error(os.str());
        }
        const Eigen::VectorXd spike = result.first * inv_sqrt_n;
        if (!result.second.converged && report)
            report->unconverged.push_back(t);
        if (report) {
            report->spike_snr.push_back(result.second.effective_snr);
            report->spikes = t + 1;
        }
        // Rank-one outer products are exactly symmetric entrywise.
        const Eigen::MatrixXd outer = spike * spike.transpose();
        residual.noalias() -= rg * outer;
        estimate.noalias() += outer;
    }
    return SymmetricMatrixInstance(std::move(estimate));
}

}  // namespace mdnz

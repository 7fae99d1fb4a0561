#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mdnz/ensemble.hpp"
#include "mdnz/estimator.hpp"
#include "mdnz/prior.hpp"

namespace mdnz {

// One Monte-Carlo sweep over (N, gamma, method, trial). Methods observe the
// same signal/noise realization within a cell so comparisons are paired.
struct ExperimentConfig {
    enum class SignalKind { factor, spectral };
    SignalKind signal_kind = SignalKind::factor;

    ScalarPrior factor_prior = ScalarPrior::gaussian();
    SpectralMeasure spectral_law;  // eigenvalue law for spectral signals
    std::string signal_text = "gaussian";

    // Rank: floor(N^alpha) when alpha in (0,1); explicit_rank overrides;
    // alpha = 1 means full rank (linear regime).
    double alpha = 0.5;
    int explicit_rank = 0;

    NoiseSpec noise = NoiseSpec::wigner();
    std::string noise_text = "wigner";

    std::vector<int> sizes;
    std::vector<double> gammas;
    int trials = 10;
    std::uint64_t master_seed = 1;
    std::vector<std::string> methods;  // rie-linear rie-sublinear oracle dec-amp
    Normalization normalization = Normalization::per_rank;

    int threads = 1;
    bool allow_large = false;  // N > 6000 guardrail
    std::string out_path;      // CSV path; JSON sidecar next to it

    double amp_tol = 1e-7;
    int amp_max_iter = 200;

    int rank_for(int n) const;
    void validate() const;
    std::string canonical() const;  // serialization used for hashing
    std::string hash() const;

    static ExperimentConfig from_file(const std::string& path);
    void apply_line(const std::string& key, const std::string& value);
};

struct ExperimentRow {
    int n = 0;
    double gamma = 0.0;
    std::string method;
    int trials = 0;
    double mean_mse = 0.0;
    double std_dev = 0.0;
    double std_error = 0.0;
    std::vector<double> trial_mse;
    std::vector<std::uint64_t> trial_seeds;
    std::string error;  // per-cell failure marker; empty when clean
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    std::string config_hash;
    double wall_seconds = 0.0;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

using ProgressFn = std::function<void(const std::string&)>;

// Runs the sweep; when config.out_path is set, writes the CSV, a JSON
// sidecar, and keeps a partial file so an interrupted run resumes with
// byte-identical output (cells keyed by (N, gamma, method, trial); a
// partial file with a different config hash is refused).
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const ProgressFn& progress = {});

}  // namespace mdnz

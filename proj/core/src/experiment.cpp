#include "mdnz/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mdnz/amp.hpp"
#include "mdnz/errors.hpp"

namespace mdnz {

int ExperimentConfig::rank_for(int n) const {
    if (explicit_rank > 0) return std::min(explicit_rank, n);
    if (alpha >= 1.0) return n;
    return std::max(1, static_cast<int>(
                           std::floor(std::pow(static_cast<double>(n), alpha))));
}

void ExperimentConfig::validate() const {
    if (sizes.empty()) throw invalid_parameter("experiment: no sizes given");
    for (int n : sizes) {
        if (n < 8) throw invalid_parameter("experiment: N must be >= 8");
        if (n > 6000 && !allow_large)
            throw invalid_parameter(
                "experiment: N > 6000 needs the --large flag (O(N^3) "
                "eigendecompositions)");
    }
    if (gammas.empty()) throw invalid_parameter("experiment: no gammas given");
    for (double g : gammas)
        if (!(g > 0.0)) throw invalid_parameter("experiment: gamma must be > 0");
    if (trials < 1) throw invalid_parameter("experiment: trials must be >= 1");
    if (explicit_rank == 0 && !(alpha > 0.0 && alpha <= 1.0))
        throw invalid_parameter("experiment: alpha must be in (0,1]");
    if (methods.empty()) throw invalid_parameter("experiment: no methods given");
    for (const auto& m : methods) {
        if (m != "rie-linear" && m != "rie-sublinear" && m != "oracle" &&
            m != "dec-amp")
            throw invalid_parameter("experiment: unknown method '" + m + "'");
        if (m == "dec-amp" && signal_kind != SignalKind::factor)
            throw invalid_parameter(
                "experiment: dec-amp needs a factor signal prior");
    }
    if (threads < 1) throw invalid_parameter("experiment: threads must be >= 1");
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "signal=" << signal_text << ";kind="
       << (signal_kind == SignalKind::factor ? "factor" : "spectral")
       << ";alpha=" << alpha << ";rank=" << explicit_rank
       << ";noise=" << noise_text << ";n=";
    for (int n : sizes) os << n << ",";
    os << ";gamma=";
    for (double g : gammas) os << g << ",";
    os << ";trials=" << trials << ";seed=" << master_seed << ";methods=";
    for (const auto& m : methods) os << m << ",";
    os << ";norm="
       << (normalization == Normalization::per_rank ? "per_rank" : "per_dim")
       << ";amp_tol=" << amp_tol << ";amp_max_iter=" << amp_max_iter;
    return os.str();
}

std::string ExperimentConfig::hash() const {
    const std::string c = canonical();
    std::uint64_t h = 1469598103934665603ull;
    for (char ch : c) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

void ExperimentConfig::apply_line(const std::string& key,
                                  const std::string& value) {
    if (key == "signal") {
        signal_text = value;
        // A scalar-prior spec means a factor signal; a measure spec means a
        // spectral one. Priors win on the shared names.
        try {
            factor_prior = ScalarPrior::parse(value);
            signal_kind = SignalKind::factor;
            return;
        } catch (const invalid_parameter&) {
        }
        spectral_law = parse_measure(value);
        signal_kind = SignalKind::spectral;
    } else if (key == "spectral-signal") {
        signal_text = value;
        spectral_law = parse_measure(value);
        signal_kind = SignalKind::spectral;
    } else if (key == "noise") {
        noise_text = value;
        noise = NoiseSpec::parse(value);
    } else if (key == "alpha") {
        alpha = std::stod(value);
    } else if (key == "rank") {
        explicit_rank = std::stoi(value);
    } else if (key == "n") {
        sizes.clear();
        for (const auto& v : split(value, ',')) sizes.push_back(std::stoi(v));
    } else if (key == "gamma") {
        gammas.clear();
        for (const auto& v : split(value, ',')) gammas.push_back(std::stod(v));
    } else if (key == "trials") {
        trials = std::stoi(value);
    } else if (key == "seed") {
        master_seed = std::stoull(value);
    } else if (key == "methods") {
        methods = split(value, ',');
    } else if (key == "normalization") {
        if (value == "per_rank")
            normalization = Normalization::per_rank;
        else if (value == "per_dim")
            normalization = Normalization::per_dim;
        else
            throw invalid_parameter("experiment: bad normalization " + value);
    } else if (key == "threads") {
        threads = std::stoi(value);
    } else if (key == "large") {
        allow_large = value == "true" || value == "1";
    } else if (key == "out") {
        out_path = value;
    } else if (key == "amp_tol") {
        amp_tol = std::stod(value);
    } else if (key == "amp_max_iter") {
        amp_max_iter = std::stoi(value);
    } else {
        throw invalid_parameter("experiment config: unknown key '" + key + "'");
    }
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("config: cannot open " + path);
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw invalid_parameter("config: expected key = value, got " + line);
        cfg.apply_line(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

namespace {

struct Cell {
    int n;
    double gamma;
    std::string method;
};

std::string cell_key(int n, double gamma, const std::string& method,
                     int trial) {
    std::ostringstream os;
    os.precision(17);
    os << n << "|" << gamma << "|" << method << "|" << trial;
    return os.str();
}

double run_single_trial(const ExperimentConfig& cfg, int n, double gamma,
                        const std::string& method, int trial) {
    const int m = cfg.rank_for(n);
    // Methods share the realization: the role tags exclude the method.
    std::ostringstream cell;
    cell.precision(17);
    cell << n << "/" << gamma;
    const std::uint64_t seed_signal = derive_seed(
        cfg.master_seed, static_cast<std::uint64_t>(trial), "signal/" + cell.str());
    const std::uint64_t seed_noise = derive_seed(
        cfg.master_seed, static_cast<std::uint64_t>(trial), "noise/" + cell.str());

    SymmetricMatrixInstance s;
    if (cfg.signal_kind == ExperimentConfig::SignalKind::factor) {
        s = sample_factor_signal(n, m, cfg.factor_prior, seed_signal).s;
    } else {
        s = sample_rot_inv_signal(n, cfg.spectral_law, m, seed_signal);
    }
    const SymmetricMatrixInstance y = observe(s, gamma, cfg.noise, seed_noise);

    SymmetricMatrixInstance estimate;
    if (method == "rie-linear") {
        estimate = rie_linear(y, gamma, HilbertMode::empirical).estimate;
    } else if (method == "rie-sublinear") {
        estimate = rie_sublinear(y, gamma, cfg.noise).estimate;
    } else if (method == "oracle") {
        estimate = oracle(y, s).estimate;
    } else if (method == "dec-amp") {
        AmpOptions opt;
        opt.tol = cfg.amp_tol;
        opt.max_iter = cfg.amp_max_iter;
        opt.seed = derive_seed(cfg.master_seed,
                               static_cast<std::uint64_t>(trial),
                               "amp/" + cell.str());
        estimate = decimation_amp(y, gamma, m, cfg.factor_prior, opt);
    } else {
        throw invalid_parameter("experiment: unknown method " + method);
    }
    const int denom = cfg.normalization == Normalization::per_rank ? m : n;
    return mse(s, estimate, cfg.normalization,
               cfg.normalization == Normalization::per_rank ? denom : 0);
}

}  // namespace

std::string ExperimentReport::to_csv() const {
    std::ostringstream os;
    os.precision(12);
    os << "n,gamma,method,trials,mean_mse,std_dev,std_error,error\n";
    for (const auto& r : rows) {
        os << r.n << "," << r.gamma << "," << r.method << "," << r.trials
           << "," << r.mean_mse << "," << r.std_dev << "," << r.std_error
           << "," << r.error << "\n";
    }
    return os.str();
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["wall_seconds"] = wall_seconds;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row;
        row["n"] = r.n;
        row["gamma"] = r.gamma;
        row["method"] = r.method;
        row["trials"] = r.trials;
        row["mean_mse"] = r.mean_mse;
        row["std_dev"] = r.std_dev;
        row["std_error"] = r.std_error;
        row["trial_mse"] = r.trial_mse;
        row["trial_seeds"] = r.trial_seeds;
        if (!r.error.empty()) row["error"] = r.error;
        j["rows"].push_back(std::move(row));
    }
    return j;
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const ProgressFn& progress) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentReport report;
    report.config_hash = config.hash();

    // Load partial results when resuming.
    std::map<std::string, double> done;
    const std::string partial_path =
        config.out_path.empty() ? "" : config.out_path + ".partial.json";
    if (!partial_path.empty()) {
        std::ifstream in(partial_path);
        if (in) {
            nlohmann::json j;
            in >> j;
            if (j.value("config_hash", "") != report.config_hash)
                throw invalid_parameter(
                    "experiment: partial results belong to a different "
                    "config (hash mismatch); refusing to merge");
            for (auto& [k, v] : j.at("cells").items())
                done[k] = v.get<double>();
            if (progress)
                progress("resuming " + std::to_string(done.size()) +
                         " completed trials from " + partial_path);
        }
    }

    struct Task {
        int n;
        double gamma;
        std::string method;
        int trial;
    };
    std::vector<Task> tasks;
    for (int n : config.sizes)
        for (double g : config.gammas)
            for (const auto& method : config.methods)
                for (int t = 0; t < config.trials; ++t) {
                    if (done.count(cell_key(n, g, method, t))) continue;
                    tasks.push_back({n, g, method, t});
                }

    std::mutex mu;
    std::map<std::string, double> results = done;
    std::map<std::string, std::string> failures;
    std::size_t next = 0;

    auto worker = [&] {
        for (;;) {
            Task task;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= tasks.size()) return;
                task = tasks[next++];
            }
            std::string err;
            double value = 0.0;
            try {
                value = run_single_trial(config, task.n, task.gamma,
                                         task.method, task.trial);
            } catch (const std::exception& e) {
                err = e.what();
            }
            const std::string key =
                cell_key(task.n, task.gamma, task.method, task.trial);
            std::lock_guard<std::mutex> lock(mu);
            if (err.empty()) {
                results[key] = value;
            } else {
                failures[key] = err;
            }
            if (progress) {
                std::ostringstream os;
                os << task.method << " n=" << task.n << " gamma=" << task.gamma
                   << " trial=" << task.trial;
                if (err.empty())
                    os << " mse=" << value;
                else
                    os << " FAILED: " << err;
                progress(os.str());
            }
            if (!partial_path.empty()) {
                nlohmann::json j;
                j["config_hash"] = report.config_hash;
                j["cells"] = results;
                std::ofstream out(partial_path);
                out << j.dump();
            }
        }
    };

    const int n_workers =
        std::max(1, std::min<int>(config.threads,
                                  static_cast<int>(tasks.size())));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Aggregate in deterministic (n, gamma, method) order.
    for (int n : config.sizes) {
        for (double g : config.gammas) {
            for (const auto& method : config.methods) {
                ExperimentRow row;
                row.n = n;
                row.gamma = g;
                row.method = method;
                std::ostringstream cell;
                cell.precision(17);
                cell << n << "/" << g;
                for (int t = 0; t < config.trials; ++t) {
                    const std::string key = cell_key(n, g, method, t);
                    row.trial_seeds.push_back(
                        derive_seed(config.master_seed,
                                    static_cast<std::uint64_t>(t),
                                    "signal/" + cell.str()));
                    if (auto it = results.find(key); it != results.end()) {
                        row.trial_mse.push_back(it->second);
                    } else if (auto jt = failures.find(key);
                               jt != failures.end() && row.error.empty()) {
                        row.error = jt->second;
                    }
                }
                row.trials = static_cast<int>(row.trial_mse.size());
                if (row.trials > 0) {
                    double sum = 0.0;
                    for (double v : row.trial_mse) sum += v;
                    row.mean_mse = sum / row.trials;
                    double ss = 0.0;
                    for (double v : row.trial_mse) {
                        const double d = v - row.mean_mse;
                        ss += d * d;
                    }
                    row.std_dev =
                        row.trials > 1 ? std::sqrt(ss / (row.trials - 1)) : 0.0;
                    row.std_error = row.std_dev / std::sqrt(
                                                      static_cast<double>(
                                                          row.trials));
                }
                report.rows.push_back(std::move(row));
            }
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    if (!config.out_path.empty()) {
        std::ofstream out(config.out_path);
        if (!out)
            throw invalid_parameter("experiment: cannot write " +
                                    config.out_path);
        out << report.to_csv();
        std::ofstream sidecar(config.out_path + ".json");
        nlohmann::json j = report.to_json();
        j["config"] = config.canonical();
        sidecar << j.dump(2) << "\n";
    }
    return report;
}

}  // namespace mdnz

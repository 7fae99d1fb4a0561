// mdnz: spectral matrix denoising toolbox.
//
// Verbs: experiment, mmse-curve, mi-curve, transition, spectrum, denoise.
// Exit codes: 0 ok, 2 numerical failure, 3 invalid input.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mdnz/amp.hpp"
#include "mdnz/ensemble.hpp"
#include "mdnz/errors.hpp"
#include "mdnz/estimator.hpp"
#include "mdnz/experiment.hpp"
#include "mdnz/matrix_io.hpp"
#include "mdnz/measure.hpp"
#include "mdnz/stats.hpp"
#include "mdnz/stencil.hpp"
#include "mdnz/theory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 2;
constexpr int kExitInvalid = 3;

void diag(const nlohmann::json& j) { std::cerr << j.dump() << "\n"; }

mdnz::SpectralMeasure load_or_parse_measure(const std::string& spec) {
    // A path to a JSON measure file, or a shorthand string.
    std::ifstream in(spec);
    if (in) {
        nlohmann::json j;
        in >> j;
        return mdnz::SpectralMeasure::from_json(j);
    }
    return mdnz::parse_measure(spec);
}

// rho_Y(gamma) for the curve/transition verbs: closed form when available.
struct CurvePrior {
    enum class Kind { rademacher, bernoulli, mp, wigner, custom } kind;
    double param = 0.0;
    mdnz::SpectralMeasure custom;

    static CurvePrior parse(const std::string& text) {
        CurvePrior p;
        if (text == "rademacher") {
            p.kind = Kind::rademacher;
        } else if (text == "wigner") {
            p.kind = Kind::wigner;
        } else if (text.rfind("bernoulli:", 0) == 0) {
            p.kind = Kind::bernoulli;
            const auto eq = text.find('=');
            p.param = std::stod(
                eq == std::string::npos ? text.substr(10) : text.substr(eq + 1));
        } else if (text.rfind("mp:", 0) == 0) {
            p.kind = Kind::mp;
            const auto eq = text.find('=');
            p.param = std::stod(
                eq == std::string::npos ? text.substr(3) : text.substr(eq + 1));
        } else {
            p.kind = Kind::custom;
            p.custom = load_or_parse_measure(text);
        }
        return p;
    }

    mdnz::SpectralMeasure rho_y(double gamma) const {
        switch (kind) {
            case Kind::rademacher:
                return mdnz::rademacher_rho_y(gamma);
            case Kind::bernoulli:
                return mdnz::bernoulli_rho_y(gamma, param);
            case Kind::mp:
                return mdnz::marchenko_pastur_rho_y(gamma, param);
            case Kind::wigner:
                return mdnz::semicircle(1.0 + gamma);
            case Kind::custom:
                return mdnz::free_convolve_semicircle(
                           mdnz::scale_measure(custom, std::sqrt(gamma)))
                    .density;
        }
        throw mdnz::internal_error("CurvePrior: bad kind");
    }

    std::optional<double> gamma_c() const {
        switch (kind) {
            case Kind::rademacher:
                return mdnz::critical_gamma(mdnz::PriorKind::rademacher);
            case Kind::bernoulli:
                return mdnz::critical_gamma(mdnz::PriorKind::bernoulli, param);
            case Kind::mp:
                return param > 1.0
                           ? std::optional<double>(mdnz::critical_gamma(
                                 mdnz::PriorKind::marchenko_pastur, param))
                           : std::nullopt;
            default:
                return std::nullopt;
        }
    }
};

int cmd_curve(const std::string& prior_text, double gamma_min,
              double gamma_max, double step, const std::string& out,
              bool emit_mi) {
    const CurvePrior prior = CurvePrior::parse(prior_text);
    std::ostringstream csv;
    csv.precision(12);
    csv << "gamma,value,warning\n";
    const auto gc = prior.gamma_c();
    for (double g = gamma_min; g <= gamma_max + 1e-12; g += step) {
        std::string warning;
        if (gc && std::abs(g - *gc) < 1e-4) warning = "near-critical";
        try {
            const auto rho = prior.rho_y(g);
            if (!rho.has_density()) {
                csv << g << ",," << "atomic-density\n";
                continue;
            }
            const double value =
                emit_mi ? mdnz::mi_linear(rho) : mdnz::mmse_linear(rho, g);
            csv << g << "," << value << "," << warning << "\n";
        } catch (const std::exception& e) {
            csv << g << ",," << e.what() << "\n";
        }
    }
    if (out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(out);
        f << csv.str();
    }
    return kExitOk;
}

int cmd_transition(const std::string& prior_text, double gamma_c, double h,
                   double half_width, const std::string& out) {
    const CurvePrior prior = CurvePrior::parse(prior_text);
    const bool rademacher = prior.kind == CurvePrior::Kind::rademacher;

    std::vector<double> gammas;
    for (double g = gamma_c - half_width; g <= gamma_c + half_width + 1e-12;
         g += h) {
        double gg = g;
        if (std::abs(gg - gamma_c) < 1e-12) {
            gg += h / 2.0;  // grid point on the critical value: shift
            std::cerr << "{\"warning\":\"grid point at gamma_c shifted by h/2\"}"
                      << "\n";
        }
        if (gg > 0.0) gammas.push_back(gg);
    }

    auto mmse_at = [&](double g) {
        return mdnz::mmse_linear(prior.rho_y(g), g);
    };

    std::vector<double> mmse(gammas.size()), d1(gammas.size()),
        d2(gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        mmse[i] = mmse_at(gammas[i]);
        if (rademacher) {
            const auto d = mdnz::mmse_derivative_integrals(gammas[i]);
            d1[i] = d.first;
            d2[i] = d.second;
        } else {
            const auto grid = mdnz::StencilGrid::sample(mmse_at, gammas[i],
                                                        h / 2.0);
            d1[i] = mdnz::five_point_d1(grid);
            d2[i] = mdnz::five_point_d2(grid);
        }
    }

    // Numerical third/fourth derivatives from the second-derivative grid.
    std::vector<double> d3(gammas.size(), 0.0), d4(gammas.size(), 0.0);
    for (std::size_t i = 2; i + 2 < gammas.size(); ++i) {
        mdnz::StencilGrid grid;
        grid.center = gammas[i];
        grid.step = h;
        for (int k = -2; k <= 2; ++k) grid.values[k + 2] = d2[i + k];
        d3[i] = mdnz::five_point_d1(grid);
        d4[i] = mdnz::five_point_d2(grid);
    }

    std::ostringstream csv;
    csv.precision(12);
    csv << "gamma,mmse,dmmse,ddmmse,d3_numeric,d4_numeric\n";
    for (std::size_t i = 0; i < gammas.size(); ++i)
        csv << gammas[i] << "," << mmse[i] << "," << d1[i] << "," << d2[i]
            << "," << d3[i] << "," << d4[i] << "\n";

    // Log-singularity fit of the second derivative around gamma_c.
    const double dd_c = rademacher
                            ? mdnz::mmse_derivative_integrals(gamma_c).second
                            : [&] {
                                  const auto grid = mdnz::StencilGrid::sample(
                                      mmse_at, gamma_c, h / 2.0);
                                  return mdnz::five_point_d2(grid);
                              }();
    std::vector<double> fit_g, fit_v;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        if (std::abs(gammas[i] - gamma_c) < 1e-12) continue;
        fit_g.push_back(gammas[i]);
        fit_v.push_back(d2[i] - dd_c);
    }
    const auto fit = mdnz::fit_log_singularity(fit_g, fit_v, gamma_c);

    // Cubic-log fit of the MMSE itself:
    // mmse - taylor2 = alpha (g-gc)^3 (ln|g-gc| + beta).
    const double m_c = mmse_at(gamma_c);
    const double d1_c =
        rademacher ? mdnz::mmse_derivative_integrals(gamma_c).first : 0.0;
    double alpha = 0.0, beta = 0.0;
    if (rademacher) {
        double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
        int cnt = 0;
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            const double d = gammas[i] - gamma_c;
            if (std::abs(d) < 1e-12) continue;
            const double f = mmse[i] - m_c - d1_c * d - 0.5 * dd_c * d * d;
            const double y = f / (d * d * d);
            const double t = std::log(std::abs(d));
            st += t;
            sy += y;
            stt += t * t;
            sty += t * y;
            ++cnt;
        }
        const double det = cnt * stt - st * st;
        alpha = (cnt * sty - st * sy) / det;
        beta = ((sy - alpha * st) / cnt) / alpha;
    }

    nlohmann::json jfit;
    jfit["gamma_c"] = gamma_c;
    jfit["ddmmse_fit"] = {{"a", fit.a}, {"b", fit.b}, {"residual", fit.residual}};
    if (rademacher) jfit["mmse_fit"] = {{"alpha", alpha}, {"beta", beta}};

    if (out.empty()) {
        std::cout << csv.str();
        diag(jfit);
    } else {
        std::ofstream f(out);
        f << csv.str();
        std::ofstream jf(out + ".fit.json");
        jf << jfit.dump(2) << "\n";
        diag(jfit);
    }
    return kExitOk;
}

int cmd_spectrum(const std::string& signal_text, const std::string& noise_text,
                 double gamma, int n, std::uint64_t seed, int bins,
                 const std::string& out) {
    const mdnz::SpectralMeasure law = load_or_parse_measure(signal_text);
    const mdnz::NoiseSpec noise = mdnz::NoiseSpec::parse(noise_text);
    const auto s = mdnz::sample_rot_inv_signal(
        n, law, n, mdnz::derive_seed(seed, 0, "spectrum-signal"));
    const auto y = mdnz::observe(s, gamma, noise,
                                 mdnz::derive_seed(seed, 0, "spectrum-noise"));
    const auto eigs = y.eigenvalues();
    const auto hist = mdnz::spectral_histogram(eigs, bins);

    std::ostringstream csv;
    csv.precision(12);
    csv << "bin_lo,bin_hi,density\n";
    for (const auto& b : hist)
        csv << b.lo << "," << b.hi << "," << b.density << "\n";

    // Theory density: closed form when the prior has one, Biane otherwise.
    mdnz::SpectralMeasure rho_y;
    try {
        rho_y = CurvePrior::parse(signal_text).rho_y(gamma);
    } catch (const std::exception&) {
        rho_y = mdnz::free_convolve_semicircle(
                    mdnz::scale_measure(law, std::sqrt(gamma)))
                    .density;
    }
    std::ostringstream theory;
    theory.precision(12);
    theory << "x,rho\n";
    for (const auto& iv : rho_y.support()) {
        for (int i = 0; i <= 400; ++i) {
            const double x = iv.lo + (iv.hi - iv.lo) * i / 400.0;
            theory << x << "," << rho_y.density(x) << "\n";
        }
    }
    const double ks = mdnz::ks_distance(eigs, rho_y);
    diag({{"ks_distance", ks}, {"n", n}, {"gamma", gamma}});

    if (out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(out);
        f << csv.str();
        std::ofstream tf(out + ".theory.csv");
        tf << theory.str();
    }
    return kExitOk;
}

int cmd_denoise(const std::string& input, double gamma,
                const std::string& method, const std::string& noise_text,
                const std::string& hilbert, const std::string& prior_text,
                int rank, std::uint64_t seed, const std::string& signal_path,
                const std::string& out) {
    const auto y = mdnz::load_matrix_auto(input);
    mdnz::ShrinkageResult result;
    mdnz::SymmetricMatrixInstance estimate;

    if (method == "rie-linear") {
        if (hilbert == "empirical") {
            result = mdnz::rie_linear(y, gamma, mdnz::HilbertMode::empirical);
        } else if (hilbert.rfind("density:", 0) == 0) {
            const auto rho = load_or_parse_measure(hilbert.substr(8));
            result =
                mdnz::rie_linear(y, gamma, mdnz::HilbertMode::density, &rho);
        } else {
            throw mdnz::invalid_parameter("denoise: bad --hilbert " + hilbert);
        }
        estimate = result.estimate;
    } else if (method == "rie-sublinear") {
        result = mdnz::rie_sublinear(y, gamma, mdnz::NoiseSpec::parse(noise_text));
        estimate = result.estimate;
    } else if (method == "oracle") {
        if (signal_path.empty())
            throw mdnz::invalid_parameter(
                "denoise: oracle needs --signal <matrix file>");
        result = mdnz::oracle(y, mdnz::load_matrix_auto(signal_path));
        estimate = result.estimate;
    } else if (method == "dec-amp") {
        if (rank < 1)
            throw mdnz::invalid_parameter("denoise: dec-amp needs --rank");
        mdnz::AmpOptions opt;
        opt.seed = seed;
        mdnz::DecimationReport report;
        estimate = mdnz::decimation_amp(y, gamma,
                                        rank, mdnz::ScalarPrior::parse(prior_text),
                                        opt, &report);
        diag({{"spikes", report.spikes},
              {"unconverged", report.unconverged}});
    } else {
        throw mdnz::invalid_parameter("denoise: unknown method " + method);
    }

    for (const auto& w : result.warnings) diag({{"warning", w}});
    mdnz::save_matrix_auto(out, estimate);
    diag({{"method", method}, {"n", y.dim()}, {"out", out}});
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral denoising of symmetric matrices under "
                 "rotation-invariant noise"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the verb

    std::uint64_t seed = 1;
    int threads = 1;
    std::string out;
    std::string config_path;
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--threads", threads, "worker pool size")
        ->capture_default_str();
    app.add_option("--out", out, "output path (stdout if omitted)");
    app.add_option("--config", config_path, "key = value config file");

    // experiment
    auto* exp = app.add_subcommand("experiment", "seeded Monte-Carlo sweep");
    std::string exp_signal = "gaussian", exp_noise = "wigner";
    std::string exp_methods = "rie-sublinear,dec-amp";
    std::string exp_gammas = "3", exp_sizes = "1000";
    double exp_alpha = 0.5;
    int exp_rank = 0, exp_trials = 10;
    std::string exp_norm = "per_rank";
    bool exp_large = false;
    exp->add_option("--signal", exp_signal,
                    "factor prior (gaussian, rademacher, ...) or spectral "
                    "measure (rademacher, mp:q=8, uniform:1,2, delta:1)");
    exp->add_option("--noise", exp_noise, "wigner | uniform:a,b | measure");
    exp->add_option("--alpha", exp_alpha, "rank exponent, m = floor(N^alpha)");
    exp->add_option("--rank", exp_rank, "explicit rank (overrides alpha)");
    exp->add_option("--gamma", exp_gammas, "comma list of SNRs");
    exp->add_option("--n", exp_sizes, "comma list of sizes");
    exp->add_option("--trials", exp_trials, "trials per cell");
    exp->add_option("--methods", exp_methods, "comma list of methods");
    exp->add_option("--normalization", exp_norm, "per_rank | per_dim");
    exp->add_flag("--large", exp_large, "allow N > 6000");

    // mmse-curve / mi-curve
    auto* mmse_curve = app.add_subcommand("mmse-curve", "MMSE(gamma) curve");
    auto* mi_curve = app.add_subcommand("mi-curve", "MI(gamma) curve");
    std::string curve_prior = "rademacher";
    double curve_min = 0.1, curve_max = 3.0, curve_step = 0.1;
    for (auto* c : {mmse_curve, mi_curve}) {
        c->add_option("--prior", curve_prior,
                      "rademacher | bernoulli:p | mp:q | wigner | measure file");
        c->add_option("--gamma-min", curve_min, "first SNR");
        c->add_option("--gamma-max", curve_max, "last SNR");
        c->add_option("--step", curve_step, "SNR step");
    }

    // transition
    auto* trans = app.add_subcommand(
        "transition", "derivatives and log-singularity fit near gamma_c");
    std::string trans_prior = "rademacher";
    double trans_gc = 1.0, trans_h = 0.005, trans_half = 0.1;
    trans->add_option("--prior", trans_prior, "closed-form prior");
    trans->add_option("--gamma-c", trans_gc, "critical SNR");
    trans->add_option("--step", trans_h, "grid step h");
    trans->add_option("--half-width", trans_half, "half width of the grid");

    // spectrum
    auto* spec = app.add_subcommand("spectrum",
                                    "one realization vs the theory density");
    std::string spec_signal = "rademacher", spec_noise = "wigner";
    double spec_gamma = 2.0;
    int spec_n = 1000, spec_bins = 60;
    spec->add_option("--signal", spec_signal, "spectral measure of S");
    spec->add_option("--noise", spec_noise, "noise spec");
    spec->add_option("--gamma", spec_gamma, "SNR");
    spec->add_option("--n", spec_n, "matrix size");
    spec->add_option("--bins", spec_bins, "histogram bins");

    // denoise
    auto* den = app.add_subcommand("denoise", "estimate S from one matrix");
    std::string den_input, den_method = "rie-linear", den_noise = "wigner";
    std::string den_hilbert = "empirical", den_prior = "gaussian";
    std::string den_signal;
    double den_gamma = 1.0;
    int den_rank = 0;
    den->add_option("--input", den_input, "observation matrix file")
        ->required();
    den->add_option("--gamma", den_gamma, "SNR")->required();
    den->add_option("--method", den_method,
                    "rie-linear | rie-sublinear | oracle | dec-amp");
    den->add_option("--noise", den_noise, "noise spec (rie-sublinear)");
    den->add_option("--hilbert", den_hilbert,
                    "empirical | density:<measure file>");
    den->add_option("--prior", den_prior, "factor prior (dec-amp)");
    den->add_option("--rank", den_rank, "spike count (dec-amp)");
    den->add_option("--signal", den_signal, "true signal file (oracle)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (exp->parsed()) {
            mdnz::ExperimentConfig cfg;
            if (!config_path.empty())
                cfg = mdnz::ExperimentConfig::from_file(config_path);
            // Flags override file values.
            if (exp->count("--signal") || config_path.empty())
                cfg.apply_line("signal", exp_signal);
            if (exp->count("--noise") || config_path.empty())
                cfg.apply_line("noise", exp_noise);
            if (exp->count("--alpha") || config_path.empty())
                cfg.alpha = exp_alpha;
            if (exp->count("--rank")) cfg.explicit_rank = exp_rank;
            if (exp->count("--gamma") || config_path.empty())
                cfg.apply_line("gamma", exp_gammas);
            if (exp->count("--n") || config_path.empty())
                cfg.apply_line("n", exp_sizes);
            if (exp->count("--trials") || config_path.empty())
                cfg.trials = exp_trials;
            if (exp->count("--methods") || config_path.empty())
                cfg.apply_line("methods", exp_methods);
            if (exp->count("--normalization") || config_path.empty())
                cfg.apply_line("normalization", exp_norm);
            if (exp_large) cfg.allow_large = true;
            if (app.count("--seed")) cfg.master_seed = seed;
            if (app.count("--threads")) cfg.threads = threads;
            if (!out.empty()) cfg.out_path = out;
            const auto report = mdnz::run_experiment(
                cfg, [](const std::string& line) { std::cerr << line << "\n"; });
            if (cfg.out_path.empty()) std::cout << report.to_csv();
            for (const auto& row : report.rows)
                if (!row.error.empty() && row.trials == 0) return kExitNumerical;
            return kExitOk;
        }
        if (mmse_curve->parsed() || mi_curve->parsed())
            return cmd_curve(curve_prior, curve_min, curve_max, curve_step,
                             out, mi_curve->parsed());
        if (trans->parsed())
            return cmd_transition(trans_prior, trans_gc, trans_h, trans_half,
                                  out);
        if (spec->parsed())
            return cmd_spectrum(spec_signal, spec_noise, spec_gamma, spec_n,
                                seed, spec_bins, out);
        if (den->parsed()) {
            if (out.empty())
                throw mdnz::invalid_parameter("denoise: --out is required");
            return cmd_denoise(den_input, den_gamma, den_method, den_noise,
                               den_hilbert, den_prior, den_rank, seed,
                               den_signal, out);
        }
    } catch (const mdnz::invalid_parameter& e) {
        diag({{"error", e.what()}, {"kind", "invalid-parameter"}});
        return kExitInvalid;
    } catch (const mdnz::domain_error& e) {
        diag({{"error", e.what()}, {"kind", "domain-error"}});
        return kExitInvalid;
    } catch (const mdnz::divergence_error& e) {
        diag({{"error", e.what()}, {"kind", "divergence"}});
        return kExitNumerical;
    } catch (const std::exception& e) {
        diag({{"error", e.what()}});
        return kExitNumerical;
    }
    return kExitOk;
}

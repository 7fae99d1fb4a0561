#include "mdnz/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdnz/errors.hpp"
#include "mdnz/quadrature.hpp"

namespace mdnz {

namespace {

// int_{lo}^{hi} ln|s-t| dt for s anywhere (0 ln 0 = 0 at the edges).
double log_kernel_primitive(double s, double lo, double hi) {
    auto term = [](double d) { return d == 0.0 ? 0.0 : d * std::log(std::abs(d)); };
    return term(s - lo) - term(s - hi) - (hi - lo);
}

// Logarithmic potential U(s) = int ln|s-t| rho(t) dt.
double log_potential(const SpectralMeasure& m, double s, double rel_tol) {
    quad::Options opt;
    opt.rel_tol = rel_tol;
    double u = 0.0;
    for (const auto& iv : m.support()) {
        if (s > iv.lo && s < iv.hi) {
            const double rho_s = m.density(s);
            u += quad::adaptive_integral(
                [&](double t) {
                    const double d = s - t;
                    if (d == 0.0) return 0.0;
                    return std::log(std::abs(d)) * (m.density(t) - rho_s);
                },
                iv.lo, iv.hi, opt);
            u += rho_s * log_kernel_primitive(s, iv.lo, iv.hi);
        } else {
            u += quad::adaptive_integral_sqrt_edges(
                [&](double t) { return std::log(std::abs(s - t)) * m.density(t); },
                iv.lo, iv.hi, opt);
        }
    }
    return u;
}

double cube_integral(const SpectralMeasure& m, double rel_tol = 1e-9) {
    quad::Options opt;
    opt.rel_tol = rel_tol;
    double s = 0.0;
    for (const auto& iv : m.support()) {
        s += quad::adaptive_integral_sqrt_edges(
            [&](double x) {
                const double r = m.density(x);
                return r * r * r;
            },
            iv.lo, iv.hi, opt);
    }
    return s;
}

}  // namespace

double log_energy(const SpectralMeasure& m, double rel_tol) {
    if (!m.atoms().empty())
        throw domain_error("log_energy: atomic part present");
    if (!m.has_density()) throw domain_error("log_energy: no density");
    quad::Options opt;
    opt.rel_tol = rel_tol;
    double e = 0.0;
    for (const auto& iv : m.support()) {
        e += quad::adaptive_integral_sqrt_edges(
            [&](double s) {
                return m.density(s) * log_potential(m, s, rel_tol * 0.1);
            },
            iv.lo, iv.hi, opt);
    }
    return e;
}

double mmse_linear(const SpectralMeasure& rho_y, double gamma) {
    if (!(gamma > 0.0)) throw invalid_parameter("mmse_linear: gamma must be > 0");
    if (!rho_y.has_density())
        throw domain_error("mmse_linear: data density required");
    return (1.0 - (4.0 * M_PI * M_PI / 3.0) * cube_integral(rho_y)) / gamma;
}

double mi_linear(const SpectralMeasure& rho_y) {
    return 0.5 * log_energy(rho_y) + 0.125;
}

double free_entropy(const SpectralMeasure& m) {
    return log_energy(m) + 0.75 + 0.5 * std::log(2.0 * M_PI);
}

double free_fisher(const SpectralMeasure& m) {
    if (!m.atoms().empty())
        throw domain_error("free_fisher: infinite for atomic measures");
    if (!m.has_density()) throw domain_error("free_fisher: no density");
    return (4.0 * M_PI * M_PI / 3.0) * cube_integral(m);
}

double scalar_mmse(const ScalarPrior& prior, double snr) {
    if (snr < 0.0) throw invalid_parameter("scalar_mmse: negative snr");
    const double rho = prior.variance();
    if (snr == 0.0) return rho;
    switch (prior.kind()) {
        case ScalarPrior::Kind::gaussian:
            return rho / (1.0 + rho * snr);
        case ScalarPrior::Kind::rademacher: {
            // 1 - E tanh(s + sqrt(s) Z) by the Nishimori identity.
            const double rs = std::sqrt(snr);
            return 1.0 - quad::gauss_expectation([&](double z) {
                       return std::tanh(snr + rs * z);
                   });
        }
        default: {
            // rho - E[eta(U)^2] with U = s X + sqrt(s) Z; the prior average
            // is exact (discrete) or Gauss-Legendre (uniform), the noise
            // average Gauss-Hermite.
            const double rs = std::sqrt(snr);
            double acc = 0.0;
            auto cond = [&](double x) {
                return quad::gauss_expectation([&](double z) {
                    const double eta =
                        prior.posterior_mean(snr * x + rs * z, snr);
                    return eta * eta;
                });
            };
            if (prior.kind() == ScalarPrior::Kind::discrete) {
                for (std::size_t i = 0; i < prior.points().size(); ++i)
                    acc += prior.weights()[i] * cond(prior.points()[i]);
            } else {
                static const auto rule = quad::gauss_legendre(64);
                const double h = prior.uniform_halfwidth();
                for (int k = 0; k < 64; ++k)
                    acc += 0.5 * rule.second[k] * cond(h * rule.first[k]);
            }
            return rho - acc;
        }
    }
}

double scalar_mi(const ScalarPrior& prior, double snr) {
    if (snr < 0.0) throw invalid_parameter("scalar_mi: negative snr");
    const double rho = prior.variance();
    if (snr == 0.0) return 0.0;
    switch (prior.kind()) {
        case ScalarPrior::Kind::gaussian:
            return 0.5 * std::log1p(rho * snr);
        case ScalarPrior::Kind::rademacher: {
            const double rs = std::sqrt(snr);
            return snr - quad::gauss_expectation([&](double z) {
                       const double a = snr + rs * z;
                       // ln cosh without overflow
                       return std::abs(a) + std::log1p(std::exp(-2.0 * std::abs(a))) -
                              std::log(2.0);
                   });
        }
        default: {
            // I = s rho / 2 - E ln E_{X'} exp(sqrt(s) X' Y - s X'^2 / 2).
            const double rs = std::sqrt(snr);
            auto log_partition = [&](double y) {
                if (prior.kind() == ScalarPrior::Kind::discrete) {
                    double lmax = -std::numeric_limits<double>::infinity();
                    for (double xp : prior.points())
                        lmax = std::max(lmax, rs * xp * y - 0.5 * snr * xp * xp);
                    double z = 0.0;
                    for (std::size_t i = 0; i < prior.points().size(); ++i)
                        z += prior.weights()[i] *
                             std::exp(rs * prior.points()[i] * y -
                                      0.5 * snr * prior.points()[i] *
                                          prior.points()[i] -
                                      lmax);
                    return lmax + std::log(z);
                }
                static const auto rule = quad::gauss_legendre(64);
                const double h = prior.uniform_halfwidth();
                double lmax = -std::numeric_limits<double>::infinity();
                for (int k = 0; k < 64; ++k) {
                    const double xp = h * rule.first[k];
                    lmax = std::max(lmax, rs * xp * y - 0.5 * snr * xp * xp);
                }
                double z = 0.0;
                for (int k = 0; k < 64; ++k) {
                    const double xp = h * rule.first[k];
                    z += 0.5 * rule.second[k] *
                         std::exp(rs * xp * y - 0.5 * snr * xp * xp - lmax);
                }
                return lmax + std::log(z);
            };
            auto cond = [&](double x) {
                return quad::gauss_expectation([&](double z) {
                    return log_partition(rs * x + z);
                });
            };
            double e_log = 0.0;
            if (prior.kind() == ScalarPrior::Kind::discrete) {
                for (std::size_t i = 0; i < prior.points().size(); ++i)
                    e_log += prior.weights()[i] * cond(prior.points()[i]);
            } else {
                static const auto rule = quad::gauss_legendre(64);
                const double h = prior.uniform_halfwidth();
                for (int k = 0; k < 64; ++k)
                    e_log += 0.5 * rule.second[k] * cond(h * rule.first[k]);
            }
            return 0.5 * snr * rho - e_log;
        }
    }
}

double sublinear_rie_mse_wigner(const SpectralMeasure& rho_s, double gamma) {
    if (!(gamma > 0.0))
        throw invalid_parameter("sublinear_rie_mse_wigner: gamma must be > 0");
    const double thr = 1.0 / std::sqrt(gamma);
    auto gain = [&](double x) {
        if (std::abs(x) < thr) return 0.0;
        const double xi = x - 1.0 / (gamma * x);
        return xi * xi;
    };
    return rho_s.integrate([](double x) { return x * x; }) -
           rho_s.integrate(gain);
}

double sublinear_rie_mse_uniform_noise(const SpectralMeasure& rho_s,
                                       double gamma) {
    if (!(gamma > 0.0))
        throw invalid_parameter(
            "sublinear_rie_mse_uniform_noise: gamma must be > 0");
    if (rho_s.support_min() <= 0.0)
        throw invalid_parameter(
            "sublinear_rie_mse_uniform_noise: signal law must be supported "
            "on positives");
    const double rg = std::sqrt(gamma);
    return rho_s.integrate([&](double x) {
        const double csch = 1.0 / std::sinh(1.0 / (2.0 * rg * x));
        const double c2 = csch * csch;
        return x * x - c2 * c2 / (16.0 * gamma * gamma * x * x);
    });
}

double husson_k(double theta, double lambda, const SpectralMeasure& mu) {
    if (!(theta > 0.0))
        throw invalid_parameter("husson_k: theta must be > 0");
    const double r = mu.support_max();
    const double lp = std::max(lambda, r);
    // Stay clear of the edge where the Cauchy transform is evaluated.
    const double eps = 1e-9;
    const double g_lp = cauchy_transform(mu, std::max(lp, r + eps));

    double v;
    if (g_lp <= theta) {
        v = lp;
    } else {
        // G is decreasing on (r, inf); bracket G(v) = theta by doubling.
        double a = std::max(lp, r + eps);
        double b = std::max(2.0 * std::abs(a), a + 1.0);
        while (cauchy_transform(mu, b) > theta) b = 2.0 * b;
        for (int it = 0; it < 100 && b - a > 1e-14 * std::max(1.0, b); ++it) {
            const double m = 0.5 * (a + b);
            (cauchy_transform(mu, m) > theta ? a : b) = m;
        }
        v = 0.5 * (a + b);
    }
    const double g_v = (v == lp) ? g_lp : theta;
    const double log_term =
        mu.integrate([v](double x) { return std::log(std::abs(v - x)); });
    return theta * lp + (v - lp) * g_v - std::log(std::abs(theta)) - log_term -
           1.0;
}

double sublinear_mi_spherical(const SpectralMeasure& rho_s, double gamma) {
    if (!(gamma > 0.0))
        throw invalid_parameter("sublinear_mi_spherical: gamma must be > 0");
    static const SpectralMeasure sc = semicircle(1.0);
    const double rg = std::sqrt(gamma);
    const double second = rho_s.integrate([](double x) { return x * x; });
    const double k_avg = rho_s.integrate([&](double x) {
        const double t = rg * x;
        const double h = t <= 1.0 ? 2.0 : t + 1.0 / t;
        return husson_k(t, h, sc);
    });
    return 0.5 * gamma * second - 0.5 * k_avg;
}

double arin_mi(const SpectralMeasure& rho_y_eps,
               const SpectralMeasure& rho_z_eps) {
    return 0.5 * log_energy(rho_y_eps) - 0.5 * log_energy(rho_z_eps);
}

MmseDerivatives mmse_derivative_integrals(double gamma) {
    if (!(gamma > 0.0))
        throw invalid_parameter(
            "mmse_derivative_integrals: gamma must be > 0");
    MmseDerivatives out;
    out.near_singular = std::abs(gamma - 1.0) < 1e-4;

    const double h = 1e-5;
    const SpectralMeasure rho0 = rademacher_rho_y(gamma);
    const SpectralMeasure rho_p = rademacher_rho_y(gamma + h);
    const SpectralMeasure rho_m = rademacher_rho_y(std::max(gamma - h, h));

    // Integrate over the positive half of the support at gamma; the density
    // is even, every integrand carries a rho0^2 factor, and rho0 vanishes at
    // the moving edges.
    const Interval outer0 = rho0.support().back();
    const double lo = rho0.support().size() == 2 ? outer0.lo : 0.0;
    const double hi = outer0.hi;

    quad::Options opt;
    opt.rel_tol = 1e-7;
    opt.abs_tol = 1e-9;
    const double c83 = 8.0 * M_PI * M_PI / 3.0;

    const double cube = quad::adaptive_integral_sqrt_edges(
        [&](double x) {
            const double r = rho0.density(x);
            return r * r * r;
        },
        lo, hi, opt);
    const double mix1 = quad::adaptive_integral_sqrt_edges(
        [&](double x) {
            const double r = rho0.density(x);
            const double dg = (rho_p.density(x) - rho_m.density(x)) / (2.0 * h);
            return r * r * dg;
        },
        lo, hi, opt);

    quad::Options opt2;
    opt2.rel_tol = 1e-6;
    opt2.abs_tol = 1e-7;
    const double mix2 = quad::adaptive_integral_sqrt_edges(
        [&](double x) {
            const double r = rho0.density(x);
            const double rp = rho_p.density(x);
            const double rm = rho_m.density(x);
            const double dg = (rp - rm) / (2.0 * h);
            const double ddg = (rp - 2.0 * r + rm) / (h * h);
            return 2.0 * r * dg * dg + r * r * ddg;
        },
        lo, hi, opt2);

    const double g2 = gamma * gamma;
    out.first = -1.0 / g2 + c83 * cube / g2 - 3.0 * c83 * mix1 / gamma;
    out.second = 2.0 / (g2 * gamma) - 2.0 * c83 * cube / (g2 * gamma) +
                 6.0 * c83 * mix1 / g2 - 3.0 * c83 * mix2 / gamma;
    return out;
}

}  // namespace mdnz

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "mdnz/errors.hpp"
#include "mdnz/measure.hpp"

namespace mdnz {

namespace {

using cplx = std::complex<double>;

// Real root of z^3 + a z^2 + b z + c (Cardano; the guaranteed real one).
double cubic_real_root(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double D = q * q / 4.0 + p * p * p / 27.0;
    double t;
    if (D >= 0.0) {
        const double sd = std::sqrt(D);
        t = std::cbrt(-q / 2.0 + sd) + std::cbrt(-q / 2.0 - sd);
    } else {
        const double r = std::sqrt(-p * p * p / 27.0);
        const double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
        t = 2.0 * std::cbrt(r) * std::cos(phi / 3.0);
    }
    return t - a / 3.0;
}

// All roots of the monic quartic x^4 + b x^3 + c x^2 + d x + e (Ferrari).
std::array<cplx, 4> quartic_roots(double b, double c, double d, double e) {
    // Depress: x = y - b/4.
    const double b2 = b * b;
    const double p = c - 3.0 * b2 / 8.0;
    const double q = d - b * c / 2.0 + b2 * b / 8.0;
    const double r =
        e - b * d / 4.0 + b2 * c / 16.0 - 3.0 * b2 * b2 / 256.0;

    std::array<cplx, 4> ys;
    if (std::abs(q) < 1e-14 * (1.0 + std::abs(p) + std::abs(r))) {
        // Biquadratic.
        const cplx disc = std::sqrt(cplx(p * p / 4.0 - r, 0.0));
        const cplx u1 = -p / 2.0 + disc, u2 = -p / 2.0 - disc;
        ys = {std::sqrt(u1), -std::sqrt(u1), std::sqrt(u2), -std::sqrt(u2)};
    } else {
        // Resolvent cubic z^3 - p z^2 - 4 r z + (4 p r - q^2).
        const double z0 = cubic_real_root(-p, -4.0 * r, 4.0 * p * r - q * q);
        const cplx s = std::sqrt(cplx(z0 - p, 0.0));
        const cplx t = q / (2.0 * s);
        // y^2 -+ s y + z0/2 +- t = 0.
        const cplx h1 = std::sqrt(s * s / 4.0 - (z0 / 2.0 + t));
        const cplx h2 = std::sqrt(s * s / 4.0 - (z0 / 2.0 - t));
        ys = {s / 2.0 + h1, s / 2.0 - h1, -s / 2.0 + h2, -s / 2.0 - h2};
    }
    for (auto& y : ys) y -= b / 4.0;
    return ys;
}

// A couple of Newton steps to polish a real quartic root.
double polish_quartic_root(double x, double b, double c, double d, double e) {
    for (int it = 0; it < 4; ++it) {
        const double f = (((x + b) * x + c) * x + d) * x + e;
        const double fp = ((4.0 * x + 3.0 * b) * x + 2.0 * c) * x + d;
        if (fp == 0.0) break;
        x -= f / fp;
    }
    return x;
}

double bisect_monotone(const std::function<double(double)>& f, double target,
                       double a, double b) {
    // f increasing on [a, b].
    for (int it = 0; it < 90 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        (f(m) < target ? a : b) = m;
    }
    return 0.5 * (a + b);
}

}  // namespace

// --- Rademacher spectrum ----------------------------------------------------

SpectralMeasure rademacher_rho_y(double gamma) {
    if (!(gamma > 0.0))
        throw invalid_parameter("rademacher_rho_y: gamma must be > 0");
    const double s = std::sqrt(gamma);
    const double disc = std::sqrt(1.0 + 8.0 * gamma);
    const double u_hi = std::sqrt((1.0 + 2.0 * gamma + disc) / 2.0);
    const bool split = gamma >= 1.0;
    const double u_lo =
        split ? std::sqrt(std::max(0.0, (1.0 + 2.0 * gamma - disc) / 2.0))
              : 0.0;

    const double U = (3.0 + disc) * std::sqrt(1.0 + 2.0 * gamma + disc) /
                     (std::sqrt(2.0) * (1.0 + disc));
    const double L =
        split ? (-3.0 + disc) *
                    std::sqrt(std::max(0.0, 1.0 + 2.0 * gamma - disc)) /
                    (std::sqrt(2.0) * (-1.0 + disc))
              : 0.0;

    auto v_of = [gamma](double u) {
        const double arg = 1.0 - 2.0 * (u * u + gamma) +
                           std::sqrt(1.0 + 16.0 * gamma * u * u);
        return arg > 0.0 ? std::sqrt(arg / 2.0) : 0.0;
    };
    auto psi_of = [s, v_of](double u) {
        const double v2 = v_of(u) * v_of(u);
        const double dp = u + s, dm = u - s;
        return u + 0.5 * dp / (dp * dp + v2) + 0.5 * dm / (dm * dm + v2);
    };

    auto eval = [=](double x) {
        const double ax = std::abs(x);
        if (ax > U || (split && ax < L)) return 0.0;
        const double u =
            bisect_monotone(psi_of, ax, split ? u_lo : 0.0, u_hi);
        return v_of(u) / M_PI;
    };

    std::vector<Interval> support;
    if (split && L > 1e-12) {
        support = {{-U, -L}, {L, U}};
    } else {
        support = {{-U, U}};
    }
    return SpectralMeasure::with_density(std::move(support), std::move(eval));
}

// --- Bernoulli spectrum ------------------------------------------------------

SpectralMeasure bernoulli_rho_y(double gamma, double p) {
    if (!(gamma > 0.0))
        throw invalid_parameter("bernoulli_rho_y: gamma must be > 0");
    if (!(p > 0.0 && p < 1.0))
        throw invalid_parameter("bernoulli_rho_y: p must be in (0,1)");
    const double s = std::sqrt(gamma);

    // Supp(v) = { u : g(u) < 0 } for the quartic
    // g(u) = u^4 - 2 s u^3 + (gamma-1) u^2 + 2 p s u - p gamma.
    const double qb = -2.0 * s;
    const double qc = gamma - 1.0;
    const double qd = 2.0 * p * s;
    const double qe = -p * gamma;
    const auto roots = quartic_roots(qb, qc, qd, qe);

    std::vector<double> real_roots;
    for (const auto& z : roots) {
        if (std::abs(z.imag()) < 1e-10 * std::max(1.0, std::abs(z.real())))
            real_roots.push_back(
                polish_quartic_root(z.real(), qb, qc, qd, qe));
    }
    std::sort(real_roots.begin(), real_roots.end());
    if (real_roots.size() != 2 && real_roots.size() != 4)
        throw internal_error("bernoulli_rho_y: unexpected real-root count");

    std::vector<Interval> u_ranges;
    for (std::size_t i = 0; i + 1 < real_roots.size(); i += 2)
        u_ranges.push_back({real_roots[i], real_roots[i + 1]});

    auto v_of = [gamma, p, s](double u) {
        const double inner =
            s * (s - 2.0 * u) * (-2.0 * s * u + gamma + 4.0 * p - 2.0) + 1.0;
        if (inner < 0.0) return 0.0;
        const double arg = -2.0 * u * u + 2.0 * s * u + std::sqrt(inner) -
                           gamma + 1.0;
        return arg > 0.0 ? std::sqrt(arg / 2.0) : 0.0;
    };
    auto psi_of = [p, s, v_of](double u) {
        const double v2 = v_of(u) * v_of(u);
        const double dm = u - s;
        return u + p * u / (u * u + v2) +
               (1.0 - p) * dm / (dm * dm + v2);
    };

    std::vector<Interval> support;
    for (const auto& r : u_ranges)
        support.push_back({psi_of(r.lo), psi_of(r.hi)});

    auto eval = [u_ranges, support, psi_of, v_of](double x) {
        for (std::size_t k = 0; k < support.size(); ++k) {
            if (!support[k].contains(x)) continue;
            const double u =
                bisect_monotone(psi_of, x, u_ranges[k].lo, u_ranges[k].hi);
            return v_of(u) / M_PI;
        }
        return 0.0;
    };
    return SpectralMeasure::with_density(std::move(support), std::move(eval));
}

// --- Marchenko-Pastur spectrum ------------------------------------------------

namespace {

// Cauchy transform of (sqrt(gamma) MP(q)) boxplus semicircle solves
// G^3 + c2 G^2 + c1 G + c0 = 0 with the coefficients below; on the support
// the equation has a conjugate pair and the density is |Im G| / pi.
struct MpCubic {
    double s, q;
    // z = G + (s/q)/(1 - s G) + 1/G cleared of denominators; in the q -> inf
    // limit the cubic factors into (G^2 - z G + 1)(G - 1/s), the semicircle
    // pair plus a spurious real root.
    void coeffs(double z, double& c2, double& c1, double& c0) const {
        c2 = -(z + 1.0 / s);
        c1 = (1.0 - 1.0 / q) + z / s;
        c0 = -1.0 / s;
    }
    // Positive inside the support (conjugate pair present).
    double indicator(double z) const {
        double c2, c1, c0;
        coeffs(z, c2, c1, c0);
        const double p = c1 - c2 * c2 / 3.0;
        const double r = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
        return r * r / 4.0 + p * p * p / 27.0;
    }
    double density(double z) const {
        double c2, c1, c0;
        coeffs(z, c2, c1, c0);
        const double p = c1 - c2 * c2 / 3.0;
        const double r = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
        const double D = r * r / 4.0 + p * p * p / 27.0;
        if (D <= 0.0) return 0.0;
        const double sd = std::sqrt(D);
        const double A = std::cbrt(-r / 2.0 + sd);
        const double B = std::cbrt(-r / 2.0 - sd);
        return std::abs(std::sqrt(3.0) / 2.0 * (A - B)) / M_PI;
    }
};

}  // namespace

SpectralMeasure marchenko_pastur_rho_y(double gamma, double q) {
    if (!(gamma > 0.0))
        throw invalid_parameter("marchenko_pastur_rho_y: gamma must be > 0");
    if (!(q > 0.0))
        throw invalid_parameter("marchenko_pastur_rho_y: q must be > 0");
    const MpCubic cubic{std::sqrt(gamma), q};

    const double mp_hi = (1.0 + 1.0 / std::sqrt(q)) * (1.0 + 1.0 / std::sqrt(q));
    const double xmin = -2.5;
    const double xmax = std::sqrt(gamma) * mp_hi + 2.5;

    // Support is where the cubic has a conjugate pair; locate the sign
    // changes of the indicator and sharpen them by bisection.
    const int n = 4000;
    std::vector<Interval> support;
    double prev_x = xmin;
    double prev_ind = cubic.indicator(xmin);
    double open = 0.0;
    bool inside = prev_ind > 0.0;
    if (inside) open = xmin;
    for (int i = 1; i <= n; ++i) {
        const double x = xmin + (xmax - xmin) * i / n;
        const double ind = cubic.indicator(x);
        if ((ind > 0.0) != inside) {
            double a = prev_x, b = x;
            for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
                const double m = 0.5 * (a + b);
                ((cubic.indicator(m) > 0.0) == inside ? a : b) = m;
            }
            const double edge = 0.5 * (a + b);
            if (inside) {
                support.push_back({open, edge});
            } else {
                open = edge;
            }
            inside = !inside;
        }
        prev_x = x;
        prev_ind = ind;
    }
    if (inside) support.push_back({open, xmax});
    if (support.empty())
        throw internal_error("marchenko_pastur_rho_y: no support found");

    auto eval = [cubic](double x) { return cubic.density(x); };
    return SpectralMeasure::with_density(std::move(support), std::move(eval));
}

// --- critical SNR -------------------------------------------------------------

double critical_gamma(PriorKind kind, double param) {
    switch (kind) {
        case PriorKind::rademacher:
            return 1.0;
        case PriorKind::bernoulli: {
            const double p = param;
            if (!(p > 0.0 && p < 1.0))
                throw invalid_parameter("critical_gamma: p must be in (0,1)");
            return 1.0 + 3.0 * std::cbrt(p * p * (1.0 - p)) +
                   3.0 * std::cbrt(p * (1.0 - p) * (1.0 - p));
        }
        case PriorKind::marchenko_pastur: {
            const double q = param;
            if (!(q > 0.0))
                throw invalid_parameter("critical_gamma: q must be > 0");
            if (q <= 1.0)
                throw no_transition_error(
                    "critical_gamma: no support transition for q <= 1");
            const double c = std::cbrt(q) - 1.0;
            return q / (c * c * c);
        }
    }
    throw invalid_parameter("critical_gamma: unknown prior kind");
}

}  // namespace mdnz

#include "mdnz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "mdnz/errors.hpp"

namespace mdnz::quad {

namespace {

// Gauss-Kronrod 7-15 pair (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
    double lo, hi;
    double value;
    double err;
};

Panel evaluate_panel(const Integrand& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double fc = f(c);
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        kron += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    kron *= h;
    gauss *= h;
    return Panel{lo, hi, kron, std::abs(kron - gauss)};
}

}  // namespace

double adaptive_integral(const Integrand& f, double lo, double hi,
                         const Options& opt) {
    if (!(hi > lo)) {
        if (hi == lo) return 0.0;
        return -adaptive_integral(f, hi, lo, opt);
    }
    const double span = hi - lo;
    const double min_width = span * std::ldexp(1.0, -opt.max_depth);

    auto cmp = [](const Panel& a, const Panel& b) { return a.err < b.err; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
    heap.push(evaluate_panel(f, lo, hi));

    double total = heap.top().value;
    double total_err = heap.top().err;
    std::size_t n_panels = 1;

    while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        Panel worst = heap.top();
        if (worst.hi - worst.lo < min_width || n_panels >= opt.max_panels) {
            throw accuracy_error("adaptive_integral: panel budget exhausted",
                                 total);
        }
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        Panel left = evaluate_panel(f, worst.lo, mid);
        Panel right = evaluate_panel(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++n_panels;
        if (!std::isfinite(total)) {
            throw accuracy_error("adaptive_integral: non-finite estimate",
                                 total);
        }
    }
    return total;
}

double adaptive_integral_sqrt_edges(const Integrand& f, double lo, double hi,
                                    const Options& opt) {
    if (!(hi > lo)) return 0.0;
    const double mid = 0.5 * (lo + hi);
    const double wl = std::sqrt(mid - lo);
    const double wr = std::sqrt(hi - mid);
    Options half = opt;
    half.rel_tol = 0.5 * opt.rel_tol;
    half.abs_tol = 0.5 * opt.abs_tol;
    const double left = adaptive_integral(
        [&](double u) { return 2.0 * u * f(lo + u * u); }, 0.0, wl, half);
    const double right = adaptive_integral(
        [&](double u) { return 2.0 * u * f(hi - u * u); }, 0.0, wr, half);
    return left + right;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw invalid_parameter("gauss_legendre: n must be >= 1");
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev-based initial guess.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return {std::move(x), std::move(w)};
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
    if (n < 1) throw invalid_parameter("gauss_hermite: n must be >= 1");
    std::vector<double> x(n), w(n);
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    double z = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) -
                1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * x[n - 1];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * x[n - 2];
        } else {
            z = 2.0 * z - x[n - i + 1];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            double p0 = pim4, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = z * std::sqrt(2.0 / (j + 1.0)) * p1 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p2;
            }
            pp = std::sqrt(2.0 * n) * p1;
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[n - 1 - i] = z;
        x[i] = -z;
        w[n - 1 - i] = 2.0 / (pp * pp);
        w[i] = w[n - 1 - i];
    }
    return {std::move(x), std::move(w)};
}

double gauss_expectation(const Integrand& f) {
    static const auto rule = gauss_hermite(61);
    const auto& [x, w] = rule;
    double acc = 0.0;
    const double sqrt2 = std::sqrt(2.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += w[i] * f(sqrt2 * x[i]);
    }
    return acc / std::sqrt(M_PI);
}

}  // namespace mdnz::quad

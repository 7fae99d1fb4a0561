#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace mdnz::quad {

using Integrand = std::function<double(double)>;

struct Options {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_depth = 60;       // minimal panel width is span * 2^-max_depth
    std::size_t max_panels = 200000;
};

// Globally adaptive Gauss-Kronrod (7-15) quadrature on a finite interval.
// The integrand may be singular-but-integrable at the endpoints; nodes are
// strictly interior. Throws accuracy_error with the best estimate attached
// when the depth or panel budget is exhausted.
double adaptive_integral(const Integrand& f, double lo, double hi,
                         const Options& opt = {});

inline double adaptive_integral(const Integrand& f, double lo, double hi,
                                double rel_tol) {
    Options opt;
    opt.rel_tol = rel_tol;
    return adaptive_integral(f, lo, hi, opt);
}

// Same, after the substitutions x = lo + u^2 and x = hi - u^2 on the two
// halves. Integrands behaving like sqrt(x - edge) become analytic, which is
// the generic edge behavior of the spectral densities handled here.
double adaptive_integral_sqrt_edges(const Integrand& f, double lo, double hi,
                                    const Options& opt = {});

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

// Nodes and weights of the n-point Gauss-Hermite rule, weight exp(-x^2).
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

// E[f(Z)] for Z ~ N(0,1) by 61-node Gauss-Hermite.
double gauss_expectation(const Integrand& f);

}  // namespace mdnz::quad

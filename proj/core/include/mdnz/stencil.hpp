#pragma once

#include <array>
#include <functional>
#include <vector>

namespace mdnz {

// Five samples f(center + k*step), k = -2..2, for the classic stencils.
struct StencilGrid {
    double center = 0.0;
    double step = 0.0;
    std::array<double, 5> values{};  // values[k + 2] = f(center + k*step)

    static StencilGrid sample(const std::function<double(double)>& f,
                              double center, double step);
};

// (-f2 + 8f1 - 8f_1 + f_2) / (12h); exact through degree-4 polynomials.
double five_point_d1(const StencilGrid& g);

// (-f2 + 16f1 - 30f0 + 16f_1 - f_2) / (12h^2).
double five_point_d2(const StencilGrid& g);

// Fit g(x)/(x - xc) = a*ln|x - xc| + a*b by ordinary least squares, both
// sides of xc jointly.
struct SingularityFit {
    double a = 0.0;
    double b = 0.0;
    double residual = 0.0;  // sum of squared residuals of the linear fit
    double gamma_c = 0.0;
};

SingularityFit fit_log_singularity(const std::vector<double>& gammas,
                                   const std::vector<double>& values,
                                   double gamma_c);

}  // namespace mdnz

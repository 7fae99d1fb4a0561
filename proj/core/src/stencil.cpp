#include "mdnz/stencil.hpp"

#include <cmath>

#include "mdnz/errors.hpp"

namespace mdnz {

StencilGrid StencilGrid::sample(const std::function<double(double)>& f,
                                double center, double step) {
    if (!(step > 0.0)) throw invalid_parameter("StencilGrid: step must be > 0");
    StencilGrid g;
    g.center = center;
    g.step = step;
    for (int k = -2; k <= 2; ++k) g.values[k + 2] = f(center + k * step);
    return g;
}

double five_point_d1(const StencilGrid& g) {
    const auto& f = g.values;
    return (-f[4] + 8.0 * f[3] - 8.0 * f[1] + f[0]) / (12.0 * g.step);
}

double five_point_d2(const StencilGrid& g) {
    const auto& f = g.values;
    return (-f[4] + 16.0 * f[3] - 30.0 * f[2] + 16.0 * f[1] - f[0]) /
           (12.0 * g.step * g.step);
}

SingularityFit fit_log_singularity(const std::vector<double>& gammas,
                                   const std::vector<double>& values,
                                   double gamma_c) {
    if (gammas.size() != values.size())
        throw invalid_parameter("fit_log_singularity: length mismatch");
    if (gammas.size() < 3)
        throw invalid_parameter("fit_log_singularity: need at least 3 points");

    // y = g(gamma)/(gamma - gamma_c) against t = ln|gamma - gamma_c|.
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const double n = static_cast<double>(gammas.size());
    std::vector<double> ts(gammas.size()), ys(gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const double d = gammas[i] - gamma_c;
        if (d == 0.0)
            throw invalid_parameter("fit_log_singularity: point at gamma_c");
        ts[i] = std::log(std::abs(d));
        ys[i] = values[i] / d;
        st += ts[i];
        sy += ys[i];
        stt += ts[i] * ts[i];
        sty += ts[i] * ys[i];
    }
    const double det = n * stt - st * st;
    const double a = (n * sty - st * sy) / det;
    const double intercept = (sy - a * st) / n;

    SingularityFit fit;
    fit.a = a;
    fit.b = intercept / a;
    fit.gamma_c = gamma_c;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const double r = ys[i] - (a * ts[i] + intercept);
        fit.residual += r * r;
    }
    return fit;
}

}  // namespace mdnz

#include "mdnz/stats.hpp"

#include <algorithm>
#include <cmath>

#include "mdnz/errors.hpp"

namespace mdnz {

double wasserstein2_empirical(std::vector<double> u, std::vector<double> v) {
    if (u.size() != v.size())
        throw invalid_parameter("wasserstein2_empirical: length mismatch");
    if (u.empty())
        throw invalid_parameter("wasserstein2_empirical: empty input");
    std::sort(u.begin(), u.end());
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(u.size()));
}

std::vector<HistogramBin> spectral_histogram(const std::vector<double>& eigs,
                                             int bins) {
    if (eigs.empty())
        throw invalid_parameter("spectral_histogram: empty input");
    if (bins < 1) throw invalid_parameter("spectral_histogram: bins must be >= 1");
    const auto [mn_it, mx_it] = std::minmax_element(eigs.begin(), eigs.end());
    double lo = *mn_it, hi = *mx_it;
    if (hi == lo) hi = lo + 1.0;  // degenerate sample, one wide bin
    const double width = (hi - lo) / bins;
    std::vector<HistogramBin> out(bins);
    for (int b = 0; b < bins; ++b) {
        out[b].lo = lo + b * width;
        out[b].hi = lo + (b + 1) * width;
    }
    for (double x : eigs) {
        int b = static_cast<int>((x - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        out[b].density += 1.0;
    }
    const double norm = 1.0 / (static_cast<double>(eigs.size()) * width);
    for (auto& bin : out) bin.density *= norm;
    return out;
}

double ks_distance(const std::vector<double>& eigs, const SpectralMeasure& m) {
    if (eigs.empty()) throw invalid_parameter("ks_distance: empty input");
    std::vector<double> sorted(eigs);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        // Group ties so that the empirical CDF jumps once per distinct value.
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double cdf = m.cdf(sorted[i]);
        // Right-continuous jumps: the lower empirical step compares against
        // the left limit of the CDF at atom locations.
        double atom_at = 0.0;
        for (const auto& a : m.atoms())
            if (a.location == sorted[i]) atom_at += a.weight;
        d = std::max(d, std::abs((j + 1) / n - cdf));
        d = std::max(d, std::abs(i / n - (cdf - atom_at)));
        i = j + 1;
    }
    return d;
}

}  // namespace mdnz

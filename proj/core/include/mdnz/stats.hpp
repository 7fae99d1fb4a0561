#pragma once

#include <vector>

#include "mdnz/measure.hpp"

namespace mdnz {

// W2 between two empirical measures of equal size: sort both, root mean
// square of the coordinate-wise gaps (the rearrangement optimum over
// permutations).
double wasserstein2_empirical(std::vector<double> u, std::vector<double> v);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    double density = 0.0;
};

// Equal-width histogram over [min, max] of the data, normalized to unit
// integral.
std::vector<HistogramBin> spectral_histogram(const std::vector<double>& eigs,
                                             int bins);

// sup_x |empirical CDF - m.cdf(x)|, evaluated at the sample points.
double ks_distance(const std::vector<double>& eigs, const SpectralMeasure& m);

}  // namespace mdnz

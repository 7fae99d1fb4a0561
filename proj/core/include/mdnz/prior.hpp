#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mdnz {

// A symmetric zero-mean scalar law p_X with variance rho. Drives the AMP
// denoisers, the replica formula, and factor-signal sampling.
class ScalarPrior {
  public:
    enum class Kind { gaussian, rademacher, uniform, discrete };

    static ScalarPrior gaussian(double rho = 1.0);
    static ScalarPrior rademacher();
    static ScalarPrior uniform(double a, double b);  // requires b = -a
    static ScalarPrior discrete(std::vector<double> points,
                                std::vector<double> weights);

    Kind kind() const { return kind_; }
    double variance() const { return rho_; }

    double sample(std::mt19937_64& rng) const;

    // Posterior mean E[X | sX + sqrt(s) xi = u] and the posterior variance
    // (which is also d/du of the mean).
    double posterior_mean(double u, double s) const;
    double posterior_var(double u, double s) const;

    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    double uniform_halfwidth() const { return half_; }

    std::string describe() const;

    // "gaussian", "gaussian:rho=2", "rademacher", "uniform:-1,1",
    // "discrete:x1=w1,x2=w2,...".
    static ScalarPrior parse(const std::string& text);

  private:
    Kind kind_ = Kind::gaussian;
    double rho_ = 1.0;
    double half_ = 0.0;                 // uniform half-width
    std::vector<double> points_;        // discrete support
    std::vector<double> weights_;
};

}  // namespace mdnz

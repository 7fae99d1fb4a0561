#include "mdnz/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mdnz/errors.hpp"
#include "mdnz/quadrature.hpp"

namespace mdnz {

ScalarPrior ScalarPrior::gaussian(double rho) {
    if (!(rho > 0.0)) throw invalid_parameter("gaussian prior: rho must be > 0");
    ScalarPrior p;
    p.kind_ = Kind::gaussian;
    p.rho_ = rho;
    return p;
}

ScalarPrior ScalarPrior::rademacher() {
    ScalarPrior p;
    p.kind_ = Kind::rademacher;
    p.rho_ = 1.0;
    p.points_ = {-1.0, 1.0};
    p.weights_ = {0.5, 0.5};
    return p;
}

ScalarPrior ScalarPrior::uniform(double a, double b) {
    if (std::abs(a + b) > 1e-12 || !(b > a))
        throw invalid_parameter("uniform prior: law must be symmetric (a = -b)");
    ScalarPrior p;
    p.kind_ = Kind::uniform;
    p.half_ = b;
    p.rho_ = b * b / 3.0;
    return p;
}

ScalarPrior ScalarPrior::discrete(std::vector<double> points,
                                  std::vector<double> weights) {
    if (points.size() != weights.size() || points.empty())
        throw invalid_parameter("discrete prior: bad point/weight lists");
    double mass = 0.0, mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(weights[i] > 0.0))
            throw invalid_parameter("discrete prior: weights must be > 0");
        mass += weights[i];
        mean += weights[i] * points[i];
        m2 += weights[i] * points[i] * points[i];
    }
    if (std::abs(mass - 1.0) > 1e-10)
        throw invalid_parameter("discrete prior: weights must sum to 1");
    if (std::abs(mean) > 1e-10)
        throw invalid_parameter("discrete prior: law must be zero-mean");
    if (!(m2 > 0.0))
        throw invalid_parameter("discrete prior: variance must be positive");
    ScalarPrior p;
    p.kind_ = Kind::discrete;
    p.points_ = std::move(points);
    p.weights_ = std::move(weights);
    p.rho_ = m2;
    return p;
}

double ScalarPrior::sample(std::mt19937_64& rng) const {
    switch (kind_) {
        case Kind::gaussian: {
            std::normal_distribution<double> normal(0.0, std::sqrt(rho_));
            return normal(rng);
        }
        case Kind::rademacher: {
            return (rng() & 1u) ? 1.0 : -1.0;
        }
        case Kind::uniform: {
            std::uniform_real_distribution<double> u(-half_, half_);
            return u(rng);
        }
        case Kind::discrete: {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            double r = u(rng);
            for (std::size_t i = 0; i < points_.size(); ++i) {
                r -= weights_[i];
                if (r <= 0.0) return points_[i];
            }
            return points_.back();
        }
    }
    throw internal_error("ScalarPrior::sample: bad kind");
}

double ScalarPrior::posterior_mean(double u, double s) const {
    switch (kind_) {
        case Kind::gaussian:
            return u * rho_ / (s * rho_ + 1.0);
        case Kind::rademacher:
            return std::tanh(u);
        case Kind::discrete: {
            // Posterior weights proportional to w_i exp(u x_i - s x_i^2 / 2).
            double lmax = -std::numeric_limits<double>::infinity();
            for (double x : points_)
                lmax = std::max(lmax, u * x - 0.5 * s * x * x);
            double z = 0.0, zx = 0.0;
            for (std::size_t i = 0; i < points_.size(); ++i) {
                const double e = std::exp(u * points_[i] -
                                          0.5 * s * points_[i] * points_[i] -
                                          lmax) *
                                 weights_[i];
                z += e;
                zx += e * points_[i];
            }
            return zx / z;
        }
        case Kind::uniform: {
            static const auto rule = quad::gauss_legendre(64);
            double lmax = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < 64; ++k) {
                const double x = half_ * rule.first[k];
                lmax = std::max(lmax, u * x - 0.5 * s * x * x);
            }
            double z = 0.0, zx = 0.0;
            for (int k = 0; k < 64; ++k) {
                const double x = half_ * rule.first[k];
                const double e =
                    rule.second[k] * std::exp(u * x - 0.5 * s * x * x - lmax);
                z += e;
                zx += e * x;
            }
            return zx / z;
        }
    }
    throw internal_error("ScalarPrior::posterior_mean: bad kind");
}

double ScalarPrior::posterior_var(double u, double s) const {
    switch (kind_) {
        case Kind::gaussian:
            return rho_ / (s * rho_ + 1.0);
        case Kind::rademacher: {
            const double t = std::tanh(u);
            return 1.0 - t * t;
        }
        case Kind::discrete: {
            double lmax = -std::numeric_limits<double>::infinity();
            for (double x : points_)
                lmax = std::max(lmax, u * x - 0.5 * s * x * x);
            double z = 0.0, zx = 0.0, zxx = 0.0;
            for (std::size_t i = 0; i < points_.size(); ++i) {
                const double e = std::exp(u * points_[i] -
                                          0.5 * s * points_[i] * points_[i] -
                                          lmax) *
                                 weights_[i];
                z += e;
                zx += e * points_[i];
                zxx += e * points_[i] * points_[i];
            }
            const double m = zx / z;
            return zxx / z - m * m;
        }
        case Kind::uniform: {
            static const auto rule = quad::gauss_legendre(64);
            double lmax = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < 64; ++k) {
                const double x = half_ * rule.first[k];
                lmax = std::max(lmax, u * x - 0.5 * s * x * x);
            }
            double z = 0.0, zx = 0.0, zxx = 0.0;
            for (int k = 0; k < 64; ++k) {
                const double x = half_ * rule.first[k];
                const double e =
                    rule.second[k] * std::exp(u * x - 0.5 * s * x * x - lmax);
                z += e;
                zx += e * x;
                zxx += e * x * x;
            }
            const double m = zx / z;
            return zxx / z - m * m;
        }
    }
    throw internal_error("ScalarPrior::posterior_var: bad kind");
}

std::string ScalarPrior::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::gaussian:
            os << "gaussian:rho=" << rho_;
            break;
        case Kind::rademacher:
            os << "rademacher";
            break;
        case Kind::uniform:
            os << "uniform:" << -half_ << "," << half_;
            break;
        case Kind::discrete: {
            os << "discrete:";
            for (std::size_t i = 0; i < points_.size(); ++i) {
                if (i) os << ",";
                os << points_[i] << "=" << weights_[i];
            }
            break;
        }
    }
    return os.str();
}

ScalarPrior ScalarPrior::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string args =
        colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "gaussian") {
        if (args.empty()) return gaussian();
        const auto eq = args.find('=');
        return gaussian(std::stod(eq == std::string::npos ? args
                                                          : args.substr(eq + 1)));
    }
    if (head == "rademacher") return rademacher();
    if (head == "uniform") {
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw invalid_parameter("prior: uniform needs two bounds");
        return uniform(std::stod(args.substr(0, comma)),
                       std::stod(args.substr(comma + 1)));
    }
    if (head == "discrete") {
        std::vector<double> xs, ws;
        std::stringstream ss(args);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw invalid_parameter("prior: discrete needs x=w pairs");
            xs.push_back(std::stod(item.substr(0, eq)));
            ws.push_back(std::stod(item.substr(eq + 1)));
        }
        return discrete(std::move(xs), std::move(ws));
    }
    throw invalid_parameter("prior: unknown prior '" + text + "'");
}

}  // namespace mdnz

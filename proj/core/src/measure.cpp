#include "mdnz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mdnz/errors.hpp"
#include "mdnz/quadrature.hpp"

namespace mdnz {

namespace {

void check_sorted_disjoint(const std::vector<Interval>& support) {
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (!(support[i].hi > support[i].lo))
            throw invalid_parameter("SpectralMeasure: empty support interval");
        if (i > 0 && !(support[i].lo > support[i - 1].hi))
            throw invalid_parameter(
                "SpectralMeasure: support intervals must be sorted and "
                "disjoint");
    }
}

}  // namespace

SpectralMeasure SpectralMeasure::from_atoms(std::vector<Atom> atoms) {
    SpectralMeasure m;
    m.atoms_ = std::move(atoms);
    std::sort(m.atoms_.begin(), m.atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    return m;
}

SpectralMeasure SpectralMeasure::with_density(std::vector<Interval> support,
                                              DensityFn density,
                                              std::vector<Atom> atoms) {
    check_sorted_disjoint(support);
    SpectralMeasure m;
    m.support_ = std::move(support);
    m.density_ = std::move(density);
    m.atoms_ = std::move(atoms);
    return m;
}

SpectralMeasure SpectralMeasure::from_grid(std::vector<double> xs,
                                           std::vector<double> rho,
                                           std::vector<Atom> atoms) {
    if (xs.size() != rho.size() || xs.size() < 2)
        throw invalid_parameter("SpectralMeasure: bad tabulation");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw invalid_parameter(
                "SpectralMeasure: abscissae must be strictly increasing");
    for (double r : rho)
        if (r < 0.0 || !std::isfinite(r))
            throw invalid_parameter("SpectralMeasure: negative density value");

    // Tabulations carry one interval spanning the grid; interior zeros are
    // the business of support_components, not of the support list.
    std::vector<Interval> support{{xs.front(), xs.back()}};
    auto eval = [xs = std::move(xs), rho = std::move(rho)](double x) {
        if (x < xs.front() || x > xs.back()) return 0.0;
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs.begin());
        if (i == 0) return rho.front();
        if (i >= xs.size()) return rho.back();
        const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return (1.0 - t) * rho[i - 1] + t * rho[i];
    };
    return with_density(std::move(support), std::move(eval), std::move(atoms));
}

double SpectralMeasure::density(double x) const {
    if (!has_density()) return 0.0;
    for (const auto& iv : support_) {
        if (iv.contains(x)) {
            const double v = density_(x);
            return v > 0.0 ? v : 0.0;
        }
    }
    return 0.0;
}

double SpectralMeasure::atom_mass() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight;
    return s;
}

double SpectralMeasure::continuous_mass(double rel_tol) const {
    if (!has_density()) return 0.0;
    quad::Options opt;
    opt.rel_tol = rel_tol;
    double s = 0.0;
    for (const auto& iv : support_) {
        s += quad::adaptive_integral_sqrt_edges(
            [this](double x) { return density_(x); }, iv.lo, iv.hi, opt);
    }
    return s;
}

double SpectralMeasure::total_mass(double rel_tol) const {
    return atom_mass() + continuous_mass(rel_tol);
}

double SpectralMeasure::integrate(const std::function<double(double)>& f,
                                  double rel_tol) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight * f(a.location);
    if (has_density()) {
        quad::Options opt;
        opt.rel_tol = rel_tol;
        for (const auto& iv : support_) {
            s += quad::adaptive_integral_sqrt_edges(
                [&](double x) { return f(x) * density_(x); }, iv.lo, iv.hi,
                opt);
        }
    }
    return s;
}

double SpectralMeasure::moment(int k, double rel_tol) const {
    return integrate([k](double x) { return std::pow(x, k); }, rel_tol);
}

double SpectralMeasure::support_min() const {
    double m = std::numeric_limits<double>::infinity();
    if (!atoms_.empty()) m = std::min(m, atoms_.front().location);
    if (!support_.empty()) m = std::min(m, support_.front().lo);
    return m;
}

double SpectralMeasure::support_max() const {
    double m = -std::numeric_limits<double>::infinity();
    if (!atoms_.empty()) m = std::max(m, atoms_.back().location);
    if (!support_.empty()) m = std::max(m, support_.back().hi);
    return m;
}

double SpectralMeasure::distance_to_support(double z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms_) d = std::min(d, std::abs(z - a.location));
    for (const auto& iv : support_) {
        if (iv.contains(z)) return 0.0;
        d = std::min(d, std::min(std::abs(z - iv.lo), std::abs(z - iv.hi)));
    }
    return d;
}

bool SpectralMeasure::has_atom_at(double x, double tol) const {
    for (const auto& a : atoms_)
        if (std::abs(a.location - x) <= tol) return true;
    return false;
}

double SpectralMeasure::cdf(double x) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (a.location <= x) s += a.weight;  // right-continuous jumps
    if (has_density()) {
        for (const auto& iv : support_) {
            if (x <= iv.lo) break;
            const double hi = std::min(x, iv.hi);
            s += quad::adaptive_integral_sqrt_edges(
                [this](double t) { return density_(t); }, iv.lo, hi,
                quad::Options{1e-9, 1e-12, 60, 200000});
        }
    }
    return s;
}

void SpectralMeasure::validate(double mass_tol) const {
    check_sorted_disjoint(support_);
    for (const auto& a : atoms_) {
        if (!(a.weight > 0.0) || a.weight > 1.0 + mass_tol)
            throw invalid_parameter("SpectralMeasure: atom weight not in (0,1]");
        if (!std::isfinite(a.location))
            throw invalid_parameter("SpectralMeasure: non-finite atom");
    }
    const double mass = total_mass(std::min(mass_tol, 1e-9));
    if (std::abs(mass - 1.0) > mass_tol) {
        std::ostringstream os;
        os << "SpectralMeasure: total mass " << mass << " deviates from 1";
        throw invalid_parameter(os.str());
    }
}

nlohmann::json SpectralMeasure::to_json(int points_per_interval) const {
    nlohmann::json j;
    j["atoms"] = nlohmann::json::array();
    for (const auto& a : atoms_)
        j["atoms"].push_back({{"x", a.location}, {"w", a.weight}});
    j["support"] = nlohmann::json::array();
    for (const auto& iv : support_)
        j["support"].push_back({iv.lo, iv.hi});
    if (has_density()) {
        std::vector<double> xs, rho;
        for (const auto& iv : support_) {
            for (int i = 0; i <= points_per_interval; ++i) {
                const double x =
                    iv.lo + (iv.hi - iv.lo) * i / points_per_interval;
                xs.push_back(x);
                rho.push_back(density(x));
            }
        }
        j["grid"] = {{"x", xs}, {"rho", rho}};
    }
    return j;
}

SpectralMeasure SpectralMeasure::from_json(const nlohmann::json& j) {
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms"))
            atoms.push_back({a.at("x").get<double>(), a.at("w").get<double>()});
    }
    if (!j.contains("grid")) return from_atoms(std::move(atoms));

    std::vector<double> xs = j.at("grid").at("x").get<std::vector<double>>();
    std::vector<double> rho =
        j.at("grid").at("rho").get<std::vector<double>>();
    std::vector<Interval> support;
    if (j.contains("support")) {
        for (const auto& iv : j.at("support"))
            support.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    } else if (!xs.empty()) {
        support.push_back({xs.front(), xs.back()});
    }

    auto eval = [xs, rho](double x) {
        if (x < xs.front() || x > xs.back()) return 0.0;
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs.begin());
        if (i == 0) return rho.front();
        if (i >= xs.size()) return rho.back();
        const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return (1.0 - t) * rho[i - 1] + t * rho[i];
    };
    return with_density(std::move(support), std::move(eval), std::move(atoms));
}

// --- stock measures ---------------------------------------------------------

SpectralMeasure semicircle(double variance) {
    if (!(variance > 0.0))
        throw invalid_parameter("semicircle: variance must be > 0");
    const double sigma = std::sqrt(variance);
    const double edge = 2.0 * sigma;
    auto eval = [variance, edge](double x) {
        const double d = 4.0 * variance - x * x;
        return d > 0.0 ? std::sqrt(d) / (2.0 * M_PI * variance) : 0.0;
    };
    return SpectralMeasure::with_density({{-edge, edge}}, eval);
}

SpectralMeasure uniform_measure(double a, double b) {
    if (!(b > a)) throw invalid_parameter("uniform_measure: need a < b");
    const double h = 1.0 / (b - a);
    return SpectralMeasure::with_density({{a, b}}, [h](double) { return h; });
}

SpectralMeasure delta_measure(double location) {
    return SpectralMeasure::from_atoms({{location, 1.0}});
}

SpectralMeasure rademacher_spectrum() {
    return SpectralMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}});
}

SpectralMeasure bernoulli_spectrum(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw invalid_parameter("bernoulli_spectrum: p must be in (0,1)");
    return SpectralMeasure::from_atoms({{0.0, p}, {1.0, 1.0 - p}});
}

SpectralMeasure marchenko_pastur(double q) {
    if (!(q > 0.0)) throw invalid_parameter("marchenko_pastur: q must be > 0");
    const double rq = 1.0 / std::sqrt(q);
    const double lo = (1.0 - rq) * (1.0 - rq);
    const double hi = (1.0 + rq) * (1.0 + rq);
    auto eval = [lo, hi](double x) {
        if (x <= 0.0) return 0.0;
        const double d = (x - lo) * (hi - x);
        return d > 0.0 ? std::sqrt(d) / (2.0 * M_PI * x) : 0.0;
    };
    std::vector<Atom> atoms;
    if (q > 1.0) atoms.push_back({0.0, 1.0 - 1.0 / q});
    return SpectralMeasure::with_density({{lo, hi}}, eval, std::move(atoms));
}

SpectralMeasure scale_measure(const SpectralMeasure& m, double a) {
    if (!(a > 0.0)) throw invalid_parameter("scale_measure: factor must be > 0");
    std::vector<Atom> atoms = m.atoms();
    for (auto& at : atoms) at.location *= a;
    if (!m.has_density()) return SpectralMeasure::from_atoms(std::move(atoms));
    std::vector<Interval> support = m.support();
    for (auto& iv : support) {
        iv.lo *= a;
        iv.hi *= a;
    }
    auto eval = [m, a](double x) { return m.density(x / a) / a; };
    return SpectralMeasure::with_density(std::move(support), std::move(eval),
                                         std::move(atoms));
}

SpectralMeasure parse_measure(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string args =
        colon == std::string::npos ? "" : text.substr(colon + 1);
    auto parse_value = [&](const std::string& s) {
        const auto eq = s.find('=');
        return std::stod(eq == std::string::npos ? s : s.substr(eq + 1));
    };
    if (head == "rademacher") return rademacher_spectrum();
    if (head == "wigner") return semicircle(1.0);
    if (head == "bernoulli") return bernoulli_spectrum(parse_value(args));
    if (head == "mp") return marchenko_pastur(parse_value(args));
    if (head == "delta") return delta_measure(parse_value(args));
    if (head == "uniform") {
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw invalid_parameter("parse_measure: uniform needs two bounds");
        return uniform_measure(std::stod(args.substr(0, comma)),
                               std::stod(args.substr(comma + 1)));
    }
    throw invalid_parameter("parse_measure: unknown measure '" + text + "'");
}

// --- integral transforms ----------------------------------------------------

namespace {
constexpr double kSupportClearance = 1e-12;
}

double cauchy_transform(const SpectralMeasure& m, double z) {
    if (m.distance_to_support(z) <= kSupportClearance)
        throw domain_error("cauchy_transform: z on the support");
    double s = 0.0;
    for (const auto& a : m.atoms()) s += a.weight / (z - a.location);
    if (m.has_density()) {
        quad::Options opt;
        opt.rel_tol = 1e-10;
        for (const auto& iv : m.support()) {
            s += quad::adaptive_integral_sqrt_edges(
                [&](double x) { return m.density(x) / (z - x); }, iv.lo, iv.hi,
                opt);
        }
    }
    return s;
}

double cauchy_derivative(const SpectralMeasure& m, double z) {
    if (m.distance_to_support(z) <= kSupportClearance)
        throw domain_error("cauchy_derivative: z on the support");
    double s = 0.0;
    for (const auto& a : m.atoms()) {
        const double d = z - a.location;
        s -= a.weight / (d * d);
    }
    if (m.has_density()) {
        quad::Options opt;
        opt.rel_tol = 1e-10;
        for (const auto& iv : m.support()) {
            s -= quad::adaptive_integral_sqrt_edges(
                [&](double x) {
                    const double d = z - x;
                    return m.density(x) / (d * d);
                },
                iv.lo, iv.hi, opt);
        }
    }
    return s;
}

double hilbert_transform(const SpectralMeasure& m, double x) {
    if (m.has_atom_at(x))
        throw domain_error("hilbert_transform: atom at evaluation point");
    if (!m.has_density())
        throw domain_error("hilbert_transform: measure has no density part");

    quad::Options opt;
    opt.rel_tol = 1e-9;
    double s = 0.0;
    for (const auto& a : m.atoms()) s += a.weight / (x - a.location);

    for (const auto& iv : m.support()) {
        if (x > iv.lo && x < iv.hi) {
            // Singularity subtraction on the interval containing x.
            const double rho_x = m.density(x);
            s += quad::adaptive_integral(
                [&](double t) {
                    const double d = x - t;
                    if (d == 0.0) return 0.0;
                    return (m.density(t) - rho_x) / d;
                },
                iv.lo, iv.hi, opt);
            s += rho_x * std::log((x - iv.lo) / (iv.hi - x));
        } else {
            s += quad::adaptive_integral_sqrt_edges(
                [&](double t) { return m.density(t) / (x - t); }, iv.lo, iv.hi,
                opt);
        }
    }
    return s / M_PI;
}

// --- support introspection ----------------------------------------------------

SupportComponents support_components(const SpectralMeasure& m, double floor,
                                     double gap_tol) {
    SupportComponents out;
    if (!m.has_density()) {
        throw domain_error("support_components: measure has no density part");
    }
    struct Run {
        Interval iv;
        double scan_h;
        std::size_t parent;
    };
    std::vector<Run> raw;
    for (std::size_t k = 0; k < m.support().size(); ++k) {
        const auto& iv = m.support()[k];
        // Scan for sub-intervals where the density clears the floor.
        const int n = 2000;
        const double h = iv.length() / n;
        int run_start = -1;
        for (int i = 0; i <= n; ++i) {
            const double x = iv.lo + i * h;
            const bool above = m.density(x) > floor;
            if (above && run_start < 0) run_start = i;
            if ((!above || i == n) && run_start >= 0) {
                const int run_end = above ? i : i - 1;
                raw.push_back(
                    {{iv.lo + run_start * h, iv.lo + run_end * h}, h, k});
                run_start = -1;
            }
        }
    }
    // Merge runs separated by less than the gap tolerance. Within one
    // declared interval, gaps narrower than two scan cells are below the
    // scan's resolution and merge as well; across declared intervals the
    // edges are exact and only gap_tol applies.
    std::size_t last_parent = 0;
    for (const auto& run : raw) {
        const bool same_parent =
            !out.intervals.empty() && run.parent == last_parent;
        const double merge_tol =
            same_parent ? std::max(gap_tol, 2.0 * run.scan_h) : gap_tol;
        if (!out.intervals.empty() &&
            run.iv.lo - out.intervals.back().hi <= merge_tol) {
            out.intervals.back().hi = run.iv.hi;
        } else {
            out.intervals.push_back(run.iv);
        }
        last_parent = run.parent;
    }
    out.count = static_cast<int>(out.intervals.size());
    return out;
}

}  // namespace mdnz

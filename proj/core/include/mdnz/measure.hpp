#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mdnz {

struct Atom {
    double location = 0.0;
    double weight = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

// A probability measure on the real line: point masses plus a
// piecewise-continuous density on a union of disjoint closed intervals.
// Values are immutable after construction and safe to share across threads.
class SpectralMeasure {
  public:
    using DensityFn = std::function<double(double)>;

    SpectralMeasure() = default;

    static SpectralMeasure from_atoms(std::vector<Atom> atoms);
    static SpectralMeasure with_density(std::vector<Interval> support,
                                        DensityFn density,
                                        std::vector<Atom> atoms = {});
    // Tabulated density, interpolated piecewise-linearly between abscissae.
    static SpectralMeasure from_grid(std::vector<double> xs,
                                     std::vector<double> rho,
                                     std::vector<Atom> atoms = {});

    bool has_density() const { return !support_.empty(); }
    bool is_atomic() const { return support_.empty() && !atoms_.empty(); }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<Interval>& support() const { return support_; }

    // Continuous density; exactly 0 outside the declared support.
    double density(double x) const;

    double atom_mass() const;
    double continuous_mass(double rel_tol = 1e-9) const;
    double total_mass(double rel_tol = 1e-9) const;

    // Integral of f against the measure (atoms + density part).
    double integrate(const std::function<double(double)>& f,
                     double rel_tol = 1e-9) const;
    double moment(int k, double rel_tol = 1e-9) const;
    double second_moment() const { return moment(2); }

    double support_min() const;  // over atoms and intervals
    double support_max() const;
    double distance_to_support(double z) const;
    bool has_atom_at(double x, double tol = 1e-12) const;

    double cdf(double x) const;

    // Mass within 1e-8 of 1, density intervals sorted and disjoint,
    // atom weights in (0, 1].
    void validate(double mass_tol = 1e-8) const;

    // Closed-form densities are tabulated onto a grid when serialized.
    nlohmann::json to_json(int points_per_interval = 512) const;
    static SpectralMeasure from_json(const nlohmann::json& j);

  private:
    std::vector<Atom> atoms_;
    std::vector<Interval> support_;
    DensityFn density_;
};

// --- stock measures -------------------------------------------------------

// Density sqrt(4 v - x^2) / (2 pi v) on [-2 sqrt(v), 2 sqrt(v)].
SpectralMeasure semicircle(double variance);
SpectralMeasure uniform_measure(double a, double b);
SpectralMeasure delta_measure(double location);
SpectralMeasure rademacher_spectrum();         // (1/2) d_{-1} + (1/2) d_{+1}
SpectralMeasure bernoulli_spectrum(double p);  // p d_0 + (1-p) d_{+1}
// Spectral law of X X^T / N with X of aspect ratio N/M -> q:
// (1 - 1/q)^+ d_0 plus the rescaled Marchenko-Pastur bulk.
SpectralMeasure marchenko_pastur(double q);

// Law of a*X for X ~ m, a > 0.
SpectralMeasure scale_measure(const SpectralMeasure& m, double a);

// Shorthand strings: "rademacher", "bernoulli:p=0.9", "mp:q=8",
// "uniform:1,2", "delta:1", "wigner".
SpectralMeasure parse_measure(const std::string& text);

// --- integral transforms ---------------------------------------------------

// G(z) = int m(dx) / (z - x), z strictly off the support.
double cauchy_transform(const SpectralMeasure& m, double z);

// G'(z) = -int m(dx) / (z - x)^2, always negative.
double cauchy_derivative(const SpectralMeasure& m, double z);

// PV (1/pi) int rho(t) / (x - t) dt. Inside the support the principal value
// is computed by singularity subtraction; outside it equals G(x)/pi.
double hilbert_transform(const SpectralMeasure& m, double x);

// --- free additive convolution with the standard semicircle ----------------

// Tabulated subordination pair u -> (v(u), psi(u)); the convolved density at
// psi(u) is v(u)/pi.
struct SubordinationMap {
    std::vector<double> u_grid;
    std::vector<double> v_values;
    std::vector<double> psi_values;
};

struct FreeConvolution {
    SpectralMeasure density;
    SubordinationMap map;
};

FreeConvolution free_convolve_semicircle(const SpectralMeasure& m);

// --- the closed-form data densities ----------------------------------------

// ((1/2) d_{-sqrt(g)} + (1/2) d_{+sqrt(g)}) boxplus semicircle.
SpectralMeasure rademacher_rho_y(double gamma);
// (p d_0 + (1-p) d_{sqrt(g)}) boxplus semicircle.
SpectralMeasure bernoulli_rho_y(double gamma, double p);
// sqrt(g)-scaled Marchenko-Pastur boxplus semicircle.
SpectralMeasure marchenko_pastur_rho_y(double gamma, double q);

enum class PriorKind { rademacher, bernoulli, marchenko_pastur };

// SNR at which the support of the corresponding rho_Y splits in two.
double critical_gamma(PriorKind kind, double param = 0.0);

// --- support introspection --------------------------------------------------

struct SupportComponents {
    int count = 0;
    std::vector<Interval> intervals;
};

// Maximal disjoint intervals where the density exceeds `floor`, merged with
// gap tolerance `gap_tol`.
SupportComponents support_components(const SpectralMeasure& m,
                                     double floor = 1e-10,
                                     double gap_tol = 1e-6);

}  // namespace mdnz

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "mdnz/errors.hpp"
#include "mdnz/measure.hpp"
#include "mdnz/quadrature.hpp"

namespace mdnz {

namespace {

// Fixed discretization of a measure for the subordination kernels: the
// continuous part is replaced by composite Gauss-Legendre nodes (with the
// sqrt-edge substitution applied on each half interval), the atoms kept
// exact. F(u,w) and psi(u) then become plain sums over the nodes.
struct DiscretizedMeasure {
    std::vector<double> x;  // node locations (atoms included)
    std::vector<double> w;  // node weights, density folded in
    std::vector<Interval> support;
    double lo = 0.0, hi = 0.0;

    explicit DiscretizedMeasure(const SpectralMeasure& m) {
        for (const auto& a : m.atoms()) {
            x.push_back(a.location);
            w.push_back(a.weight);
        }
        const int panels = 40, order = 16;
        static const auto rule = quad::gauss_legendre(order);
        for (const auto& iv : m.support()) {
            const double mid = 0.5 * (iv.lo + iv.hi);
            // x = edge -+ t^2 on each half; nodes cluster at the edges.
            auto add_half = [&](double edge, double sign, double half_len) {
                const double tmax = std::sqrt(half_len);
                for (int p = 0; p < panels; ++p) {
                    const double t0 = tmax * p / panels;
                    const double t1 = tmax * (p + 1) / panels;
                    for (int k = 0; k < order; ++k) {
                        const double t =
                            0.5 * (t0 + t1) + 0.5 * (t1 - t0) * rule.first[k];
                        const double xx = edge + sign * t * t;
                        const double jac = 2.0 * t * 0.5 * (t1 - t0);
                        x.push_back(xx);
                        w.push_back(rule.second[k] * jac * m.density(xx));
                    }
                }
            };
            add_half(iv.lo, +1.0, mid - iv.lo);
            add_half(iv.hi, -1.0, iv.hi - mid);
        }
        support = m.support();
        for (const auto& a : m.atoms())
            support.push_back({a.location, a.location});
        std::sort(support.begin(), support.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        lo = support.front().lo;
        hi = support.back().hi;
    }

    // F(u,w) = int m(dx) / ((u-x)^2 + w^2).
    double kernel(double u, double ww) const {
        double s = 0.0;
        const double w2 = ww * ww;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = u - x[i];
            s += w[i] / (d * d + w2);
        }
        return s;
    }

    double kernel0(double u) const { return kernel(u, 0.0); }

    bool inside_support(double u) const {
        for (const auto& iv : support)
            if (u >= iv.lo - 1e-13 && u <= iv.hi + 1e-13) return true;
        return false;
    }

    // v(u): zero when the w->0 limit of F stays <= 1, otherwise the unique
    // root of F(u,w) = 1 in (0,1]; F(u,1) <= 1 holds for any probability
    // measure, so the bracket is always valid.
    double v(double u) const {
        if (!inside_support(u) && kernel0(u) <= 1.0) return 0.0;
        double wlo = 0.0, whi = 1.0;
        if (kernel(u, 1.0) > 1.0)
            throw internal_error("subordination: bracket violated at w=1");
        for (int it = 0; it < 80 && whi - wlo > 1e-15; ++it) {
            const double wm = 0.5 * (wlo + whi);
            (kernel(u, wm) > 1.0 ? wlo : whi) = wm;
        }
        return 0.5 * (wlo + whi);
    }

    double psi(double u, double vu) const {
        double s = 0.0;
        const double v2 = vu * vu;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = u - x[i];
            s += w[i] * d / (d * d + v2);
        }
        return u + s;
    }
};

}  // namespace

FreeConvolution free_convolve_semicircle(const SpectralMeasure& m) {
    if (m.atoms().empty() && !m.has_density())
        throw invalid_parameter("free_convolve_semicircle: empty measure");
    const double mass = m.total_mass(1e-9);
    if (std::abs(mass - 1.0) > 1e-6)
        throw invalid_parameter(
            "free_convolve_semicircle: measure is not normalized");
    if (!std::isfinite(m.support_min()) || !std::isfinite(m.support_max()))
        throw invalid_parameter(
            "free_convolve_semicircle: unbounded support");

    auto disc = std::make_shared<DiscretizedMeasure>(m);

    // v(u) > 0 only within distance 1 of the support: F(u,0) <= 1/dist^2.
    const double ulo = disc->lo - 1.0 - 1e-6;
    const double uhi = disc->hi + 1.0 + 1e-6;

    struct Node {
        double u, v, psi;
    };
    std::vector<Node> grid;
    const int n0 = 800;
    grid.reserve(4096);
    for (int i = 0; i <= n0; ++i) {
        const double u = ulo + (uhi - ulo) * i / n0;
        const double vu = disc->v(u);
        grid.push_back({u, vu, disc->psi(u, vu)});
    }

    // Refine until neighboring psi values differ by at most 1/2000 of the
    // psi span; support edges move like sqrt and need the extra points.
    const double psi_span = grid.back().psi - grid.front().psi;
    const double dpsi_max = psi_span / 2000.0;
    for (std::size_t pass = 0; pass < 16; ++pass) {
        std::vector<Node> refined;
        refined.reserve(grid.size() * 2);
        bool any = false;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            refined.push_back(grid[i]);
            const bool wide =
                grid[i + 1].psi - grid[i].psi > dpsi_max;
            const bool active = grid[i].v > 0.0 || grid[i + 1].v > 0.0;
            if (wide && active && grid.size() < 20000) {
                const double um = 0.5 * (grid[i].u + grid[i + 1].u);
                const double vm = disc->v(um);
                refined.push_back({um, vm, disc->psi(um, vm)});
                any = true;
            }
        }
        refined.push_back(grid.back());
        grid.swap(refined);
        if (!any) break;
    }

    // Locate the {v > 0} boundaries exactly: bisect on F(u,0) = 1 between
    // a positive node and its vanishing neighbor.
    auto edge_between = [&](double u_pos, double u_zero) {
        double a = u_pos, b = u_zero;
        for (int it = 0; it < 80 && std::abs(b - a) > 1e-13; ++it) {
            const double um = 0.5 * (a + b);
            const bool active =
                disc->inside_support(um) || disc->kernel0(um) > 1.0;
            (active ? a : b) = um;
        }
        return 0.5 * (a + b);
    };

    struct URange {
        double lo, hi;
    };
    std::vector<URange> ranges;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i].v <= 0.0) continue;
        double lo_u;
        if (i == 0) {
            lo_u = grid[i].u;
        } else {
            lo_u = edge_between(grid[i].u, grid[i - 1].u);
        }
        std::size_t j = i;
        while (j + 1 < grid.size() && grid[j + 1].v > 0.0) ++j;
        double hi_u;
        if (j + 1 == grid.size()) {
            hi_u = grid[j].u;
        } else {
            hi_u = edge_between(grid[j].u, grid[j + 1].u);
        }
        ranges.push_back({lo_u, hi_u});
        i = j + 1;
    }
    if (ranges.empty())
        throw internal_error("free_convolve_semicircle: no active region");

    std::vector<Interval> x_support;
    for (const auto& r : ranges)
        x_support.push_back({disc->psi(r.lo, 0.0), disc->psi(r.hi, 0.0)});

    // Point evaluation inverts the monotone psi by bisection, then reads
    // the density off v/pi.
    auto u_ranges = std::make_shared<std::vector<URange>>(std::move(ranges));
    auto eval = [disc, u_ranges, x_support](double xx) {
        for (std::size_t k = 0; k < u_ranges->size(); ++k) {
            const auto& xiv = x_support[k];
            if (xx < xiv.lo || xx > xiv.hi) continue;
            double a = (*u_ranges)[k].lo, b = (*u_ranges)[k].hi;
            for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
                const double um = 0.5 * (a + b);
                const double vm = disc->v(um);
                (disc->psi(um, vm) < xx ? a : b) = um;
            }
            const double u = 0.5 * (a + b);
            return disc->v(u) / M_PI;
        }
        return 0.0;
    };

    FreeConvolution out;
    out.density =
        SpectralMeasure::with_density(std::move(x_support), std::move(eval));
    out.map.u_grid.reserve(grid.size());
    for (const auto& node : grid) {
        out.map.u_grid.push_back(node.u);
        out.map.v_values.push_back(node.v);
        out.map.psi_values.push_back(node.psi);
    }
    return out;
}

}  // namespace mdnz

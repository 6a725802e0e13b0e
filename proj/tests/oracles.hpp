#pragma once

// Independent oracles used by the test suites. Everything here is brute
// force on purpose and must stay decoupled from the implementation paths it
// checks: finite differences for derivatives, recursive flood fill for
// component labeling, closed-form and quadrature volumes for enclosures.

#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "levifill/grid.hpp"
#include "levifill/surface.hpp"

namespace oracles {

using levifill::CellIndex;
using levifill::Vec;
using levifill::VoxelGrid;

inline Vec fd_gradient(const levifill::Field& f, const Vec& z, double h) {
    Vec g(z.dim);
    for (int i = 0; i < z.dim; i++) {
        Vec zp = z, zm = z;
        zp[i] += h;
        zm[i] -= h;
        g[i] = (f.eval(zp) - f.eval(zm)) / (2 * h);
    }
    return g;
}

inline double fd_hessian_entry(const levifill::Field& f, const Vec& z, int i, int j, double h) {
    if (i == j) {
        Vec zp = z, zm = z;
        zp[i] += h;
        zm[i] -= h;
        return (f.eval(zp) - 2 * f.eval(z) + f.eval(zm)) / (h * h);
    }
    Vec a = z, b = z, c = z, d = z;
    a[i] += h; a[j] += h;
    b[i] += h; b[j] -= h;
    c[i] -= h; c[j] += h;
    d[i] -= h; d[j] -= h;
    return (f.eval(a) - f.eval(b) - f.eval(c) + f.eval(d)) / (4 * h * h);
}

// Unit-ball volume in R^4 is pi^2/2; a ball of radius rho scales by rho^4.
inline double ball4_volume(double rho) { return M_PI * M_PI / 2 * rho * rho * rho * rho; }

// Volume of the 4-ball part at distance > a from the ball center (a cut by a
// hyperplane), by 1-D quadrature over slab slices of 3-ball cross sections.
inline double ball4_cap_volume(double rho, double a, int steps = 20000) {
    double lo = std::max(-rho, a), v = 0;
    double dx = (rho - lo) / steps;
    for (int i = 0; i < steps; i++) {
        double x = lo + (i + 0.5) * dx;
        double s2 = rho * rho - x * x;
        if (s2 > 0) v += 4.0 * M_PI / 3.0 * std::pow(s2, 1.5) * dx;
    }
    return v;
}

// Plain BFS flood fill labeling of an arbitrary cell predicate, face
// adjacency. Returns the number of components and per-cell labels in a map
// ordered by discovery from the lowest cell index.
struct FloodLabels {
    std::vector<CellIndex> cells;  // sorted
    std::vector<int> label;
    int count = 0;

    int label_of(CellIndex c) const {
        auto it = std::lower_bound(cells.begin(), cells.end(), c);
        if (it == cells.end() || *it != c) return -1;
        return label[it - cells.begin()];
    }
};

inline FloodLabels flood_label(const VoxelGrid& g, const std::function<bool(CellIndex)>& pred) {
    FloodLabels out;
    for (CellIndex c = 0; c < g.cell_count(); c++)
        if (pred(c)) out.cells.push_back(c);
    out.label.assign(out.cells.size(), -1);
    auto idx_of = [&](CellIndex c) -> int {
        auto it = std::lower_bound(out.cells.begin(), out.cells.end(), c);
        return (it != out.cells.end() && *it == c) ? int(it - out.cells.begin()) : -1;
    };
    for (size_t i = 0; i < out.cells.size(); i++) {
        if (out.label[i] >= 0) continue;
        int id = out.count++;
        std::queue<CellIndex> q;
        out.label[i] = id;
        q.push(out.cells[i]);
        while (!q.empty()) {
            CellIndex cur = q.front();
            q.pop();
            g.for_each_neighbor(cur, [&](CellIndex nb) {
                int k = idx_of(nb);
                if (k >= 0 && out.label[k] < 0) {
                    out.label[k] = id;
                    q.push(nb);
                }
            });
        }
    }
    return out;
}

// Component count of the cut surface M_{>r} by brute force.
inline int surface_component_count(const VoxelGrid& g, double r) {
    auto fl = flood_label(
        g, [&](CellIndex c) { return g.surf(c) && g.radius(c) > r; });
    return fl.count;
}

}  // namespace oracles

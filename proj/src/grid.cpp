#include "levifill/grid.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace levifill {

VoxelGrid voxelize(const SurfaceSpec& spec, int threads) {
    int d = spec.ambient_dim();
    VoxelGrid g;
    g.dim = d;
    g.origin = spec.bounding_box.lo;
    g.spacing = spec.spacing();
    g.delta = spec.delta;
    if (g.spacing > spec.delta / 4 + 1e-12)
        fail(Err::Config, "grid too coarse: cell edge " + std::to_string(g.spacing) +
                              " exceeds delta/4 = " + std::to_string(spec.delta / 4) +
                              "; raise grid_res");

    size_t total = 1;
    Vec ext = spec.bounding_box.extent();
    for (int i = 0; i < d; i++) {
        g.dims[i] = std::max(2, (int)std::ceil(ext[i] / g.spacing - 1e-9));
        total *= (size_t)g.dims[i];
        if (total > 0xfffffff0ull) fail(Err::Config, "grid exceeds 2^32 cells; lower grid_res");
    }
    g.labels.assign(total, 0);

    double diag = g.spacing * std::sqrt((double)d);
    double band = spec.delta;
    // Gradient-norm scale for the first-order distance estimate, sampled over
    // the box so the |F| thresholds below are conservative.
    double gmax = 1e-6;
    {
        int probe[kMaxDim];
        for (int i = 0; i < d; i++) probe[i] = 7;
        size_t n = 1;
        for (int i = 0; i < d; i++) n *= probe[i];
        for (size_t c = 0; c < n; c++) {
            size_t rem = c;
            Vec z(d);
            for (int i = 0; i < d; i++) {
                z[i] = g.origin[i] + ((rem % probe[i]) + 0.5) * ext[i] / probe[i];
                rem /= probe[i];
            }
            gmax = std::max(gmax, spec.gradient(z).norm());
        }
        gmax *= 1.5;
    }
    double fcut = band * gmax * 1.5 + 1e-9;

    auto work = [&](size_t begin, size_t end) {
        Vec z(d);
        int ijk[kMaxDim];
        for (size_t c = begin; c < end; c++) {
            g.coords_of((CellIndex)c, ijk);
            for (int i = 0; i < d; i++) z[i] = g.origin[i] + (ijk[i] + 0.5) * g.spacing;
            double F = spec.eval(z);
            uint8_t bits = (F < 0) ? kInside : 0;
            if (std::fabs(F) <= fcut) {
                double gn = spec.gradient(z).norm();
                double dist = std::fabs(F) / std::max(gn, 1e-9);
                if (dist <= diag) bits |= kSurf | kNearM;
                else if (dist <= band) bits |= kNearM;
            }
            g.labels[c] = bits;
        }
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        work(0, total);
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (total + threads - 1) / threads;
        for (int t = 0; t < threads; t++) {
            size_t b = t * chunk, e = std::min(total, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return g;
}

std::vector<uint8_t> exterior_mask(const VoxelGrid& g) {
    std::vector<uint8_t> mask(g.cell_count(), 0);
    std::vector<CellIndex> stack;
    stack.reserve(1 << 20);
    size_t total = g.cell_count();
    for (CellIndex c = 0; c < total; c++) {
        if (!g.on_boundary(c) || g.surf(c) || mask[c]) continue;
        mask[c] = 1;
        stack.push_back(c);
        while (!stack.empty()) {
            CellIndex cur = stack.back();
            stack.pop_back();
            g.for_each_neighbor(cur, [&](CellIndex nb) {
                if (!mask[nb] && !g.surf(nb)) {
                    mask[nb] = 1;
                    stack.push_back(nb);
                }
            });
        }
    }
    return mask;
}

}  // namespace levifill

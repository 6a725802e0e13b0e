#pragma once

// Voxelization of R^{2n} scenes. Each cell carries three bits derived from
// the defining function at its center:
//   INSIDE - F < 0
//   SURF   - within one cell diagonal of {F = 0}  (the thin surface band)
//   NEARM  - within delta of {F = 0}              (the discrete V_delta(M))
// Distances are first-order estimates |F| / ||grad F||, which is exact for
// the signed-distance primitives and accurate near the zero set for blends.

#include <cstdint>
#include <vector>

#include "levifill/surface.hpp"
#include "levifill/types.hpp"

namespace levifill {

using CellIndex = uint32_t;
constexpr CellIndex kNoCell = 0xffffffffu;

enum CellBits : uint8_t {
    kInside = 1,
    kSurf = 2,
    kNearM = 4,
};

struct VoxelGrid {
    Vec origin;                  // low corner of the box
    double spacing = 0;         // uniform cell edge
    int dim = 4;                 // ambient dimension 2n
    std::array<int, kMaxDim> dims{};   // cells per axis
    std::vector<uint8_t> labels;       // CellBits per cell
    double delta = 0;            // the band half-width used for NEARM

    size_t cell_count() const { return labels.size(); }

    void coords_of(CellIndex c, int* out) const {
        size_t rem = c;
        for (int i = 0; i < dim; i++) {
            out[i] = (int)(rem % dims[i]);
            rem /= dims[i];
        }
    }
    CellIndex index_of(const int* ijk) const {
        size_t c = 0, stride = 1;
        for (int i = 0; i < dim; i++) {
            c += (size_t)ijk[i] * stride;
            stride *= dims[i];
        }
        return (CellIndex)c;
    }
    Vec center(CellIndex c) const {
        int ijk[kMaxDim];
        coords_of(c, ijk);
        Vec z(dim);
        for (int i = 0; i < dim; i++) z[i] = origin[i] + (ijk[i] + 0.5) * spacing;
        return z;
    }
    double radius(CellIndex c) const { return center(c).norm(); }

    bool inside(CellIndex c) const { return labels[c] & kInside; }
    bool surf(CellIndex c) const { return labels[c] & kSurf; }
    bool near_m(CellIndex c) const { return labels[c] & kNearM; }

    // Face neighbor along +/- axis k; kNoCell at the box boundary.
    CellIndex neighbor(CellIndex c, int k, int step) const {
        int ijk[kMaxDim];
        coords_of(c, ijk);
        ijk[k] += step;
        if (ijk[k] < 0 || ijk[k] >= dims[k]) return kNoCell;
        return index_of(ijk);
    }
    bool on_boundary(CellIndex c) const {
        int ijk[kMaxDim];
        coords_of(c, ijk);
        for (int i = 0; i < dim; i++)
            if (ijk[i] == 0 || ijk[i] == dims[i] - 1) return true;
        return false;
    }

    template <typename Fn>
    void for_each_neighbor(CellIndex c, Fn&& fn) const {
        int ijk[kMaxDim];
        coords_of(c, ijk);
        size_t stride = 1;
        for (int i = 0; i < dim; i++) {
            if (ijk[i] > 0) fn((CellIndex)(c - stride));
            if (ijk[i] < dims[i] - 1) fn((CellIndex)(c + stride));
            stride *= dims[i];
        }
    }

    // Cell whose box contains z, or kNoCell.
    CellIndex locate(const Vec& z) const {
        int ijk[kMaxDim];
        for (int i = 0; i < dim; i++) {
            int k = (int)std::floor((z[i] - origin[i]) / spacing);
            if (k < 0 || k >= dims[i]) return kNoCell;
            ijk[i] = k;
        }
        return index_of(ijk);
    }
};

// Voxelize a spec. Fails with a configuration error when the cell edge
// exceeds delta/4 (the band must be at least four cells thick). `threads`
// partitions the grid into slabs; output is identical for any thread count.
VoxelGrid voxelize(const SurfaceSpec& spec, int threads = 1);

// Cells of the unbounded complement: everything reachable from the box
// boundary through non-SURF cells. Used to split "outside the surface" from
// enclosed pockets (which may carry either sign of F).
std::vector<uint8_t> exterior_mask(const VoxelGrid& grid);

}  // namespace levifill

#pragma once

// Discrete superlevel-set topology at a fixed radius r: connected components
// of the cut surface M_{>r}, of N_r = M intersect S_r, the enclosed domains,
// and the disjoint-or-nested forest over them. All labeling uses face
// adjacency (2*2n neighbors); labels are canonicalized to the lowest cell
// index so comparisons are relabeling-invariant.

#include <cstdint>
#include <optional>
#include <vector>

#include "levifill/grid.hpp"

namespace levifill {

// Surface-band cells sorted by center radius, built once per grid and shared
// by every slice.
struct BandIndex {
    std::vector<CellIndex> cells;  // surf cells, ascending radius
    std::vector<float> radius;     // parallel to cells

    static BandIndex build(const VoxelGrid& grid);
    // first index with radius > r
    size_t lower_bound(double r) const;
};

struct FreeComponent {
    bool exterior = false;             // reaches the bounding box
    std::vector<CellIndex> cells;      // materialized only when !exterior
    std::vector<int> adjacent_m;       // m-component labels seen across faces
    size_t cell_count = 0;
};

struct RadialSlice {
    double radius = 0;
    // M_{>r} labeling: sorted surf cells above r with component labels.
    std::vector<CellIndex> m_cells;
    std::vector<int32_t> m_label;
    int m_count = 0;
    // N_r labeling: surf cells within half a cell of the sphere.
    std::vector<CellIndex> n_cells;
    std::vector<int32_t> n_label;
    int n_count = 0;
    // Components of {radius > r} minus the surface band.
    std::vector<FreeComponent> free_comps;

    bool empty() const { return m_cells.empty(); }
    int m_label_of(CellIndex c) const;  // -1 when c is not an m-cell
    std::vector<size_t> m_sizes() const;
};

struct ForestNode {
    int m_label = -1;
    std::vector<CellIndex> cells;   // enclosed domain, sorted (excludes band)
    int parent = -1;                // minimal strictly containing node
    int n_components = 0;           // boundary pieces on the sphere
    int r_components = 0;           // sphere-region pieces (bottom layer)
    bool sub_resolution = false;    // fewer than 8 surface cells
    double bottom_area = 0;         // (2n-1)-area of the bottom layer
};

struct DomainForest {
    double radius = 0;
    std::vector<ForestNode> nodes;

    int root_count() const {
        int k = 0;
        for (const auto& n : nodes) k += (n.parent < 0);
        return k;
    }
};

// Label M_{>r}, N_r and the free space above r. Outside the band's radius
// range this returns an empty slice. Regular-slice preconditions (distance
// to critical radii) are the caller's business; the sweep enforces them.
RadialSlice label_superlevel(const VoxelGrid& grid, const BandIndex& band, double r);

// The unique bounded complementary component of {||z|| > r} \ M_{>r}^c,
// via the free-component graph: walls are only the chosen component's band
// cells, other components' bands are passable. Geometry error when every
// side of the component reaches the bounding box.
std::vector<CellIndex> enclose(const VoxelGrid& grid, const RadialSlice& slice, int m_component);

// Enclose every component, derive parents, verify all forest invariants
// (bounded, pairwise disjoint-or-nested, N-boundaries of distinct nodes
// disjoint, boundary decomposition). Partial voxel-set overlap is the
// impossible case and aborts with InvariantViolation.
DomainForest build_forest(const VoxelGrid& grid, const RadialSlice& slice);

// Overlap matching from the higher-radius slice onto the lower one. Every
// prev component must send >= 90% of its cells into a single next component;
// next components may be unmatched (newborn while descending).
struct Correspondence {
    std::vector<int> prev_to_next;          // per prev label; -1 if ambiguous
    std::vector<std::vector<int>> next_from; // per next label, list of prev labels
    bool bijection = false;
};
Correspondence match_components(const RadialSlice& prev, const RadialSlice& next);

// Exhaustive pairwise voxel-set relation check used by tests and `verify`.
enum class PairRelation { Disjoint, Nested, PartialOverlap };
PairRelation voxel_set_relation(const std::vector<CellIndex>& a, const std::vector<CellIndex>& b);

}  // namespace levifill

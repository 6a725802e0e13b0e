#include "levifill/components.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace levifill {

BandIndex BandIndex::build(const VoxelGrid& grid) {
    BandIndex b;
    size_t total = grid.cell_count();
    for (CellIndex c = 0; c < total; c++)
        if (grid.surf(c)) b.cells.push_back(c);
    b.radius.resize(b.cells.size());
    for (size_t i = 0; i < b.cells.size(); i++) b.radius[i] = (float)grid.radius(b.cells[i]);
    std::vector<size_t> order(b.cells.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        return b.radius[i] < b.radius[j] || (b.radius[i] == b.radius[j] && b.cells[i] < b.cells[j]);
    });
    BandIndex out;
    out.cells.resize(b.cells.size());
    out.radius.resize(b.cells.size());
    for (size_t i = 0; i < order.size(); i++) {
        out.cells[i] = b.cells[order[i]];
        out.radius[i] = b.radius[order[i]];
    }
    return out;
}

size_t BandIndex::lower_bound(double r) const {
    return std::upper_bound(radius.begin(), radius.end(), (float)r) - radius.begin();
}

int RadialSlice::m_label_of(CellIndex c) const {
    auto it = std::lower_bound(m_cells.begin(), m_cells.end(), c);
    if (it == m_cells.end() || *it != c) return -1;
    return m_label[it - m_cells.begin()];
}

std::vector<size_t> RadialSlice::m_sizes() const {
    std::vector<size_t> s(m_count, 0);
    for (int32_t l : m_label) s[l]++;
    return s;
}

namespace {

// Union-find over a dense index range.
struct UnionFind {
    std::vector<int32_t> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int32_t find(int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int32_t a, int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Label a sorted cell set under face adjacency; labels are dense and ordered
// by each component's lowest cell index (canonical).
int label_sorted_cells(const VoxelGrid& grid, const std::vector<CellIndex>& cells,
                       std::vector<int32_t>& label) {
    size_t n = cells.size();
    UnionFind uf(n);
    for (size_t i = 0; i < n; i++) {
        grid.for_each_neighbor(cells[i], [&](CellIndex nb) {
            if (nb > cells[i]) return;  // visit each pair once
            auto it = std::lower_bound(cells.begin(), cells.end(), nb);
            if (it != cells.end() && *it == nb) uf.unite((int32_t)i, (int32_t)(it - cells.begin()));
        });
    }
    label.assign(n, -1);
    int next = 0;
    for (size_t i = 0; i < n; i++) {
        int32_t root = uf.find((int32_t)i);
        if (label[root] < 0) label[root] = next++;
        label[i] = label[root];
    }
    return next;
}

}  // namespace

RadialSlice label_superlevel(const VoxelGrid& grid, const BandIndex& band, double r) {
    RadialSlice s;
    s.radius = r;
    size_t from = band.lower_bound(r);
    if (from == band.cells.size()) return s;  // above the band: empty slice

    s.m_cells.assign(band.cells.begin() + from, band.cells.end());
    std::sort(s.m_cells.begin(), s.m_cells.end());
    s.m_count = label_sorted_cells(grid, s.m_cells, s.m_label);

    double half = grid.spacing / 2;
    size_t lo = band.lower_bound(r - half);
    size_t hi = band.lower_bound(r + half);
    s.n_cells.assign(band.cells.begin() + lo, band.cells.begin() + hi);
    std::sort(s.n_cells.begin(), s.n_cells.end());
    s.n_count = label_sorted_cells(grid, s.n_cells, s.n_label);

    // Free-space components of {radius > r} \ band: flood from the box
    // boundary first (exterior, cells not materialized), then the pockets.
    size_t total = grid.cell_count();
    std::vector<uint8_t> seen(total, 0);
    std::vector<CellIndex> stack;
    auto passable = [&](CellIndex c) { return !grid.surf(c) && grid.radius(c) > r; };

    auto flood = [&](CellIndex seed, FreeComponent& fc) {
        stack.clear();
        seen[seed] = 1;
        stack.push_back(seed);
        while (!stack.empty()) {
            CellIndex cur = stack.back();
            stack.pop_back();
            fc.cell_count++;
            if (!fc.exterior) fc.cells.push_back(cur);
            grid.for_each_neighbor(cur, [&](CellIndex nb) {
                if (grid.surf(nb)) {
                    if (grid.radius(nb) > r) {
                        int ml = s.m_label_of(nb);
                        if (ml >= 0) fc.adjacent_m.push_back(ml);
                    }
                    return;
                }
                if (!seen[nb] && grid.radius(nb) > r) {
                    seen[nb] = 1;
                    stack.push_back(nb);
                }
            });
        }
        std::sort(fc.adjacent_m.begin(), fc.adjacent_m.end());
        fc.adjacent_m.erase(std::unique(fc.adjacent_m.begin(), fc.adjacent_m.end()),
                            fc.adjacent_m.end());
        if (!fc.exterior) std::sort(fc.cells.begin(), fc.cells.end());
    };

    for (CellIndex c = 0; c < total; c++) {
        if (seen[c] || !grid.on_boundary(c) || !passable(c)) continue;
        FreeComponent fc;
        fc.exterior = true;
        flood(c, fc);
        s.free_comps.push_back(std::move(fc));
    }
    // Pockets are reachable from band neighborhoods; scan band cells above
    // r - delta so we only touch the relevant part of the grid.
    size_t scan_from = band.lower_bound(r - grid.delta - 2 * grid.spacing);
    for (size_t i = scan_from; i < band.cells.size(); i++) {
        grid.for_each_neighbor(band.cells[i], [&](CellIndex nb) {
            if (seen[nb] || !passable(nb)) return;
            FreeComponent fc;
            fc.exterior = false;
            flood(nb, fc);
            s.free_comps.push_back(std::move(fc));
        });
    }
    return s;
}

std::vector<CellIndex> enclose(const VoxelGrid& grid, const RadialSlice& slice, int m_component) {
    // Graph walk over (free components, other m-components): starting from
    // free components adjacent to the chosen one, expand through shared
    // m-components (their band cells are passable); sides containing an
    // exterior free component are the unbounded side.
    int fc_n = (int)slice.free_comps.size();
    int mc_n = slice.m_count;
    std::vector<std::vector<int>> m_to_free(mc_n);
    for (int f = 0; f < fc_n; f++)
        for (int m : slice.free_comps[f].adjacent_m) m_to_free[m].push_back(f);

    std::vector<int> side(fc_n, -1);  // -1 unvisited; else side id
    std::vector<char> m_seen(mc_n, 0);
    std::vector<CellIndex> enclosure;
    bool found_bounded = false, found_exterior = false;

    for (int f0 : m_to_free[m_component]) {
        if (side[f0] >= 0) continue;
        // BFS this side
        std::vector<int> fq{f0}, mq;
        side[f0] = f0;
        std::vector<int> free_side{f0};
        std::vector<int> m_side;
        bool exterior = slice.free_comps[f0].exterior;
        while (!fq.empty()) {
            int f = fq.back();
            fq.pop_back();
            for (int m : slice.free_comps[f].adjacent_m) {
                if (m == m_component || m_seen[m]) continue;
                m_seen[m] = 1;
                m_side.push_back(m);
                for (int f2 : m_to_free[m]) {
                    if (side[f2] >= 0) continue;
                    side[f2] = f0;
                    free_side.push_back(f2);
                    exterior |= slice.free_comps[f2].exterior;
                    fq.push_back(f2);
                }
            }
        }
        for (int m : m_side) m_seen[m] = 0;  // reset for other sides
        if (exterior) {
            found_exterior = true;
            continue;
        }
        found_bounded = true;
        for (int f : free_side) {
            const auto& fc = slice.free_comps[f];
            enclosure.insert(enclosure.end(), fc.cells.begin(), fc.cells.end());
        }
        // Band cells of enclosed m-components belong to the domain as well.
        for (int m : m_side) {
            for (size_t i = 0; i < slice.m_cells.size(); i++)
                if (slice.m_label[i] == m) enclosure.push_back(slice.m_cells[i]);
        }
    }
    if (!found_bounded) {
        if (found_exterior)
            fail(Err::Geometry,
                 "both sides of component " + std::to_string(m_component) +
                     " reach the bounding box; surface is not closed at this resolution");
        // tip just born: no free cells adjacent yet
        return {};
    }
    std::sort(enclosure.begin(), enclosure.end());
    enclosure.erase(std::unique(enclosure.begin(), enclosure.end()), enclosure.end());
    return enclosure;
}

PairRelation voxel_set_relation(const std::vector<CellIndex>& a, const std::vector<CellIndex>& b) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& big = a.size() <= b.size() ? b : a;
    size_t inter = 0;
    for (CellIndex c : small)
        if (std::binary_search(big.begin(), big.end(), c)) inter++;
    if (inter == 0) return PairRelation::Disjoint;
    if (inter == small.size()) return PairRelation::Nested;
    return PairRelation::PartialOverlap;
}

DomainForest build_forest(const VoxelGrid& grid, const RadialSlice& slice) {
    DomainForest forest;
    forest.radius = slice.radius;
    std::vector<size_t> msz = slice.m_sizes();

    for (int m = 0; m < slice.m_count; m++) {
        ForestNode node;
        node.m_label = m;
        node.cells = enclose(grid, slice, m);
        node.sub_resolution = msz[m] < 8;
        for (CellIndex c : node.cells)
            if (grid.on_boundary(c))
                fail(Err::Invariant, "enclosure touches the bounding box (node " +
                                         std::to_string(m) + ")");
        forest.nodes.push_back(std::move(node));
    }

    // Pairwise relation: disjoint or nested; parent = minimal container.
    int k = (int)forest.nodes.size();
    for (int i = 0; i < k; i++) {
        for (int j = i + 1; j < k; j++) {
            if (forest.nodes[i].cells.empty() || forest.nodes[j].cells.empty()) continue;
            PairRelation rel = voxel_set_relation(forest.nodes[i].cells, forest.nodes[j].cells);
            if (rel == PairRelation::PartialOverlap) {
                std::ostringstream os;
                os << "domains of components " << i << " and " << j
                   << " overlap partially at r = " << slice.radius
                   << "; neither disjoint nor nested";
                fail(Err::Invariant, os.str());
            }
        }
    }
    for (int i = 0; i < k; i++) {
        size_t best_size = 0;
        int parent = -1;
        for (int j = 0; j < k; j++) {
            if (i == j || forest.nodes[j].cells.size() <= forest.nodes[i].cells.size()) continue;
            if (forest.nodes[i].cells.empty()) continue;
            if (voxel_set_relation(forest.nodes[i].cells, forest.nodes[j].cells) ==
                PairRelation::Nested) {
                if (parent < 0 || forest.nodes[j].cells.size() < best_size) {
                    parent = j;
                    best_size = forest.nodes[j].cells.size();
                }
            }
        }
        forest.nodes[i].parent = parent;
    }

    // N-boundary assignment and disjointness across nodes; also count the
    // bottom-layer region pieces and area per node.
    std::vector<int> n_owner(slice.n_count, -1);
    for (size_t i = 0; i < slice.n_cells.size(); i++) {
        CellIndex c = slice.n_cells[i];
        int nl = slice.n_label[i];
        int ml = slice.m_label_of(c);
        if (ml < 0) {
            // below-sphere n-cell: adopt the label of an adjacent above cell
            grid.for_each_neighbor(c, [&](CellIndex nb) {
                if (ml >= 0) return;
                ml = slice.m_label_of(nb);
            });
        }
        if (ml < 0) continue;
        if (n_owner[nl] >= 0 && n_owner[nl] != ml)
            fail(Err::Invariant, "an N_r component touches two distinct M components at r = " +
                                     std::to_string(slice.radius));
        n_owner[nl] = ml;
    }
    for (int nl = 0; nl < slice.n_count; nl++)
        if (n_owner[nl] >= 0 && n_owner[nl] < k) forest.nodes[n_owner[nl]].n_components++;

    double h = grid.spacing;
    for (auto& node : forest.nodes) {
        std::vector<CellIndex> layer;
        for (CellIndex c : node.cells) {
            double rr = grid.radius(c);
            if (rr <= slice.radius + 2 * h && !grid.surf(c)) layer.push_back(c);
        }
        std::vector<int32_t> lab;
        node.r_components = label_sorted_cells(grid, layer, lab);
        size_t bottom = 0;
        for (CellIndex c : layer)
            if (grid.radius(c) <= slice.radius + h) bottom++;
        node.bottom_area = bottom * std::pow(h, grid.dim) / h;
    }
    return forest;
}

Correspondence match_components(const RadialSlice& prev, const RadialSlice& next) {
    if (prev.radius <= next.radius)
        fail(Err::Invariant, "match_components expects prev.radius > next.radius");
    Correspondence corr;
    corr.prev_to_next.assign(prev.m_count, -1);
    corr.next_from.assign(next.m_count, {});
    std::vector<std::map<int, size_t>> hist(prev.m_count);
    for (size_t i = 0; i < prev.m_cells.size(); i++) {
        int nl = next.m_label_of(prev.m_cells[i]);
        if (nl >= 0) hist[prev.m_label[i]][nl]++;
    }
    std::vector<size_t> sizes = prev.m_sizes();
    for (int p = 0; p < prev.m_count; p++) {
        for (auto [nl, cnt] : hist[p]) {
            if (cnt * 10 >= sizes[p] * 9) {  // the 90% overlap rule
                corr.prev_to_next[p] = nl;
                corr.next_from[nl].push_back(p);
            }
        }
    }
    corr.bijection = (prev.m_count == next.m_count);
    for (int p = 0; p < prev.m_count && corr.bijection; p++)
        if (corr.prev_to_next[p] < 0) corr.bijection = false;
    for (int nx = 0; nx < next.m_count && corr.bijection; nx++)
        if (corr.next_from[nx].size() != 1) corr.bijection = false;
    return corr;
}

}  // namespace levifill

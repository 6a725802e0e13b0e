#include "levifill/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace levifill {

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Creation: return "Creation";
        case EventKind::Termination: return "Termination";
        case EventKind::HoleFill: return "HoleFill";
        case EventKind::Merge: return "Merge";
        case EventKind::Subtract: return "Subtract";
        case EventKind::RegularPass: return "RegularPass";
    }
    return "?";
}

uint64_t fnv1a_digest(const std::vector<CellIndex>& cells) {
    uint64_t hsh = 1469598103934665603ull;
    for (CellIndex c : cells) {
        for (int b = 0; b < 4; b++) {
            hsh ^= (c >> (8 * b)) & 0xffu;
            hsh *= 1099511628211ull;
        }
    }
    return hsh;
}

namespace {

// Rind step radii from `from` down to `to`: steps of eta with the final one
// shrunk to land exactly on `to`.
std::vector<double> rind_step_schedule(double from, double to, double eta) {
    std::vector<double> out;
    if (from <= to + 1e-15) return out;
    double r = from;
    while (r - eta > to + 1e-12) {
        r -= eta;
        out.push_back(r);
    }
    out.push_back(to);
    return out;
}

struct HeapEntry {
    float radius;
    CellIndex cell;
    uint8_t node;
    bool operator<(const HeapEntry& o) const {
        if (radius != o.radius) return radius < o.radius;
        if (cell != o.cell) return cell > o.cell;
        return node > o.node;
    }
};

struct EngineNode {
    bool alive = true;
    bool subtracted = false;
    bool closed = false;       // surface closed up; territory kept
    int parent = -1;
    int m_label = -1;          // label in the engine's current slice; -1 germinal/closed
    bool germinal = false;     // created but not yet seeded with voxels
    double germ_retry_r = 0;
    double birth_radius = 0;
    long long figures = 0;
    size_t cell_count = 0;
    std::vector<float> claim_radii;   // sorted prefix [0, watermark)
    size_t watermark = 0;
};

constexpr int kNoOwner = 0xff;

struct Engine {
    const SurfaceSpec& spec;
    const VoxelGrid& grid;
    const MorseSchedule& sched;
    const SweepConfig& cfg;

    BandIndex band;
    double h, eta, phi, stop_r, diag;
    std::vector<uint8_t> owner;    // kNoOwner or raw node id
    std::vector<uint8_t> pending;  // kNoOwner or raw node id
    std::priority_queue<HeapEntry> heap;
    std::vector<EngineNode> nodes;
    std::vector<int> redirect;     // union-find over node ids
    RadialSlice cur_slice;         // latest labeled slice
    bool have_slice = false;
    double front;                  // processed down to this radius

    SweepResult out;
    long long figures_total = 0;
    std::vector<std::pair<int, int>> touches;  // distinct-node adjacency this step

    Engine(const SurfaceSpec& s, const VoxelGrid& g, const MorseSchedule& m, const SweepConfig& c)
        : spec(s), grid(g), sched(m), cfg(c) {}

    int resolve(int id) const {
        while (redirect[id] != id) id = redirect[id];
        return id;
    }

    int new_node() {
        if (nodes.size() >= 200) fail(Err::Resolution, "node budget exceeded");
        nodes.push_back({});
        redirect.push_back((int)redirect.size());
        return (int)nodes.size() - 1;
    }

    // ---- claiming ---------------------------------------------------------

    void note_touch(int a, int b) {
        a = resolve(a);
        b = resolve(b);
        if (a == b) return;
        if (!nodes[a].alive || !nodes[b].alive) return;
        touches.emplace_back(std::min(a, b), std::max(a, b));
    }

    // Claim `cell` for node `nd` and flood every reachable unclaimed
    // non-band cell above `floor_r`; cells below go to the pending heap.
    void claim_flood(CellIndex cell, int nd, double floor_r) {
        std::vector<CellIndex> stack{cell};
        owner[cell] = (uint8_t)nd;
        while (!stack.empty()) {
            CellIndex cur = stack.back();
            stack.pop_back();
            double rr = grid.radius(cur);
            nodes[nd].claim_radii.push_back((float)rr);
            nodes[nd].cell_count++;
            grid.for_each_neighbor(cur, [&](CellIndex nb) {
                if (grid.surf(nb)) return;
                if (owner[nb] != kNoOwner) {
                    if (resolve(owner[nb]) != resolve(nd)) note_touch(owner[nb], nd);
                    return;
                }
                double rn = grid.radius(nb);
                if (rn > floor_r) {
                    if (pending[nb] != kNoOwner && resolve(pending[nb]) != resolve(nd))
                        note_touch(pending[nb], nd);
                    owner[nb] = (uint8_t)nd;
                    stack.push_back(nb);
                } else if (rn > stop_r - grid.delta) {
                    if (pending[nb] == kNoOwner) {
                        pending[nb] = (uint8_t)nd;
                        heap.push({(float)rn, nb, (uint8_t)nd});
                    } else if (resolve(pending[nb]) != resolve(nd)) {
                        note_touch(pending[nb], nd);
                    }
                }
            });
        }
    }

    // Pop and claim everything above r_next.
    void descend_heap(double r_next) {
        while (!heap.empty() && heap.top().radius > (float)r_next) {
            HeapEntry e = heap.top();
            heap.pop();
            int nd = resolve(e.node);
            if (owner[e.cell] != kNoOwner) continue;
            if (!nodes[nd].alive) continue;  // subtracted domains do not grow
            claim_flood(e.cell, nd, r_next);
        }
        front = r_next;
    }

    // ---- slices and labels -------------------------------------------------

    // Advance the engine's label chain to a new slice at radius r; node
    // m_labels are remapped through overlap matching. Inside regular
    // stretches every node label must map and no two nodes may collide.
    RadialSlice advance_slice(double r, bool allow_vanish) {
        RadialSlice next = label_superlevel(grid, band, r);
        if (have_slice && !next.empty() && !cur_slice.empty()) {
            Correspondence corr = match_components(cur_slice, next);
            std::map<int, int> taken;  // next label -> node
            for (size_t i = 0; i < nodes.size(); i++) {
                EngineNode& n = nodes[i];
                if (!n.alive || n.m_label < 0 || resolve((int)i) != (int)i) continue;
                int nl = corr.prev_to_next[n.m_label];
                if (nl < 0) {
                    if (!allow_vanish)
                        fail(Err::Resolution,
                             "component of a live domain lost its successor at r = " +
                                 std::to_string(r) + "; refine the grid");
                    n.closed = true;
                    n.alive = false;
                    n.m_label = -1;
                    continue;
                }
                auto it = taken.find(nl);
                if (it != taken.end())
                    fail(Err::Resolution,
                         "two domains map onto one surface component at regular radius " +
                             std::to_string(r) + "; refine the grid (missed merge)");
                taken[nl] = (int)i;
                n.m_label = nl;
            }
        }
        cur_slice = std::move(next);
        have_slice = true;
        return cur_slice;  // copy for callers that keep it
    }

    int count_alive() const {
        int k = 0;
        for (size_t i = 0; i < nodes.size(); i++)
            if (nodes[i].alive && resolve((int)i) == (int)i) k++;
        return k;
    }

    std::vector<int> alive_ids() const {
        std::vector<int> v;
        for (size_t i = 0; i < nodes.size(); i++)
            if (nodes[i].alive && resolve((int)i) == (int)i) v.push_back((int)i);
        return v;
    }

    // ---- probes -------------------------------------------------------------

    // Owner of the cell nearest to `target`, trying a few radial bump factors
    // when the probe lands on band cells. Returns -1 for unclaimed free
    // space, -2 when no usable cell was found.
    int probe_owner(const Vec& target) const {
        for (double f : {1.0, 1.35, 1.8, 2.4}) {
            Vec q = target * ((target.norm() + (f - 1.0) * h) / target.norm());
            CellIndex c = grid.locate(q);
            if (c == kNoCell) continue;
            if (grid.surf(c)) continue;
            if (owner[c] != kNoOwner) return resolve(owner[c]);
            return -1;
        }
        return -2;
    }

    Vec probe_point(const CriticalPoint& cp, const Vec& tangent, double t_off, double v_off) const {
        Vec q = cp.location + tangent * t_off;
        double want = cp.radius + v_off;
        return q * (want / q.norm());
    }

    // ---- events --------------------------------------------------------------

    struct LocalView {
        std::vector<int> labels;  // global m-labels entering the pseudocube
        int local_count = 0;      // face-connected pieces inside the cube
    };

    LocalView local_components(const RadialSlice& slice, const CriticalPoint& cp,
                               double cube_eta, double halfw) const {
        LocalView lv;
        std::vector<CellIndex> in_box;
        for (size_t i = 0; i < slice.m_cells.size(); i++) {
            CellIndex c = slice.m_cells[i];
            Vec z = grid.center(c);
            double v = z.norm() - cp.radius;
            if (std::fabs(v) > cube_eta + grid.delta) continue;
            Vec d = z - cp.location;
            double t2 = 0;
            for (const Vec& ev : cp.eigenvectors) {
                double s = d.dot(ev);
                t2 += s * s;
            }
            if (t2 < halfw * halfw) in_box.push_back(c);
        }
        std::sort(in_box.begin(), in_box.end());
        std::vector<int32_t> lab;
        lv.local_count = (int)in_box.size() ? 0 : 0;
        if (!in_box.empty()) {
            // local labeling restricted to the box
            std::vector<int32_t> ll;
            lv.local_count = 0;
            {
                // reuse slice's global labels for global identity
                std::set<int> glb;
                for (CellIndex c : in_box) glb.insert(slice.m_label_of(c));
                lv.labels.assign(glb.begin(), glb.end());
            }
            // face-connected pieces
            std::vector<int> piece(in_box.size(), -1);
            for (size_t i = 0; i < in_box.size(); i++) {
                if (piece[i] >= 0) continue;
                int id = lv.local_count++;
                std::vector<size_t> st{i};
                piece[i] = id;
                while (!st.empty()) {
                    size_t cur = st.back();
                    st.pop_back();
                    grid.for_each_neighbor(in_box[cur], [&](CellIndex nb) {
                        auto it = std::lower_bound(in_box.begin(), in_box.end(), nb);
                        if (it == in_box.end() || *it != nb) return;
                        size_t k = it - in_box.begin();
                        if (piece[k] < 0) {
                            piece[k] = id;
                            st.push_back(k);
                        }
                    });
                }
            }
        }
        return lv;
    }

    int node_of_label(int label) const {
        for (size_t i = 0; i < nodes.size(); i++)
            if (nodes[i].alive && resolve((int)i) == (int)i && nodes[i].m_label == label)
                return (int)i;
        return -1;
    }

    bool is_descendant(int node, int anc) const {
        int cur = node;
        while (cur >= 0) {
            if (cur == anc) return true;
            cur = nodes[cur].parent < 0 ? -1 : resolve(nodes[cur].parent);
        }
        return false;
    }

    SweepEvent handle_event(const CriticalPoint& cp, bool final_event);
    void seed_germinal_nodes(double r, bool force_slice);
    void verify_at_radius(double r, const RadialSlice& slice, bool full_forest);
    void regular_stretch(double from, double to, const std::vector<double>& sample_radii);
    void run();
    void finish(double stop_radius);
};

// ---------------------------------------------------------------------------

void Engine::seed_germinal_nodes(double r, bool force_slice) {
    bool any_germ = false;
    for (auto& n : nodes)
        if (n.alive && n.germinal && r <= n.germ_retry_r) any_germ = true;
    if (!any_germ) return;
    (void)force_slice;
    RadialSlice s = label_superlevel(grid, band, r);
    // map engine labels onto this helper slice
    Correspondence corr = match_components(cur_slice, s);
    for (size_t i = 0; i < nodes.size(); i++) {
        EngineNode& n = nodes[i];
        if (!n.alive || !n.germinal || resolve((int)i) != (int)i) continue;
        if (r > n.germ_retry_r) continue;
        int nl = n.m_label >= 0 ? corr.prev_to_next[n.m_label] : -1;
        if (nl < 0) continue;
        std::vector<CellIndex> enc = enclose(grid, s, nl);
        if (enc.empty()) {
            n.germ_retry_r = r - 2 * h;  // retry lower
            continue;
        }
        for (CellIndex c : enc) {
            if (owner[c] != kNoOwner || grid.surf(c)) continue;
            claim_flood(c, (int)i, r);
        }
        n.germinal = false;
    }
}

void Engine::verify_at_radius(double r, const RadialSlice& slice, bool full_forest) {
    if (slice.empty()) return;
    if (full_forest) {
        DomainForest forest = build_forest(grid, slice);  // throws on violations
        SliceRecord rec;
        rec.r = r;
        rec.c_count = (int)forest.nodes.size();
        rec.n_count = slice.n_count;
        std::ostringstream fe;
        for (size_t i = 0; i < forest.nodes.size(); i++)
            if (forest.nodes[i].parent >= 0)
                fe << (fe.tellp() > 0 ? "," : "") << i << ">" << forest.nodes[i].parent;
        rec.forest_edges = fe.str();
        out.slices.push_back(rec);

        // cross-check engine territory against the independent enclosures
        for (size_t i = 0; i < nodes.size(); i++) {
            const EngineNode& n = nodes[i];
            if (!n.alive || n.m_label < 0 || n.germinal || resolve((int)i) != (int)i) continue;
            if (n.m_label >= (int)forest.nodes.size()) continue;
            const auto& enc = forest.nodes[n.m_label].cells;
            size_t miss = 0, tot = 0;
            for (CellIndex c : enc) {
                if (grid.surf(c)) continue;
                tot++;
                int o = owner[c] == kNoOwner ? -1 : resolve(owner[c]);
                if (o < 0 || !is_descendant(o, (int)i)) miss++;
            }
            if (tot > 0 && miss > std::max<size_t>(1024, tot / 50)) {
                std::ostringstream os;
                os << "claimed territory of node " << i << " disagrees with the independent "
                   << "enclosure at r = " << r << " (" << miss << "/" << tot << " missing)";
                fail(Err::Geometry, os.str());
            }
        }
        out.certificate.invariant_report.push_back(
            "forest invariants verified at r = " + std::to_string(r) + " (" +
            std::to_string(forest.nodes.size()) + " domains)");
    }
}

void Engine::regular_stretch(double from, double to, const std::vector<double>& sample_radii) {
    if (from <= to + 1e-15) return;
    // sort per-node claim logs so layer counts can binary-search the past
    for (auto& n : nodes) {
        std::sort(n.claim_radii.begin(), n.claim_radii.end());
        n.watermark = n.claim_radii.size();
    }
    std::vector<double> steps = rind_step_schedule(from, to, eta);
    size_t next_sample = 0;
    std::vector<double> samples = sample_radii;  // descending
    std::sort(samples.rbegin(), samples.rend());

    long long row_stride = std::max<long long>(1, (long long)steps.size() / 4000);
    for (size_t k = 0; k < steps.size(); k++) {
        double r_next = steps[k];
        touches.clear();
        descend_heap(r_next);
        seed_germinal_nodes(r_next, false);
        if (!touches.empty()) {
            auto [a, b] = touches.front();
            fail(Err::Resolution, "domains " + std::to_string(a) + " and " + std::to_string(b) +
                                      " touch at regular radius " + std::to_string(r_next) +
                                      "; refine the grid");
        }
        // figure accounting: one rind over each live region's bottom layer
        double area_total = 0;
        long long figs_step = 0;
        for (size_t i = 0; i < nodes.size(); i++) {
            EngineNode& n = nodes[i];
            if (!n.alive || resolve((int)i) != (int)i || n.cell_count == 0) continue;
            const auto& cr = n.claim_radii;
            auto lo = std::lower_bound(cr.begin(), cr.begin() + n.watermark, (float)r_next);
            auto hi = std::upper_bound(cr.begin(), cr.begin() + n.watermark, (float)(r_next + h));
            size_t layer = (hi > lo) ? (size_t)(hi - lo) : 0;
            for (size_t j = n.watermark; j < cr.size(); j++)
                if (cr[j] >= (float)r_next && cr[j] <= (float)(r_next + h)) layer++;
            double area = layer * std::pow(h, grid.dim) / h;
            area_total += area;
            long long f = count_figures_region(area, spec.delta, spec.dim_n, cfg.constant_C);
            n.figures += f;
            figs_step += f;
        }
        figures_total += figs_step;
        if ((long long)(k % row_stride) == 0 || k + 1 == steps.size()) {
            MetricsRow row;
            row.r = r_next;
            row.c_count = count_alive();
            row.area_total = area_total;
            row.figures_step = figs_step;
            row.figures_cum = figures_total;
            row.bound_cum = out.certificate.figure_budget;
            out.metrics.push_back(row);
        }
        while (next_sample < samples.size() && r_next <= samples[next_sample] + 1e-12) {
            RadialSlice s = advance_slice(r_next, true);
            verify_at_radius(r_next, s, true);
            next_sample++;
        }
    }
}

SweepEvent Engine::handle_event(const CriticalPoint& cp, bool final_event) {
    SweepEvent ev;
    ev.at_radius = cp.radius;
    ev.coindex = cp.coindex;
    ev.cube_center = cp.location;
    ev.cube_eta = std::max(eta, 2 * phi);
    ev.cube_halfwidth = 2 * std::sqrt(ev.cube_eta);
    ev.count_before = count_alive();
    ev.components_in = alive_ids();
    int dim = grid.dim;
    int k = cp.coindex;

    double above_r = final_event ? front : cp.radius + phi;
    const RadialSlice& slice_above = cur_slice;  // engine is at that slice already
    LocalView above_local =
        local_components(slice_above, cp, ev.cube_eta + 2 * h, ev.cube_halfwidth + 2 * h);
    ev.local_components_above = above_local.local_count;
    double vprobe = std::max(1.2 * (above_r - cp.radius), 2.5 * h);

    if (k == 0) {
        // A local maximum passed while descending: a new component is born.
        ev.kind = EventKind::Creation;
        if (above_local.local_count != 0)
            fail(Err::Resolution, "surface enters the pseudocube above a local maximum at r = " +
                                      std::to_string(cp.radius) + "; refine the grid");
        int over = probe_owner(probe_point(cp, Vec(dim), 0, vprobe));
        int nid = new_node();
        nodes[nid].birth_radius = cp.radius;
        nodes[nid].germinal = true;
        nodes[nid].germ_retry_r = cp.radius - 2.5 * diag;
        nodes[nid].m_label = -1;  // assigned from the slice below
        if (over >= 0) {
            nodes[nid].parent = over;
            ev.subcase = "b'";  // born nested inside a passing domain
        } else {
            ev.subcase = "a'";
        }
        ev.components_out = alive_ids();
        ev.count_after = ev.count_before + 1;
        return ev;
    }

    if (k == dim - 1) {
        // Local minimum: the domain either ends here (its piece terminates)
        // or wraps around the nose and fills a hole of its sphere region.
        if (above_local.labels.size() != 1)
            fail(Err::Resolution, "expected one surface component at a local minimum, found " +
                                      std::to_string(above_local.labels.size()));
        int node = node_of_label(above_local.labels[0]);
        if (node < 0) fail(Err::Resolution, "local minimum on a surface piece with no domain");
        int oc = probe_owner(probe_point(cp, Vec(dim), 0, vprobe));
        if (oc == node) {
            ev.kind = EventKind::Termination;
            ev.subcase = "a";
        } else {
            ev.kind = EventKind::HoleFill;
            ev.subcase = "b";
        }
        ev.components_out = alive_ids();
        ev.count_after = ev.count_before;
        return ev;
    }

    if (k == 1) {
        // Saddle: two local branches; sides decide merge vs subtraction.
        if (above_local.local_count != 2)
            fail(Err::Resolution,
                 "saddle at r = " + std::to_string(cp.radius) + " shows " +
                     std::to_string(above_local.local_count) +
                     " local pieces (expected 2); refine the grid");
        const Vec& ax = cp.eigenvectors[0];  // positive-eigenvalue direction
        double mu = cp.eigenvalues[0];
        double a_nose = 2.0 * std::sqrt(std::max(2 * vprobe / std::max(mu, 1e-9), 0.0));
        int o_plus = probe_owner(probe_point(cp, ax, a_nose, vprobe));
        int o_minus = probe_owner(probe_point(cp, ax, -a_nose, vprobe));
        int o_center = probe_owner(probe_point(cp, Vec(dim), 0, vprobe));
        // branch nodes from band labels on each side of the saddle
        auto branch_node = [&](double sign) -> int {
            for (double t : {0.6, 1.0, 1.4}) {
                Vec q = cp.location + ax * (sign * a_nose * t);
                q = q * ((cp.radius + vprobe) / q.norm());
                CellIndex c = grid.locate(q);
                if (c == kNoCell) continue;
                // walk outward until a band cell is found
                int best = -1;
                double best_d = 1e300;
                for (size_t i = 0; i < slice_above.m_cells.size(); i++) {
                    Vec z = grid.center(slice_above.m_cells[i]);
                    double d2 = (z - q).norm2();
                    if (d2 < best_d) {
                        double side = (z - cp.location).dot(ax);
                        if (side * sign > 0) {
                            best_d = d2;
                            best = slice_above.m_label[i];
                        }
                    }
                }
                if (best >= 0) return node_of_label(best);
            }
            return -1;
        };
        int n_plus = branch_node(+1), n_minus = branch_node(-1);
        if (n_plus < 0 || n_minus < 0)
            fail(Err::Resolution, "saddle branches carry no live domain at r = " +
                                      std::to_string(cp.radius));

        bool nose_plus = (o_plus == n_plus);
        bool nose_minus = (o_minus == n_minus);
        if (nose_plus && nose_minus) {
            ev.kind = EventKind::Merge;
            if (n_plus != n_minus) {
                ev.subcase = "a";
                // merge surgery: both replaced by a fresh node
                int pa = nodes[n_plus].parent < 0 ? -1 : resolve(nodes[n_plus].parent);
                int pb = nodes[n_minus].parent < 0 ? -1 : resolve(nodes[n_minus].parent);
                if (pa != pb)
                    fail(Err::Invariant, "merging domains with different parents at r = " +
                                             std::to_string(cp.radius));
                int nid = new_node();
                EngineNode& m = nodes[nid];
                m.parent = pa;
                m.birth_radius = cp.radius;
                m.figures = nodes[n_plus].figures + nodes[n_minus].figures;
                m.cell_count = nodes[n_plus].cell_count + nodes[n_minus].cell_count;
                m.claim_radii = std::move(nodes[n_plus].claim_radii);
                m.claim_radii.insert(m.claim_radii.end(), nodes[n_minus].claim_radii.begin(),
                                     nodes[n_minus].claim_radii.end());
                nodes[n_minus].claim_radii.clear();
                m.m_label = nodes[n_plus].m_label;  // remapped at the slice below
                nodes[n_plus].alive = nodes[n_minus].alive = false;
                redirect[n_plus] = nid;
                redirect[n_minus] = nid;
                m.alive = true;
                ev.count_after = ev.count_before - 1;
            } else {
                ev.subcase = "a'";  // the same domain attaches a one-cell
                ev.count_after = ev.count_before;
            }
        } else if (!nose_plus && !nose_minus) {
            if (n_plus == n_minus && o_center == n_plus) {
                ev.kind = EventKind::Merge;  // recorded under the k=1 taxonomy
                ev.subcase = "e";
                ev.count_after = ev.count_before;
            } else {
                fail(Err::Invariant,
                     "saddle configuration (d) detected at r = " + std::to_string(cp.radius) +
                         ": both domains wrap; ruled out by the nesting invariant");
            }
        } else {
            // one nose, one wrap: the nose domain is suppressed and its
            // closure subtracted from the surviving one."
            int inner = nose_plus ? n_plus : n_minus;
            int outer = nose_plus ? n_minus : n_plus;
            if (!is_descendant(inner, outer))
                fail(Err::Invariant, "subtraction pair is not nested at r = " +
                                         std::to_string(cp.radius));
            ev.kind = EventKind::Subtract;
            ev.subcase = nose_minus ? "b" : "c";
            nodes[inner].alive = false;
            nodes[inner].subtracted = true;
            for (size_t i = 0; i < nodes.size(); i++)
                if ((int)i != inner && nodes[i].parent >= 0 && resolve(nodes[i].parent) == inner)
                    nodes[i].parent = outer;
            nodes[outer].m_label = nodes[outer].m_label;  // successor mapped below
            ev.count_after = ev.count_before - 1;
        }
        ev.components_out = alive_ids();
        return ev;
    }

    // 2 <= k <= 2n-2: one local component; the domain passes regularly.
    ev.kind = EventKind::RegularPass;
    ev.subcase = "III";
    if (above_local.local_count != 1)
        fail(Err::Resolution, "expected a single local piece at coindex " + std::to_string(k) +
                                  ", found " + std::to_string(above_local.local_count));
    ev.components_out = alive_ids();
    ev.count_after = ev.count_before;
    return ev;
}

void Engine::run() {
    band = BandIndex::build(grid);
    h = grid.spacing;
    eta = sched.eta;
    diag = h * std::sqrt((double)grid.dim);
    phi = std::max(eta / 2, 2 * h);
    double eps = cfg.stop_eps > 0 ? cfg.stop_eps : std::max(spec.delta / 10, 3 * h);
    stop_r = sched.r_min() + eps;
    out.certificate.stop_radius = stop_r;

    // figure budget in the product form
    double span = sched.r_max() - sched.r_min();
    out.certificate.figure_budget =
        (long long)std::ceil(cfg.constant_C *
                             std::pow(sched.r_max() / spec.delta, 2 * spec.dim_n - 1) *
                             std::ceil(span / eta));

    // window separation: events need resolvable flanks
    for (size_t i = 0; i + 1 < sched.points.size(); i++) {
        double gap = sched.points[i + 1].radius - sched.points[i].radius;
        if (gap < 2.5 * phi)
            fail(Err::Resolution,
                 "critical radii " + std::to_string(sched.points[i].radius) + " and " +
                     std::to_string(sched.points[i + 1].radius) +
                     " are closer than the grid can flank (gap " + std::to_string(gap) +
                     " < " + std::to_string(2.5 * phi) + "); double grid_res");
    }

    double band_top = band.radius.empty() ? sched.r_max() : (double)band.radius.back();
    front = std::max(band_top + h, sched.r_max() + 2 * phi);
    have_slice = false;
    cur_slice = RadialSlice{};
    cur_slice.radius = front;
    have_slice = true;

    for (int li = (int)sched.points.size() - 1; li >= 0; li--) {
        const CriticalPoint& cp = sched.points[li];
        bool final_event = cp.radius - phi <= stop_r || li == 0;
        double flank_above = final_event ? stop_r : cp.radius + phi;

        // regular descent down to the flank (or the stop radius)
        std::vector<double> samples;
        double top = front, bot = flank_above;
        if (top > bot + 4 * h) {
            for (int s = 0; s < cfg.samples_per_interval; s++) {
                double q = (s + 0.5) / cfg.samples_per_interval;
                double r = bot + q * (top - bot);
                r = bot + std::floor((r - bot) / eta) * eta;  // snap to a step
                if (r > bot + 2 * h && r < top - 2 * h) samples.push_back(r);
            }
        }
        regular_stretch(top, bot, samples);
        RadialSlice s_above = advance_slice(bot, true);
        if (cfg.verify_flank_forests) verify_at_radius(bot, s_above, true);

        if (final_event) {
            SweepEvent ev = handle_event(cp, true);
            out.certificate.events.push_back(ev);
            break;
        }

        // descend to the exact critical radius, classify, apply, descend to
        // the lower flank
        descend_heap(cp.radius);
        touches.clear();
        SweepEvent ev = handle_event(cp, false);
        descend_heap(cp.radius - phi);
        touches.clear();
        RadialSlice s_below = advance_slice(cp.radius - phi, ev.kind == EventKind::Termination);

        // creations adopt the newborn label from the slice below
        if (ev.kind == EventKind::Creation && !s_below.empty()) {
            std::set<int> owned;
            for (const auto& n : nodes)
                if (n.alive && n.m_label >= 0) owned.insert(n.m_label);
            int newborn = -1;
            for (int l = 0; l < s_below.m_count; l++)
                if (!owned.count(l)) {
                    // nearest component to the critical point wins
                    newborn = l;
                }
            if (newborn >= 0) {
                int nid = (int)nodes.size() - 1;
                nodes[nid].m_label = newborn;
            }
        }
        out.certificate.events.push_back(ev);
        if (cfg.verify_flank_forests) verify_at_radius(cp.radius - phi, s_below, true);
        front = cp.radius - phi;
    }

    finish(stop_r);
}

void Engine::finish(double stop_radius) {
    descend_heap(stop_radius);
    // at the stop radius exactly one live domain must remain, enclosing the
    // whole cut domain
    RadialSlice s = label_superlevel(grid, band, stop_radius);
    if (s.m_count != 1)
        fail(Err::Certificate, "expected a single surface component at the stop radius, found " +
                                   std::to_string(s.m_count));
    int alive = count_alive();
    if (alive != 1)
        fail(Err::Certificate,
             "expected a single live domain at the stop radius, found " + std::to_string(alive));

    // filled = territory of every non-subtracted lineage
    std::vector<CellIndex> filled;
    size_t total = grid.cell_count();
    for (CellIndex c = 0; c < total; c++) {
        if (owner[c] == kNoOwner) continue;
        int nd = resolve(owner[c]);
        if (!nodes[nd].subtracted) filled.push_back(c);
    }
    out.certificate.filled = std::move(filled);
    out.certificate.filled_digest = fnv1a_digest(out.certificate.filled);
    out.certificate.total_figures = figures_total;

    size_t omega = 0, covered = 0;
    for (CellIndex c = 0; c < total; c++) {
        if (!grid.inside(c)) continue;
        omega++;
        if (grid.near_m(c)) {
            covered++;
            continue;
        }
        if (owner[c] != kNoOwner && !nodes[resolve(owner[c])].subtracted) covered++;
    }
    out.certificate.omega_cells = omega;
    out.certificate.residual_cells = omega - covered;
    out.certificate.residual_fraction = omega ? double(omega - covered) / omega : 0.0;
    if (out.certificate.residual_fraction >= 0.005)
        fail(Err::Certificate,
             "residual " + std::to_string(out.certificate.residual_fraction) +
                 " of the domain is not covered by the filled set and the tube band");
    if (figures_total > out.certificate.figure_budget)
        fail(Err::Certificate, "figure count " + std::to_string(figures_total) +
                                   " exceeds the budget " +
                                   std::to_string(out.certificate.figure_budget));
    out.certificate.invariant_report.push_back(
        "figure count " + std::to_string(figures_total) + " within budget " +
        std::to_string(out.certificate.figure_budget));
    out.certificate.ok = true;

    // witness samples: the main lineage's layer anchors, recorded evenly
    // along the metrics rows
    const auto& rows = out.metrics;
    size_t stride = std::max<size_t>(1, rows.size() / 200);
    for (size_t i = 0; i < rows.size(); i += stride) {
        WitnessSample w;
        w.r = rows[i].r;
        w.layer_cell = kNoCell;
        out.witness_samples.push_back(w);
    }
}

}  // namespace

SweepResult run_sweep(const SurfaceSpec& spec, const VoxelGrid& grid,
                      const MorseSchedule& schedule, const SweepConfig& cfg) {
    Engine eng(spec, grid, schedule, cfg);
    eng.run();
    return eng.out;
}

WitnessReport numeric_witness(const SurfaceSpec& spec, const VoxelGrid& grid,
                              const SweepResult& result, const C2Fn& f, int max_figures,
                              int quad_nodes, double tolerance) {
    WitnessReport rep;
    if (spec.dim_n != 2) fail(Err::Config, "numeric witness is implemented for n=2");
    // Replay figures along the certified descent: anchor points are taken on
    // the spheres recorded in the metrics, at filled cells near each radius.
    const auto& filled = result.certificate.filled;
    if (filled.empty()) fail(Err::Config, "certificate has no filled cells");
    std::vector<std::pair<float, CellIndex>> by_r(filled.size());
    for (size_t i = 0; i < filled.size(); i++)
        by_r[i] = {(float)grid.radius(filled[i]), filled[i]};
    std::sort(by_r.begin(), by_r.end());

    double c_place = 0.35;  // placement scale; figures must fit in delta-balls
    int placed = 0;
    for (size_t mi = 0; mi < result.metrics.size() && placed < max_figures; mi++) {
        double r = result.metrics[mi].r;
        if (r <= 1.05) continue;
        auto it = std::lower_bound(by_r.begin(), by_r.end(),
                                   std::make_pair((float)r, (CellIndex)0));
        if (it == by_r.end()) continue;
        Vec z = grid.center(it->second);
        Vec p = z * (r / z.norm());
        LeviHartogsFigure fig;
        try {
            fig = place_levi_hartogs(r, p, spec.delta, c_place);
        } catch (const TypedError&) {
            continue;
        }
        placed++;
        // witness points inside the filled parallelepiped
        for (int wi = 0; wi < 5; wi++) {
            double fx = -0.6 + 0.3 * wi;
            Vec q = fig.to_ambient(std::complex<double>(fx * fig.epsilon1 * 0.8, 0),
                                   std::complex<double>(0.2 * fig.epsilon1 * fx,
                                                        -0.5 * fig.epsilon2));
            FillResult fr = fill_levi_hartogs_figure(f, fig, q, quad_nodes);
            std::complex<double> direct = f({q[0], q[1]}, {q[2], q[3]});
            rep.max_error = std::max(rep.max_error, std::abs(fr.value - direct));
            rep.witness_points++;
        }
    }
    rep.figures_replayed = placed;
    if (rep.max_error > tolerance)
        fail(Err::NumericWitness, "witness error " + std::to_string(rep.max_error) +
                                      " exceeds tolerance " + std::to_string(tolerance));
    return rep;
}

}  // namespace levifill

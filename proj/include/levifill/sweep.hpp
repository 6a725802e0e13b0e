#pragma once

// The descending-radius engine. Starting above the largest critical radius,
// it grows certified territory one rind step (thickness eta) at a time,
// maintaining one voxel domain per cut-surface component and the
// disjoint-or-nested forest over them. At each critical radius the event is
// classified from the coindex, flank slices and probes in fitted Morse
// coordinates, then applied: birth of a domain, local termination, hole
// fill, merge of two domains, or suppression of a nested domain and
// subtraction of its closure from the survivor. Figure usage is accrued per
// rind step from the sphere-region area of every live domain.

#include <cstdint>
#include <string>
#include <vector>

#include "levifill/components.hpp"
#include "levifill/figures.hpp"
#include "levifill/grid.hpp"
#include "levifill/morse.hpp"

namespace levifill {

enum class EventKind { Creation, Termination, HoleFill, Merge, Subtract, RegularPass };

const char* event_kind_name(EventKind k);

struct SweepEvent {
    double at_radius = 0;
    int coindex = 0;
    EventKind kind = EventKind::RegularPass;
    std::string subcase;               // a, a', b, b', c, e, III
    std::vector<int> components_in;    // engine node ids at r^+
    std::vector<int> components_out;   // engine node ids at r^-
    int count_before = 0;              // global component count at r^+
    int count_after = 0;               // global component count at r^-
    // pseudocube in fitted Morse coordinates
    Vec cube_center;
    double cube_eta = 0;        // radial half-extent |v| < cube_eta
    double cube_halfwidth = 0;  // tangential extent 2*sqrt(cube_eta)
    int local_components_above = 0;
};

struct FillCertificate {
    bool ok = false;
    std::vector<CellIndex> filled;  // sorted voxel set of the surviving domain
    uint64_t filled_digest = 0;
    long long total_figures = 0;
    long long figure_budget = 0;    // C (r_max/delta)^{2n-1} ceil((r_max-r_1)/eta)
    std::vector<SweepEvent> events;
    size_t omega_cells = 0;     // cells of the discrete domain (F < 0)
    size_t residual_cells = 0;  // omega cells not covered by filled u V_delta(M)
    double residual_fraction = 0;
    double stop_radius = 0;
    std::vector<std::string> invariant_report;
};

struct SweepConfig {
    double constant_C = 1.0;    // scale in the count formulas
    double constant_c = 0.25;   // scale in eta and the figure geometry
    int quad_nodes = 256;
    double stop_eps = 0;        // 0 selects max(delta/10, 3*spacing)
    int samples_per_interval = 1;  // regular radii verified per interval
    bool verify_flank_forests = true;
    int threads = 1;
    long long max_metric_rows = 200000;
};

struct MetricsRow {
    double r = 0;
    int c_count = 0;        // live domains
    double area_total = 0;  // summed bottom-layer areas
    long long figures_step = 0;
    long long figures_cum = 0;
    long long bound_cum = 0;
};

struct SliceRecord {
    double r = 0;
    int c_count = 0;
    int n_count = 0;
    std::string forest_edges;  // "child>parent" pairs, comma separated
};

struct WitnessSample {
    double r = 0;
    CellIndex layer_cell = 0;
};

struct SweepResult {
    FillCertificate certificate;
    std::vector<MetricsRow> metrics;
    std::vector<SliceRecord> slices;
    std::vector<WitnessSample> witness_samples;
};

// Run the whole descent from above the top critical radius down to
// r_1 + stop_eps. All forest invariants are re-verified on independently
// rebuilt slices at flank radii and at sampled regular radii; violations
// abort with the typed error of the failed check.
SweepResult run_sweep(const SurfaceSpec& spec, const VoxelGrid& grid,
                      const MorseSchedule& schedule, const SweepConfig& cfg);

// Replay up to max_figures of the recorded figure placements, performing the
// actual Cauchy fill of a closed-form holomorphic f from its own values on
// the certified side, and report the maximum witness error. Throws
// NumericWitnessFailure above the tolerance.
struct WitnessReport {
    double max_error = 0;
    int figures_replayed = 0;
    int witness_points = 0;
};
WitnessReport numeric_witness(const SurfaceSpec& spec, const VoxelGrid& grid,
                              const SweepResult& result, const C2Fn& f, int max_figures = 200,
                              int quad_nodes = 256, double tolerance = 1e-5);

uint64_t fnv1a_digest(const std::vector<CellIndex>& cells);

}  // namespace levifill

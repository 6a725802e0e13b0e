#pragma once

// Critical points of the radius function restricted to M, their coindex
// classification through the restricted Hessian, and the singular-radius
// schedule that drives the sweep. A point p on M is critical for r|_M when
// grad F is parallel to p (the spheres {||z|| = r} are tangent to M there).

#include <vector>

#include "levifill/grid.hpp"
#include "levifill/surface.hpp"
#include "levifill/types.hpp"

namespace levifill {

struct CriticalPoint {
    Vec location;
    double radius = 0;
    int coindex = 0;                    // positive eigenvalues of H[r_M]
    std::vector<double> eigenvalues;    // 2n-1 values, descending
    std::vector<Vec> eigenvectors;      // tangent frame matching eigenvalues
    double flank_minus = 0;             // radius - eta/2
    double flank_plus = 0;              // radius + eta/2

    int morse_index(int dim) const { return dim - 1 - coindex; }
};

struct MorseSchedule {
    std::vector<CriticalPoint> points;  // sorted by radius, ascending
    double eta = 0;                     // uniform rind thickness
    int kappa = 0;

    double r_min() const { return points.front().radius; }
    double r_max() const { return points.back().radius; }
};

struct MorseConfig {
    double c = 0.25;            // the scale constant in eta = c delta^2 / r_max
    bool eta_delta2 = true;     // false selects the eta = c delta / r_max variant
    double lagrange_tol = 1e-6; // residual for accepting a refined point
    double degeneracy_rel = 1e-5;
    double seed_tangential = 0.35;
    int newton_max_iter = 60;
    bool allow_unrefined = false;
};

struct MorseViolation {
    enum Kind { RadiusCollision, Degenerate } kind;
    Vec location;      // a representative offending point
    std::string what;
};

// Scan the surface band of the grid for local minima of the tangential part
// of the radial direction, then Newton-refine the Lagrange system
// (F = 0, grad F x z = 0). Deduplicates within one grid cell. Seeds whose
// refinement fails are reported as suspect regions and abort unless
// allow_unrefined is set.
std::vector<Vec> find_critical_points(const SurfaceSpec& spec, const VoxelGrid& grid,
                                      const MorseConfig& cfg);

// Eigen data of the restricted Hessian at a (refined) critical point.
// At such p the Hessian of r|_M on the tangent space is
//   I/r  -  s * H_F|_T / ||grad F||,   s = sign(grad F . p).
CriticalPoint classify_critical_point(const SurfaceSpec& spec, const Vec& p,
                                      const MorseConfig& cfg);

// Assemble the schedule; throws RadiusCollision / NondegeneracyViolation with
// the offending points when the good-boundary conditions fail.
MorseSchedule validate_good_morse(std::vector<CriticalPoint> points, const SurfaceSpec& spec,
                                  const MorseConfig& cfg);

// Collect violations instead of throwing (drives the perturbation loop).
std::vector<MorseViolation> good_morse_violations(const std::vector<CriticalPoint>& points,
                                                  const SurfaceSpec& spec, const MorseConfig& cfg);

// Add one deterministic localized bump near the first offending point. The
// bump is inward (positive amplitude, at most delta/10) with width a few
// delta. Returns the modified spec; re-run find/classify afterwards.
SurfaceSpec perturb_surface(const SurfaceSpec& spec, const std::vector<MorseViolation>& violations);

// find -> classify -> validate with up to 10 perturbation rounds; the
// assembled schedule plus the (possibly bumped) spec.
struct PreparedBoundary {
    SurfaceSpec spec;
    VoxelGrid grid;
    MorseSchedule schedule;
    int perturbations = 0;
};
PreparedBoundary prepare_good_boundary(const SurfaceSpec& spec, const MorseConfig& cfg,
                                       int threads = 1);

double lagrange_residual(const SurfaceSpec& spec, const Vec& p);

}  // namespace levifill

#pragma once

// Implicit-surface definitions. A surface is a scalar field F on R^{2n} with
// M = {F = 0} and F < 0 inside the bounded domain. Surfaces come either from
// a small set of builtin parametric shapes (sphere/capsule primitives under
// smooth union/subtraction blending) or from an expression string; see
// README for the grammar.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levifill/types.hpp"

namespace levifill {

class Field {
  public:
    virtual ~Field() = default;
    virtual double eval(const Vec& z) const = 0;

    // Derivatives default to central differences with the given step;
    // analytic shapes override.
    virtual Vec gradient(const Vec& z, double step) const;
    virtual Mat hessian(const Vec& z, double step) const;
    virtual bool analytic_derivatives() const { return false; }
};

using FieldPtr = std::shared_ptr<const Field>;

// --- primitives --------------------------------------------------------

// Signed distance to a sphere: ||z - c|| - rho.
FieldPtr make_sphere(const Vec& center, double rho);
// Signed distance to a capsule (segment a..b thickened by rho).
FieldPtr make_capsule(const Vec& a, const Vec& b, double rho);
// Ellipsoid level function: sqrt(sum ((z_i-c_i)/s_i)^2) - 1 (analytic).
FieldPtr make_ellipsoid(const Vec& center, const Vec& semi_axes);

// Smooth CSG over parts. Positive parts are union-blended with the stable
// exponential smooth-min of width k; negative parts are carved out with the
// matching smooth-max. Everything stays C-infinity for k > 0.
struct BlendPart {
    FieldPtr field;
    int sign = +1;  // +1 solid, -1 carved
};
FieldPtr make_blend(std::vector<BlendPart> parts, double k);

// F shifted by a fixed translation: F'(z) = F(z - t).
FieldPtr make_translated(FieldPtr f, const Vec& t);
// F plus localized Gaussian bumps (used by good-boundary perturbation).
struct Bump {
    Vec center;
    double amplitude = 0;
    double width = 0;
};
FieldPtr make_bumped(FieldPtr f, std::vector<Bump> bumps);

// Compile the expression language (variables x1..x{2n}, +,-,*,/,^, functions
// sqrt exp log abs min max smin smax norm, constant pi).
FieldPtr compile_expression(const std::string& text, int dim);

// --- surface spec -------------------------------------------------------

struct SurfaceSpec {
    FieldPtr field;
    Box bounding_box;
    int dim_n = 2;        // complex dimension n; ambient dim is 2n
    double delta = 0.1;   // tubular half-width
    int grid_res = 96;    // cells along the longest box axis
    std::string name = "custom";
    Vec normalization_shift;   // applied at load so dist(0, closure) = 3
    std::vector<Bump> bumps;   // perturbations applied on top of the field

    int ambient_dim() const { return 2 * dim_n; }
    double spacing() const { return bounding_box.max_extent() / grid_res; }

    double eval(const Vec& z) const;
    Vec gradient(const Vec& z) const;
    Mat hessian(const Vec& z) const;
    double fd_step() const { return spacing() * 0.5; }
};

// Parse a spec JSON document:
//   {"shape": "...", "params": {...}, "delta": ..., "grid_res": ..., "box": ...}
// or
//   {"expr": "...", "box": [[lo...],[hi...]], "delta": ..., "grid_res": ...}
// Builtin shapes carry a default box. After construction the spec is
// translated along the near-point direction so that dist(0, closure) is 3,
// matching the distance normalization assumed by the rest of the pipeline.
SurfaceSpec load_spec_json(const std::string& json_text);
SurfaceSpec load_spec_file(const std::string& path);

// Builtin shape constructors (also reachable through JSON "shape" values).
SurfaceSpec builtin_offset_sphere(double center_dist = 4.0, double rho = 1.0,
                                  double delta = 0.1, int grid_res = 120);
SurfaceSpec builtin_ellipsoid(double center_dist, const Vec& semi_axes,
                              double delta, int grid_res);
// Two sphere lobes on a radial axis joined by a transversally offset bridge
// capsule; the offset breaks the rotational symmetry that would otherwise
// make the radius function non-Morse on the junction spheres.
SurfaceSpec builtin_dumbbell(double d1 = 3.5, double rho1 = 1.0, double d2 = 5.6,
                             double rho2 = 0.95, double bridge_offset = 0.8,
                             double bridge_rho = 0.3, double blend_k = 0.1,
                             double delta = 0.12, int grid_res = 120);
// Sphere with a thin finger drilled upward from below (entry through the
// near face, tip inside), tilted off the radial axis.
SurfaceSpec builtin_finger_sphere(double center_dist = 4.0, double rho = 1.0,
                                  double finger_rho = 0.25, double tip_height = 0.45,
                                  double entry_offset = 0.35, double blend_k = 0.08,
                                  double delta = 0.12, int grid_res = 120);
// Sphere with a crater carved into the far side, off the pole.
SurfaceSpec builtin_dented_sphere(double center_dist = 4.0, double rho = 1.0,
                                  double dent_rho = 0.45, double dent_offset = 0.55,
                                  double dent_sink = 0.25, double blend_k = 0.07,
                                  double delta = 0.12, int grid_res = 120);
// Two lobes at (nearly) the same distance from the origin; their near/far
// points collide in radius, which is the input of the perturbation tests.
SurfaceSpec builtin_twin_spheres(double center_dist = 4.0, double rho = 0.8,
                                 double separation = 2.4, double blend_k = 0.12,
                                 double delta = 0.12, int grid_res = 96);

// Estimate min ||z|| over the surface by dense sampling of F sign changes
// along grid columns (used for the distance normalization at load time).
double estimate_near_radius(const Field& f, const Box& box, int probe_res);

}  // namespace levifill

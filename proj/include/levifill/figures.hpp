#pragma once

// Hartogs and Levi-Hartogs figures for n = 2: geometry, rigid placement
// against a sphere from the concave side, numerical Cauchy filling over
// horizontal analytic discs, and the figure-count formulas.

#include <complex>
#include <functional>
#include <vector>

#include "levifill/types.hpp"

namespace levifill {

using C2Fn = std::function<std::complex<double>(std::complex<double>, std::complex<double>)>;

// H = {|z1|<1, |z2|<eps} u {1-eps<|z1|<1, |z2|<1}. Holomorphic data on H
// determines values on the whole unit bidisc.
struct HartogsFigure {
    int split_a = 1;          // coordinates split (z1..za | za+1..zn); n=2 fixes a=1
    double epsilon = 0.1;     // wall thickness, in (0,1)

    bool contains(std::complex<double> z1, std::complex<double> z2) const {
        double a1 = std::abs(z1), a2 = std::abs(z2);
        return (a1 < 1 && a2 < epsilon) || (a1 > 1 - epsilon && a1 < 1 && a2 < 1);
    }
};

struct FillResult {
    std::complex<double> value;
    bool accuracy_warning = false;  // target too close to the integration circle
};

// Cauchy integral over the disc boundary |w| = 1 - eps/2 at height z2:
//   F(z1,z2) = 1/(2 pi i) Int f(w, z2) / (w - z1) dw
// via the N-node trapezoidal rule (spectrally accurate for data holomorphic
// near the closed disc). Requires |z1| < 1 - eps/2 and |z2| < 1; emits an
// accuracy warning when 1 - eps/2 - |z1| < 2/N.
FillResult fill_hartogs_figure(const C2Fn& f, const HartogsFigure& fig,
                               std::complex<double> z1, std::complex<double> z2, int nodes = 256);

// The bed-shaped figure adapted to the concave side of the sphere S_r.
// Model coordinates: LH = {|z1|<eps1, |x2|<eps1, -eps2<y2<0}
//                        u {eps1-eps1^2<|z1|<eps1, |x2|<eps1, |y2|<eps2},
// filled closure {|z1|<eps1, |x2|<eps1, |y2|<eps2}. The placement z -> p + Uz
// is complex-unitary, sends 0 to p on S_r and the -y2 side outward, so the
// whole figure sits inside the shell {r < ||z|| < r + delta}.
struct LeviHartogsFigure {
    double epsilon1 = 0;   // tangential half-width, c * delta
    double epsilon2 = 0;   // radial depth, scales like delta^2 / r
    Vec anchor;            // p on the sphere
    double sphere_r = 0;
    // placement as two complex column vectors (ambient = p + u1*z1 + u2*z2)
    std::complex<double> u1[2];
    std::complex<double> u2[2];

    Vec to_ambient(std::complex<double> z1, std::complex<double> z2) const;
    void to_model(const Vec& z, std::complex<double>& z1, std::complex<double>& z2) const;
    bool model_in_figure(std::complex<double> z1, std::complex<double> z2) const;
    bool model_in_filled(std::complex<double> z1, std::complex<double> z2) const;
};

// Build the figure at anchor p (||p|| = r) for shell thickness delta and
// scale constant c: eps1 = c*delta, eps2 = (c*(1-c*delta))^2/(4r) * delta^2
// (the depth that keeps the walls outside the closed ball; see README).
// Containment is then verified by sampling the closure extremes; violation
// or a figure that does not fit inside the delta-ball around p raises
// PlacementError.
LeviHartogsFigure place_levi_hartogs(double r, const Vec& p, double delta, double c);

// Cauchy filling composed with the placement: f is defined on (a set
// containing the image of) the figure; z must lie in the filled
// parallelepiped image.
FillResult fill_levi_hartogs_figure(const C2Fn& f_ambient, const LeviHartogsFigure& fig,
                                    const Vec& z, int nodes = 256);

// ceil(C * (r/delta)^{2n-1}), at least 1: figures needed to deepen the whole
// spherical shell one rind step.
long long count_figures_shell(double r, double delta, int n, double C = 1.0);

// ceil(C * area / (s_{2n-1} * delta^{2n-1})) where s_{2n-1} = 2 pi^n/(n-1)!
// is the unit-sphere area; 0 for area 0, at least 1 otherwise. Consistent
// with count_figures_shell at the full sphere area s * r^{2n-1}.
long long count_figures_region(double area, double delta, int n, double C = 1.0);

double unit_sphere_area(int n);  // 2 pi^n / (n-1)!

}  // namespace levifill

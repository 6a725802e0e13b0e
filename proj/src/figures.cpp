#include "levifill/figures.hpp"

#include <algorithm>
#include <cmath>

namespace levifill {

namespace {

using cd = std::complex<double>;

// Trapezoidal Cauchy integral over |w| = rho at fixed second coordinate.
FillResult cauchy_disc(const std::function<cd(cd)>& boundary, double rho, cd z1, int nodes) {
    FillResult res;
    if (std::abs(z1) >= rho)
        fail(Err::Evaluation, "Cauchy target outside the integration circle");
    res.accuracy_warning = (rho - std::abs(z1)) < 2.0 / nodes;
    cd sum = 0;
    for (int k = 0; k < nodes; k++) {
        double th = 2 * M_PI * k / nodes;
        cd w = rho * cd(std::cos(th), std::sin(th));
        cd fv = boundary(w);
        if (!std::isfinite(fv.real()) || !std::isfinite(fv.imag()))
            fail(Err::Evaluation, "non-finite boundary sample in Cauchy quadrature");
        sum += fv * w / (w - z1);
    }
    res.value = sum / (double)nodes;
    return res;
}

}  // namespace

FillResult fill_hartogs_figure(const C2Fn& f, const HartogsFigure& fig, cd z1, cd z2, int nodes) {
    if (fig.split_a != 1) fail(Err::Config, "Cauchy filling is implemented for n=2, a=1");
    if (std::abs(z2) >= 1.0) fail(Err::Evaluation, "z2 outside the unit disc");
    double rho = 1.0 - fig.epsilon / 2;  // boundary circle inside the thick wall
    return cauchy_disc([&](cd w) { return f(w, z2); }, rho, z1, nodes);
}

Vec LeviHartogsFigure::to_ambient(cd z1, cd z2) const {
    Vec out = anchor;
    out[0] += u1[0].real() * z1.real() - u1[0].imag() * z1.imag() + u2[0].real() * z2.real() -
              u2[0].imag() * z2.imag();
    out[1] += u1[0].imag() * z1.real() + u1[0].real() * z1.imag() + u2[0].imag() * z2.real() +
              u2[0].real() * z2.imag();
    out[2] += u1[1].real() * z1.real() - u1[1].imag() * z1.imag() + u2[1].real() * z2.real() -
              u2[1].imag() * z2.imag();
    out[3] += u1[1].imag() * z1.real() + u1[1].real() * z1.imag() + u2[1].imag() * z2.real() +
              u2[1].real() * z2.imag();
    return out;
}

void LeviHartogsFigure::to_model(const Vec& z, cd& z1, cd& z2) const {
    // columns are unitary, so the inverse is the conjugate transpose
    cd w0(z[0] - anchor[0], z[1] - anchor[1]);
    cd w1(z[2] - anchor[2], z[3] - anchor[3]);
    z1 = std::conj(u1[0]) * w0 + std::conj(u1[1]) * w1;
    z2 = std::conj(u2[0]) * w0 + std::conj(u2[1]) * w1;
}

bool LeviHartogsFigure::model_in_figure(cd z1, cd z2) const {
    double a1 = std::abs(z1), x2 = z2.real(), y2 = z2.imag();
    bool slab = a1 < epsilon1 && std::fabs(x2) < epsilon1 && y2 > -epsilon2 && y2 < 0;
    bool wall = a1 > epsilon1 - epsilon1 * epsilon1 && a1 < epsilon1 &&
                std::fabs(x2) < epsilon1 && std::fabs(y2) < epsilon2;
    return slab || wall;
}

bool LeviHartogsFigure::model_in_filled(cd z1, cd z2) const {
    return std::abs(z1) < epsilon1 && std::fabs(z2.real()) < epsilon1 &&
           std::fabs(z2.imag()) < epsilon2;
}

LeviHartogsFigure place_levi_hartogs(double r, const Vec& p, double delta, double c) {
    if (p.dim != 4) fail(Err::Config, "Levi-Hartogs placement is implemented for n=2");
    if (r <= 1 || delta <= 0 || delta >= 1 || c <= 0 || c >= 1)
        fail(Err::Placement, "placement requires r > 1, 0 < delta < 1, 0 < c < 1");
    if (std::fabs(p.norm() - r) > 1e-9 * r)
        fail(Err::Placement, "anchor is not on the sphere of radius r");

    LeviHartogsFigure fig;
    fig.sphere_r = r;
    fig.anchor = p;
    fig.epsilon1 = c * delta;
    // Depth keeping the inner wall corners outside the closed ball: a corner
    // at tangential offset t = eps1 - eps1^2 and inward dip eps2 has norm
    // sqrt((r-eps2)^2 + t^2), which exceeds r iff t^2 > 2 r eps2 - eps2^2.
    double t = fig.epsilon1 - fig.epsilon1 * fig.epsilon1;
    fig.epsilon2 = t * t / (4 * r);
    if (fig.epsilon2 <= 0) fail(Err::Placement, "degenerate figure depth");

    // Complex-unitary frame: nu = p/r viewed in C^2, u2 = i*nu so that the
    // +y2 model direction moves inward (-nu); u1 any complex-orthogonal unit.
    cd nu0(p[0] / r, p[1] / r), nu1(p[2] / r, p[3] / r);
    cd i(0, 1);
    fig.u2[0] = i * nu0;
    fig.u2[1] = i * nu1;
    // u1 ~ e_k - <e_k,u2> u2 for the first coordinate axis not parallel to u2
    for (int k = 0; k < 2; k++) {
        cd e0 = (k == 0) ? cd(1, 0) : cd(0, 0);
        cd e1 = (k == 0) ? cd(0, 0) : cd(1, 0);
        cd proj = std::conj(fig.u2[0]) * e0 + std::conj(fig.u2[1]) * e1;
        cd v0 = e0 - proj * fig.u2[0];
        cd v1 = e1 - proj * fig.u2[1];
        double nrm = std::sqrt(std::norm(v0) + std::norm(v1));
        if (nrm > 1e-6) {
            fig.u1[0] = v0 / nrm;
            fig.u1[1] = v1 / nrm;
            break;
        }
    }

    // The figure is used inside delta-balls around sphere points, so its
    // closure must fit in B(p, delta); this is what bounds c away from 1.
    double reach = std::sqrt(2 * fig.epsilon1 * fig.epsilon1 + fig.epsilon2 * fig.epsilon2);
    if (reach >= delta)
        fail(Err::Placement, "figure of tangential half-width " + std::to_string(fig.epsilon1) +
                                 " does not fit in the delta-ball; use a smaller c");

    // Containment check at sampled closure extremes: 16 phases of z1 at the
    // inner/outer wall radii and 0, crossed with x2 and y2 extremes. Closure
    // points on the tangent plane (y2 = 0) may touch the sphere (the anchor
    // itself does); the inward-dipped wall corners (y2 = +eps2) must clear it
    // strictly, and everything stays below r + delta.
    double a1s[3] = {0.0, fig.epsilon1 - fig.epsilon1 * fig.epsilon1, fig.epsilon1};
    double x2s[3] = {-fig.epsilon1, 0.0, fig.epsilon1};
    double y2s[3] = {-fig.epsilon2, 0.0, fig.epsilon2};
    for (double a1 : a1s) {
        for (int ph = 0; ph < 16; ph++) {
            double th = 2 * M_PI * ph / 16;
            cd z1 = a1 * cd(std::cos(th), std::sin(th));
            for (double x2 : x2s) {
                for (double y2 : y2s) {
                    if (y2 > 0 && a1 < fig.epsilon1 - fig.epsilon1 * fig.epsilon1 - 1e-15)
                        continue;  // the inward dip exists only on the wall part
                    double nrm = to_ambient(z1, cd(x2, y2)).norm();
                    bool ok = (y2 > 0) ? (nrm > r) : (nrm > r - 1e-12);
                    ok = ok && nrm < r + delta;
                    if (!ok)
                        fail(Err::Placement,
                             "figure closure escapes the shell at norm " + std::to_string(nrm) +
                                 " (r = " + std::to_string(r) + ", c too large?)");
                }
            }
        }
    }
    return fig;
}

FillResult fill_levi_hartogs_figure(const C2Fn& f_ambient, const LeviHartogsFigure& fig,
                                    const Vec& z, int nodes) {
    cd z1, z2;
    fig.to_model(z, z1, z2);
    if (!fig.model_in_filled(z1, z2))
        fail(Err::Evaluation, "target point outside the filled parallelepiped");
    double rho = fig.epsilon1 - fig.epsilon1 * fig.epsilon1 / 2;  // circle inside the wall
    auto boundary = [&](cd w) {
        Vec amb = fig.to_ambient(w, z2);
        return f_ambient(cd(amb[0], amb[1]), cd(amb[2], amb[3]));
    };
    return cauchy_disc(boundary, rho, z1, nodes);
}

double unit_sphere_area(int n) {
    double fact = 1;
    for (int k = 2; k <= n - 1; k++) fact *= k;
    return 2 * std::pow(M_PI, n) / fact;
}

long long count_figures_shell(double r, double delta, int n, double C) {
    if (delta >= r) return 1;
    double v = C * std::pow(r / delta, 2 * n - 1);
    return std::max(1ll, (long long)std::ceil(v - 1e-9));
}

long long count_figures_region(double area, double delta, int n, double C) {
    if (area <= 0) return 0;
    double v = C * area / (unit_sphere_area(n) * std::pow(delta, 2 * n - 1));
    return std::max(1ll, (long long)std::ceil(v - 1e-9));
}

}  // namespace levifill

#include "levifill/morse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace levifill {

double lagrange_residual(const SurfaceSpec& spec, const Vec& p) {
    Vec g = spec.gradient(p);
    double gn = g.norm();
    if (gn < 1e-12) return 1e300;
    Vec zh = p.normalized();
    Vec tangential = g - zh * g.dot(zh);
    return tangential.norm() / gn;
}

namespace {

// Tangential part of the radial direction; zero exactly at critical points.
double tangential_radial(const SurfaceSpec& spec, const Vec& z) {
    Vec g = spec.gradient(z);
    double gn = g.norm();
    if (gn < 1e-12) return 1e300;
    Vec nh = g * (1.0 / gn);
    Vec zh = z.normalized();
    Vec t = zh - nh * zh.dot(nh);
    return t.norm();
}

// Newton on G(z, mu) = (grad F - mu z, F) = 0.
bool newton_refine(const SurfaceSpec& spec, Vec& z, const MorseConfig& cfg) {
    int d = z.dim;
    double mu = 0;
    {
        Vec g = spec.gradient(z);
        mu = g.dot(z) / std::max(z.norm2(), 1e-12);
    }
    for (int it = 0; it < cfg.newton_max_iter; it++) {
        Vec g = spec.gradient(z);
        double F = spec.eval(z);
        std::vector<double> rhs(d + 1);
        double rn = 0;
        for (int i = 0; i < d; i++) {
            rhs[i] = -(g[i] - mu * z[i]);
            rn += rhs[i] * rhs[i];
        }
        rhs[d] = -F;
        rn = std::sqrt(rn + F * F);
        if (rn < 1e-12 && lagrange_residual(spec, z) < cfg.lagrange_tol) return true;

        Mat H = spec.hessian(z);
        Mat J(d + 1, d + 1);
        for (int i = 0; i < d; i++) {
            for (int j = 0; j < d; j++) J.at(i, j) = H.at(i, j) - (i == j ? mu : 0.0);
            J.at(i, d) = -z[i];
            J.at(d, i) = g[i];
        }
        J.at(d, d) = 0;
        if (!solve_linear(J, rhs)) return false;
        double step2 = 0;
        for (int i = 0; i < d; i++) step2 += rhs[i] * rhs[i];
        double cap = 0.25;  // keep iterates near the seed cell
        double scale = (step2 > cap * cap) ? cap / std::sqrt(step2) : 1.0;
        for (int i = 0; i < d; i++) z[i] += scale * rhs[i];
        mu += scale * rhs[d];
        if (!spec.bounding_box.contains(z)) return false;
    }
    return std::fabs(spec.eval(z)) < 1e-9 && lagrange_residual(spec, z) < cfg.lagrange_tol;
}

// Orthonormal tangent frame at p (2n-1 vectors orthogonal to grad F).
std::vector<Vec> tangent_frame(const Vec& normal, int d) {
    std::vector<Vec> frame;
    Vec n = normal.normalized();
    for (int k = 0; k < d && (int)frame.size() < d - 1; k++) {
        Vec v = axis_vec(d, k);
        v = v - n * v.dot(n);
        for (const Vec& u : frame) v = v - u * v.dot(u);
        double vn = v.norm();
        if (vn > 1e-6) frame.push_back(v * (1.0 / vn));
    }
    return frame;
}

}  // namespace

std::vector<Vec> find_critical_points(const SurfaceSpec& spec, const VoxelGrid& grid,
                                      const MorseConfig& cfg) {
    // Seed pass: surface-band cells where the tangential radial direction is
    // locally minimal and below threshold.
    struct Seed {
        CellIndex cell;
        double score;
    };
    std::vector<Seed> seeds;
    size_t total = grid.cell_count();
    std::vector<float> score(total, 1e30f);
    for (CellIndex c = 0; c < total; c++) {
        if (!grid.surf(c)) continue;
        double t = tangential_radial(spec, grid.center(c));
        score[c] = (float)t;
        if (t < cfg.seed_tangential) seeds.push_back({c, t});
    }
    // Non-maximum suppression: keep cells that are minimal within a small
    // Chebyshev ball of band cells.
    std::vector<Seed> minima;
    int R = 3;
    for (const Seed& s : seeds) {
        int ijk[kMaxDim];
        grid.coords_of(s.cell, ijk);
        bool is_min = true;
        int lo[kMaxDim], hi[kMaxDim];
        for (int i = 0; i < grid.dim; i++) {
            lo[i] = std::max(0, ijk[i] - R);
            hi[i] = std::min(grid.dims[i] - 1, ijk[i] + R);
        }
        int cur[kMaxDim];
        for (int i = 0; i < grid.dim; i++) cur[i] = lo[i];
        for (;;) {
            CellIndex nb = grid.index_of(cur);
            if (score[nb] < s.score - 1e-12f ||
                (score[nb] == s.score && nb < s.cell)) {
                is_min = false;
                break;
            }
            int axis = 0;
            while (axis < grid.dim) {
                if (++cur[axis] <= hi[axis]) break;
                cur[axis] = lo[axis];
                axis++;
            }
            if (axis == grid.dim) break;
        }
        if (is_min) minima.push_back(s);
    }

    std::vector<Vec> refined;
    std::vector<Vec> suspects;
    for (const Seed& s : minima) {
        Vec z = grid.center(s.cell);
        if (!newton_refine(spec, z, cfg)) {
            suspects.push_back(grid.center(s.cell));
            continue;
        }
        bool dup = false;
        for (const Vec& q : refined)
            if ((q - z).norm() < grid.spacing) {
                dup = true;
                break;
            }
        if (!dup) refined.push_back(z);
    }
    if (!suspects.empty() && !cfg.allow_unrefined) {
        std::ostringstream os;
        os << "Newton refinement failed for " << suspects.size()
           << " seed region(s); first near (";
        for (int i = 0; i < suspects[0].dim; i++) os << (i ? "," : "") << suspects[0][i];
        os << "); rerun at finer grid or pass --allow-unrefined";
        fail(Err::Resolution, os.str());
    }
    std::sort(refined.begin(), refined.end(),
              [](const Vec& a, const Vec& b) { return a.norm() < b.norm(); });
    return refined;
}

CriticalPoint classify_critical_point(const SurfaceSpec& spec, const Vec& p,
                                      const MorseConfig& cfg) {
    int d = p.dim;
    double res = lagrange_residual(spec, p);
    if (res > 10 * cfg.lagrange_tol)
        fail(Err::Invariant, "classify called on a non-critical point (residual " +
                                 std::to_string(res) + ")");
    Vec g = spec.gradient(p);
    double gn = g.norm();
    double r = p.norm();
    double s = (g.dot(p) > 0) ? 1.0 : -1.0;

    std::vector<Vec> frame = tangent_frame(g, d);
    Mat HF = spec.hessian(p);
    Mat A((int)frame.size(), (int)frame.size());
    for (size_t i = 0; i < frame.size(); i++) {
        for (size_t j = 0; j < frame.size(); j++) {
            double hij = 0;
            for (int a = 0; a < d; a++)
                for (int b = 0; b < d; b++) hij += frame[i][a] * HF.at(a, b) * frame[j][b];
            A.at((int)i, (int)j) = (i == j ? 1.0 / r : 0.0) - s * hij / gn;
        }
    }
    std::vector<double> eig;
    Mat V;
    symmetric_eigen(A, eig, V);

    CriticalPoint cp;
    cp.location = p;
    cp.radius = r;
    cp.eigenvalues = eig;
    double emax = 0;
    for (double e : eig) emax = std::max(emax, std::fabs(e));
    int pos = 0;
    for (double e : eig) {
        if (std::fabs(e) < cfg.degeneracy_rel * std::max(emax, 1e-12))
            fail(Err::Nondegeneracy,
                 "restricted Hessian eigenvalue " + std::to_string(e) +
                     " below degeneracy tolerance at radius " + std::to_string(r));
        if (e > 0) pos++;
    }
    cp.coindex = pos;
    for (size_t j = 0; j < frame.size(); j++) {
        Vec v(d);
        for (int a = 0; a < d; a++) {
            double comp = 0;
            for (size_t i = 0; i < frame.size(); i++) comp += frame[i][a] * V.at((int)i, (int)j);
            v[a] = comp;
        }
        cp.eigenvectors.push_back(v.normalized());
    }
    return cp;
}

std::vector<MorseViolation> good_morse_violations(const std::vector<CriticalPoint>& points,
                                                  const SurfaceSpec& spec,
                                                  const MorseConfig& cfg) {
    std::vector<MorseViolation> out;
    std::vector<CriticalPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.radius < b.radius; });
    double rmax = sorted.empty() ? 1.0 : sorted.back().radius;
    double eta = cfg.eta_delta2 ? cfg.c * spec.delta * spec.delta / rmax
                                : cfg.c * spec.delta / rmax;
    for (size_t i = 0; i + 1 < sorted.size(); i++) {
        double gap = sorted[i + 1].radius - sorted[i].radius;
        if (gap <= 10 * eta) {
            std::ostringstream os;
            os << "radii " << sorted[i].radius << " and " << sorted[i + 1].radius
               << " collide (gap " << gap << " <= 10 eta = " << 10 * eta << ")";
            out.push_back({MorseViolation::RadiusCollision, sorted[i + 1].location, os.str()});
        }
    }
    for (const auto& cp : sorted) {
        double emax = 0;
        for (double e : cp.eigenvalues) emax = std::max(emax, std::fabs(e));
        for (double e : cp.eigenvalues) {
            if (std::fabs(e) < cfg.degeneracy_rel * std::max(emax, 1e-12)) {
                out.push_back({MorseViolation::Degenerate, cp.location,
                               "degenerate eigenvalue at radius " + std::to_string(cp.radius)});
                break;
            }
        }
    }
    return out;
}

MorseSchedule validate_good_morse(std::vector<CriticalPoint> points, const SurfaceSpec& spec,
                                  const MorseConfig& cfg) {
    if (points.size() < 2)
        fail(Err::Invariant,
             "kappa >= 2 always: nearest and farthest surface points are both critical; found " +
                 std::to_string(points.size()));
    std::sort(points.begin(), points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.radius < b.radius; });

    auto viol = good_morse_violations(points, spec, cfg);
    for (const auto& v : viol) {
        if (v.kind == MorseViolation::RadiusCollision) fail(Err::RadiusCollision, v.what);
        fail(Err::Nondegeneracy, v.what);
    }

    MorseSchedule sched;
    sched.kappa = (int)points.size();
    double rmax = points.back().radius;
    sched.eta = cfg.eta_delta2 ? cfg.c * spec.delta * spec.delta / rmax
                               : cfg.c * spec.delta / rmax;
    if (points.front().radius < 2.0)
        fail(Err::Invariant, "smallest critical radius " + std::to_string(points.front().radius) +
                                 " violates the r >= 2 normalization");
    if (sched.eta > spec.delta / 4)
        fail(Err::Config, "eta = " + std::to_string(sched.eta) +
                              " is not small against delta; lower c or delta");
    for (auto& cp : points) {
        cp.flank_minus = cp.radius - sched.eta / 2;
        cp.flank_plus = cp.radius + sched.eta / 2;
    }
    sched.points = std::move(points);
    return sched;
}

SurfaceSpec perturb_surface(const SurfaceSpec& spec,
                            const std::vector<MorseViolation>& violations) {
    if (violations.empty()) return spec;
    const MorseViolation& v = violations.front();
    // Deterministic placement: bump centered at the offending point, pushed
    // inward along the radial direction, amplitude delta/10, width 3 delta.
    Bump b;
    b.center = v.location;
    b.amplitude = spec.delta / 10;
    b.width = 3 * spec.delta;
    SurfaceSpec out = spec;
    out.bumps.push_back(b);
    out.field = make_bumped(spec.field, {b});
    return out;
}

PreparedBoundary prepare_good_boundary(const SurfaceSpec& spec0, const MorseConfig& cfg,
                                       int threads) {
    SurfaceSpec spec = spec0;
    for (int attempt = 0; attempt <= 10; attempt++) {
        VoxelGrid grid = voxelize(spec, threads);
        std::vector<Vec> pts = find_critical_points(spec, grid, cfg);
        std::vector<CriticalPoint> classified;
        std::vector<MorseViolation> viol;
        for (const Vec& p : pts) {
            try {
                classified.push_back(classify_critical_point(spec, p, cfg));
            } catch (const TypedError& e) {
                if (e.cls != Err::Nondegeneracy) throw;
                viol.push_back({MorseViolation::Degenerate, p, e.what()});
            }
        }
        if (viol.empty()) viol = good_morse_violations(classified, spec, cfg);
        if (viol.empty()) {
            PreparedBoundary pb{spec, std::move(grid),
                                validate_good_morse(std::move(classified), spec, cfg), attempt};
            return pb;
        }
        if (attempt == 10) break;
        spec = perturb_surface(spec, viol);
    }
    fail(Err::GoodBoundaryUnattainable,
         "good Morse boundary not reached after 10 perturbation attempts");
}

}  // namespace levifill

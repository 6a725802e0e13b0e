#pragma once

// Core value types shared by all levifill modules: small fixed-capacity
// vectors for points in R^{2n} (n = 2 or 3), axis-aligned boxes, the typed
// error taxonomy that maps onto CLI exit codes, and the little dense linear
// algebra needed for Newton refinement and restricted-Hessian eigenanalysis.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace levifill {

// Practical dimension cap: grids are res^{2n} cells, so 2n > 6 is unusable
// at desk scale anyway.
constexpr int kMaxDim = 6;

struct Vec {
    std::array<double, kMaxDim> a{};
    int dim = 4;

    Vec() = default;
    explicit Vec(int d) : dim(d) {}
    Vec(std::initializer_list<double> xs) {
        dim = (int)xs.size();
        int i = 0;
        for (double x : xs) a[i++] = x;
    }

    double& operator[](int i) { return a[i]; }
    double operator[](int i) const { return a[i]; }

    Vec operator+(const Vec& o) const {
        Vec r(dim);
        for (int i = 0; i < dim; i++) r.a[i] = a[i] + o.a[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r(dim);
        for (int i = 0; i < dim; i++) r.a[i] = a[i] - o.a[i];
        return r;
    }
    Vec operator*(double s) const {
        Vec r(dim);
        for (int i = 0; i < dim; i++) r.a[i] = a[i] * s;
        return r;
    }
    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < dim; i++) a[i] += o.a[i];
        return *this;
    }

    double dot(const Vec& o) const {
        double s = 0;
        for (int i = 0; i < dim; i++) s += a[i] * o.a[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    Vec normalized() const {
        double n = norm();
        return *this * (n > 0 ? 1.0 / n : 0.0);
    }
};

inline Vec axis_vec(int dim, int k, double s = 1.0) {
    Vec v(dim);
    v[k] = s;
    return v;
}

struct Box {
    Vec lo, hi;

    int dim() const { return lo.dim; }
    bool contains(const Vec& z) const {
        for (int i = 0; i < z.dim; i++)
            if (z[i] < lo[i] || z[i] > hi[i]) return false;
        return true;
    }
    Vec extent() const { return hi - lo; }
    double max_extent() const {
        double m = 0;
        for (int i = 0; i < lo.dim; i++) m = std::max(m, hi[i] - lo[i]);
        return m;
    }
    Box inflated(double m) const {
        Box b = *this;
        for (int i = 0; i < lo.dim; i++) {
            b.lo[i] -= m;
            b.hi[i] += m;
        }
        return b;
    }
};

// Typed failure classes. The numeric value is the CLI exit code, fixed and
// documented in the README; tests rely on the mapping.
enum class Err : int {
    Config = 2,
    Evaluation = 3,
    Placement = 4,
    Resolution = 5,
    RadiusCollision = 6,
    Nondegeneracy = 7,
    GoodBoundaryUnattainable = 8,
    Geometry = 9,
    Invariant = 10,
    Certificate = 11,
    NumericWitness = 12,
    Verify = 13,
};

struct TypedError : std::runtime_error {
    Err cls;
    TypedError(Err c, const std::string& msg) : std::runtime_error(msg), cls(c) {}
};

[[noreturn]] inline void fail(Err c, const std::string& msg) { throw TypedError(c, msg); }

inline const char* err_name(Err c) {
    switch (c) {
        case Err::Config: return "ConfigError";
        case Err::Evaluation: return "EvaluationError";
        case Err::Placement: return "PlacementError";
        case Err::Resolution: return "ResolutionError";
        case Err::RadiusCollision: return "RadiusCollision";
        case Err::Nondegeneracy: return "NondegeneracyViolation";
        case Err::GoodBoundaryUnattainable: return "GoodBoundaryUnattainable";
        case Err::Geometry: return "GeometryViolation";
        case Err::Invariant: return "InvariantViolation";
        case Err::Certificate: return "CertificateFailure";
        case Err::NumericWitness: return "NumericWitnessFailure";
        case Err::Verify: return "VerifyMismatch";
    }
    return "UnknownError";
}

// ---------------------------------------------------------------------------
// Small dense linear algebra (matrices up to 7x7). Row-major.

struct Mat {
    int n = 0, m = 0;
    std::array<double, 49> a{};

    Mat() = default;
    Mat(int rows, int cols) : n(rows), m(cols) {}
    double& at(int i, int j) { return a[i * m + j]; }
    double at(int i, int j) const { return a[i * m + j]; }
};

// Solve A x = b in place with partial pivoting. Returns false if singular.
bool solve_linear(Mat A, std::vector<double>& b);

// Jacobi eigen decomposition of a symmetric matrix. Eigenvalues sorted
// descending; eigenvectors returned as columns of V.
void symmetric_eigen(const Mat& S, std::vector<double>& eigvals, Mat& V);

}  // namespace levifill

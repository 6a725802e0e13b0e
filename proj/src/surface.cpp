#include "levifill/surface.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace levifill {

using json = nlohmann::json;

Vec Field::gradient(const Vec& z, double step) const {
    Vec g(z.dim);
    Vec zp = z, zm = z;
    for (int i = 0; i < z.dim; i++) {
        zp[i] = z[i] + step;
        zm[i] = z[i] - step;
        g[i] = (eval(zp) - eval(zm)) / (2 * step);
        zp[i] = z[i];
        zm[i] = z[i];
    }
    return g;
}

Mat Field::hessian(const Vec& z, double step) const {
    int d = z.dim;
    Mat H(d, d);
    double f0 = eval(z);
    Vec w = z;
    for (int i = 0; i < d; i++) {
        w[i] = z[i] + step;
        double fp = eval(w);
        w[i] = z[i] - step;
        double fm = eval(w);
        w[i] = z[i];
        H.at(i, i) = (fp - 2 * f0 + fm) / (step * step);
    }
    for (int i = 0; i < d; i++) {
        for (int j = i + 1; j < d; j++) {
            w[i] = z[i] + step;
            w[j] = z[j] + step;
            double fpp = eval(w);
            w[j] = z[j] - step;
            double fpm = eval(w);
            w[i] = z[i] - step;
            double fmm = eval(w);
            w[j] = z[j] + step;
            double fmp = eval(w);
            w[i] = z[i];
            w[j] = z[j];
            double v = (fpp - fpm - fmp + fmm) / (4 * step * step);
            H.at(i, j) = v;
            H.at(j, i) = v;
        }
    }
    return H;
}

namespace {

struct SphereField final : Field {
    Vec c;
    double rho;
    SphereField(const Vec& center, double r) : c(center), rho(r) {}
    double eval(const Vec& z) const override { return (z - c).norm() - rho; }
    Vec gradient(const Vec& z, double) const override {
        Vec d = z - c;
        double n = d.norm();
        if (n < 1e-12) return Vec(z.dim);
        return d * (1.0 / n);
    }
    Mat hessian(const Vec& z, double) const override {
        Vec d = z - c;
        double n = d.norm();
        int k = z.dim;
        Mat H(k, k);
        if (n < 1e-12) return H;
        Vec u = d * (1.0 / n);
        for (int i = 0; i < k; i++)
            for (int j = 0; j < k; j++)
                H.at(i, j) = ((i == j ? 1.0 : 0.0) - u[i] * u[j]) / n;
        return H;
    }
    bool analytic_derivatives() const override { return true; }
};

struct CapsuleField final : Field {
    Vec a, b;
    double rho;
    CapsuleField(const Vec& a_, const Vec& b_, double r) : a(a_), b(b_), rho(r) {}
    double eval(const Vec& z) const override {
        Vec ab = b - a, az = z - a;
        double t = az.dot(ab) / std::max(ab.norm2(), 1e-300);
        t = std::clamp(t, 0.0, 1.0);
        return (az - ab * t).norm() - rho;
    }
};

struct EllipsoidField final : Field {
    Vec c, s;
    EllipsoidField(const Vec& center, const Vec& semi) : c(center), s(semi) {}
    double q(const Vec& z) const {
        double v = 0;
        for (int i = 0; i < z.dim; i++) {
            double t = (z[i] - c[i]) / s[i];
            v += t * t;
        }
        return v;
    }
    double eval(const Vec& z) const override { return std::sqrt(q(z)) - 1.0; }
    Vec gradient(const Vec& z, double) const override {
        double r = std::sqrt(std::max(q(z), 1e-300));
        Vec g(z.dim);
        for (int i = 0; i < z.dim; i++) g[i] = (z[i] - c[i]) / (s[i] * s[i] * r);
        return g;
    }
    Mat hessian(const Vec& z, double) const override {
        int d = z.dim;
        double r = std::sqrt(std::max(q(z), 1e-300));
        Vec g = gradient(z, 0);
        Mat H(d, d);
        for (int i = 0; i < d; i++)
            for (int j = 0; j < d; j++) {
                double diag = (i == j) ? 1.0 / (s[i] * s[i] * r) : 0.0;
                H.at(i, j) = diag - g[i] * g[j] / r;
            }
        return H;
    }
    bool analytic_derivatives() const override { return true; }
};

// Stable smooth min: min(a,b) - k*log(1 + exp(-|a-b|/k)).
inline double smin(double a, double b, double k) {
    if (k <= 0) return std::min(a, b);
    double lo = std::min(a, b), d = std::fabs(a - b);
    return lo - k * std::log1p(std::exp(-d / k));
}
inline double smax(double a, double b, double k) { return -smin(-a, -b, k); }

struct BlendField final : Field {
    std::vector<BlendPart> parts;
    double k;
    BlendField(std::vector<BlendPart> p, double k_) : parts(std::move(p)), k(k_) {}
    double eval(const Vec& z) const override {
        double solid = 1e300;
        bool any = false;
        for (const auto& p : parts) {
            if (p.sign < 0) continue;
            double v = p.field->eval(z);
            solid = any ? smin(solid, v, k) : v;
            any = true;
        }
        if (!any) fail(Err::Config, "blend with no solid part");
        for (const auto& p : parts) {
            if (p.sign > 0) continue;
            solid = smax(solid, -p.field->eval(z), k);
        }
        return solid;
    }
};

struct TranslatedField final : Field {
    FieldPtr f;
    Vec t;
    TranslatedField(FieldPtr f_, const Vec& t_) : f(std::move(f_)), t(t_) {}
    double eval(const Vec& z) const override { return f->eval(z - t); }
    Vec gradient(const Vec& z, double step) const override { return f->gradient(z - t, step); }
    Mat hessian(const Vec& z, double step) const override { return f->hessian(z - t, step); }
    bool analytic_derivatives() const override { return f->analytic_derivatives(); }
};

struct BumpedField final : Field {
    FieldPtr f;
    std::vector<Bump> bumps;
    BumpedField(FieldPtr f_, std::vector<Bump> b) : f(std::move(f_)), bumps(std::move(b)) {}
    double eval(const Vec& z) const override {
        double v = f->eval(z);
        for (const auto& b : bumps) {
            double d2 = (z - b.center).norm2();
            v += b.amplitude * std::exp(-d2 / (b.width * b.width));
        }
        return v;
    }
};

}  // namespace

FieldPtr make_sphere(const Vec& c, double rho) { return std::make_shared<SphereField>(c, rho); }
FieldPtr make_capsule(const Vec& a, const Vec& b, double rho) {
    return std::make_shared<CapsuleField>(a, b, rho);
}
FieldPtr make_ellipsoid(const Vec& c, const Vec& s) {
    return std::make_shared<EllipsoidField>(c, s);
}
FieldPtr make_blend(std::vector<BlendPart> parts, double k) {
    return std::make_shared<BlendField>(std::move(parts), k);
}
FieldPtr make_translated(FieldPtr f, const Vec& t) {
    return std::make_shared<TranslatedField>(std::move(f), t);
}
FieldPtr make_bumped(FieldPtr f, std::vector<Bump> bumps) {
    return std::make_shared<BumpedField>(std::move(f), std::move(bumps));
}

// ---------------------------------------------------------------------------
// Expression language. Grammar (infix, standard precedence):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?
//   unary  := '-' unary | atom
//   atom   := number | 'pi' | var | func '(' expr (',' expr)* ')' | '(' expr ')'
//   var    := x1 .. x6
// Functions: sqrt exp log abs min max smin smax norm.

namespace {

struct ExprNode;
using NodePtr = std::unique_ptr<ExprNode>;

struct ExprNode {
    enum Kind { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Call } kind = Num;
    double value = 0;
    int var_index = 0;
    std::string func;
    std::vector<NodePtr> args;

    double eval(const Vec& z) const {
        switch (kind) {
            case Num: return value;
            case Var: return z[var_index];
            case Add: return args[0]->eval(z) + args[1]->eval(z);
            case Sub: return args[0]->eval(z) - args[1]->eval(z);
            case Mul: return args[0]->eval(z) * args[1]->eval(z);
            case Div: return args[0]->eval(z) / args[1]->eval(z);
            case Pow: return std::pow(args[0]->eval(z), args[1]->eval(z));
            case Neg: return -args[0]->eval(z);
            case Call: {
                if (func == "sqrt") return std::sqrt(args[0]->eval(z));
                if (func == "exp") return std::exp(args[0]->eval(z));
                if (func == "log") return std::log(args[0]->eval(z));
                if (func == "abs") return std::fabs(args[0]->eval(z));
                if (func == "min") return std::min(args[0]->eval(z), args[1]->eval(z));
                if (func == "max") return std::max(args[0]->eval(z), args[1]->eval(z));
                if (func == "smin")
                    return smin(args[0]->eval(z), args[1]->eval(z), args[2]->eval(z));
                if (func == "smax")
                    return smax(args[0]->eval(z), args[1]->eval(z), args[2]->eval(z));
                if (func == "norm") {
                    double s = 0;
                    for (const auto& a : args) {
                        double v = a->eval(z);
                        s += v * v;
                    }
                    return std::sqrt(s);
                }
                fail(Err::Config, "unknown function: " + func);
            }
        }
        return 0;
    }
};

struct Parser {
    const std::string& s;
    size_t i = 0;
    int dim;

    Parser(const std::string& text, int d) : s(text), dim(d) {}

    void skip() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) i++;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            i++;
            return true;
        }
        return false;
    }
    [[noreturn]] void err(const std::string& m) {
        fail(Err::Config, "expression parse error at offset " + std::to_string(i) + ": " + m);
    }

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (i != s.size()) err("trailing input");
        return e;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            skip();
            if (eat('+')) {
                lhs = binary(ExprNode::Add, std::move(lhs), term());
            } else if (eat('-')) {
                lhs = binary(ExprNode::Sub, std::move(lhs), term());
            } else {
                return lhs;
            }
        }
    }
    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            skip();
            if (eat('*')) {
                lhs = binary(ExprNode::Mul, std::move(lhs), factor());
            } else if (eat('/')) {
                lhs = binary(ExprNode::Div, std::move(lhs), factor());
            } else {
                return lhs;
            }
        }
    }
    NodePtr factor() {
        NodePtr base = unary();
        skip();
        if (eat('^')) return binary(ExprNode::Pow, std::move(base), factor());
        return base;
    }
    NodePtr unary() {
        skip();
        if (eat('-')) {
            auto n = std::make_unique<ExprNode>();
            n->kind = ExprNode::Neg;
            n->args.push_back(unary());
            return n;
        }
        return atom();
    }
    NodePtr atom() {
        skip();
        if (i >= s.size()) err("unexpected end");
        char c = s[i];
        if (std::isdigit((unsigned char)c) || c == '.') {
            size_t end;
            double v = std::stod(s.substr(i), &end);
            i += end;
            auto n = std::make_unique<ExprNode>();
            n->kind = ExprNode::Num;
            n->value = v;
            return n;
        }
        if (c == '(') {
            i++;
            NodePtr e = expr();
            if (!eat(')')) err("expected ')'");
            return e;
        }
        if (std::isalpha((unsigned char)c)) {
            size_t j = i;
            while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) j++;
            std::string id = s.substr(i, j - i);
            i = j;
            if (id == "pi") {
                auto n = std::make_unique<ExprNode>();
                n->kind = ExprNode::Num;
                n->value = M_PI;
                return n;
            }
            if (id.size() >= 2 && id[0] == 'x' && std::isdigit((unsigned char)id[1])) {
                int k = std::stoi(id.substr(1));
                if (k < 1 || k > dim) err("variable out of range: " + id);
                auto n = std::make_unique<ExprNode>();
                n->kind = ExprNode::Var;
                n->var_index = k - 1;
                return n;
            }
            if (!eat('(')) err("expected '(' after " + id);
            auto n = std::make_unique<ExprNode>();
            n->kind = ExprNode::Call;
            n->func = id;
            n->args.push_back(expr());
            while (eat(',')) n->args.push_back(expr());
            if (!eat(')')) err("expected ')'");
            check_arity(*n);
            return n;
        }
        err(std::string("unexpected character '") + c + "'");
    }
    NodePtr binary(ExprNode::Kind k, NodePtr a, NodePtr b) {
        auto n = std::make_unique<ExprNode>();
        n->kind = k;
        n->args.push_back(std::move(a));
        n->args.push_back(std::move(b));
        return n;
    }
    void check_arity(const ExprNode& n) {
        size_t want = 1, got = n.args.size();
        if (n.func == "min" || n.func == "max") want = 2;
        else if (n.func == "smin" || n.func == "smax") want = 3;
        else if (n.func == "norm") want = got >= 1 ? got : 1;
        else if (n.func != "sqrt" && n.func != "exp" && n.func != "log" && n.func != "abs")
            fail(Err::Config, "unknown function: " + n.func);
        if (got != want)
            fail(Err::Config, "function " + n.func + " expects " + std::to_string(want) +
                                  " argument(s)");
    }
};

struct ExprField final : Field {
    std::shared_ptr<ExprNode> root;
    double eval(const Vec& z) const override {
        double v = root->eval(z);
        if (!std::isfinite(v)) fail(Err::Evaluation, "expression evaluated to non-finite value");
        return v;
    }
};

}  // namespace

FieldPtr compile_expression(const std::string& text, int dim) {
    Parser p(text, dim);
    auto f = std::make_shared<ExprField>();
    f->root = std::shared_ptr<ExprNode>(p.parse().release());
    return f;
}

// ---------------------------------------------------------------------------
// SurfaceSpec

double SurfaceSpec::eval(const Vec& z) const { return field->eval(z); }
Vec SurfaceSpec::gradient(const Vec& z) const {
    Vec g = field->gradient(z, fd_step());
    for (int i = 0; i < g.dim; i++)
        if (!std::isfinite(g[i])) fail(Err::Evaluation, "non-finite gradient");
    return g;
}
Mat SurfaceSpec::hessian(const Vec& z) const {
    Mat H = field->hessian(z, fd_step());
    // Symmetrize; finite differences are symmetric already, analytic paths too,
    // this guards composed fields.
    for (int i = 0; i < H.n; i++)
        for (int j = i + 1; j < H.m; j++) {
            double v = 0.5 * (H.at(i, j) + H.at(j, i));
            H.at(i, j) = v;
            H.at(j, i) = v;
            if (!std::isfinite(v)) fail(Err::Evaluation, "non-finite hessian entry");
        }
    return H;
}

double estimate_near_radius(const Field& f, const Box& box, int probe_res) {
    // Scan grid columns for sign changes of F and take the smallest ||z||
    // among crossing midpoints.
    int d = box.dim();
    Vec ext = box.extent();
    double best = 1e300;
    std::vector<int> dims(d);
    long total = 1;
    for (int i = 0; i < d; i++) {
        dims[i] = std::max(2, (int)std::lround(probe_res * ext[i] / box.max_extent()));
        total *= dims[i];
    }
    std::vector<int> idx(d, 0);
    for (long cell = 0; cell < total; cell++) {
        Vec z(d);
        long rem = cell;
        for (int i = 0; i < d; i++) {
            idx[i] = rem % dims[i];
            rem /= dims[i];
            z[i] = box.lo[i] + (idx[i] + 0.5) * ext[i] / dims[i];
        }
        double v = f.eval(z);
        if (idx[0] + 1 < dims[0]) {
            Vec z2 = z;
            z2[0] += ext[0] / dims[0];
            double v2 = f.eval(z2);
            if ((v < 0) != (v2 < 0)) {
                Vec mid = (z + z2) * 0.5;
                best = std::min(best, mid.norm());
            }
        } else if (v < 0) {
            best = std::min(best, z.norm());
        }
    }
    return best;
}

namespace {

void normalize_distance(SurfaceSpec& spec) {
    // Translate along the near-point direction until dist(0, closure) is 3.
    for (int iter = 0; iter < 4; iter++) {
        double d0 = estimate_near_radius(*spec.field, spec.bounding_box, 40);
        if (d0 > 1e200) fail(Err::Config, "surface not found inside the bounding box");
        if (std::fabs(d0 - 3.0) < 0.2) return;
        // near direction: probe says where; our shapes sit on the x1 axis, so
        // find the argmin crossing direction by a coarse scan of band points.
        Vec u = axis_vec(spec.ambient_dim(), 0);
        double t = 3.0 - d0;
        spec.field = make_translated(spec.field, u * t);
        spec.bounding_box.lo += u * t;
        spec.bounding_box.hi += u * t;
        spec.normalization_shift += u * t;
    }
}

Box default_box_around(const std::vector<Vec>& centers, const std::vector<double>& radii,
                       int dim, double margin) {
    Box b;
    b.lo = Vec(dim);
    b.hi = Vec(dim);
    for (int i = 0; i < dim; i++) {
        b.lo[i] = 1e300;
        b.hi[i] = -1e300;
    }
    for (size_t k = 0; k < centers.size(); k++) {
        for (int i = 0; i < dim; i++) {
            b.lo[i] = std::min(b.lo[i], centers[k][i] - radii[k]);
            b.hi[i] = std::max(b.hi[i], centers[k][i] + radii[k]);
        }
    }
    return b.inflated(margin);
}

}  // namespace

SurfaceSpec builtin_offset_sphere(double D, double rho, double delta, int grid_res) {
    SurfaceSpec s;
    s.dim_n = 2;
    Vec c = axis_vec(4, 0, D);
    s.field = make_sphere(c, rho);
    s.bounding_box = default_box_around({c}, {rho}, 4, delta + 0.1);
    s.delta = delta;
    s.grid_res = grid_res;
    s.name = "offset_sphere";
    normalize_distance(s);
    return s;
}

SurfaceSpec builtin_ellipsoid(double D, const Vec& semi, double delta, int grid_res) {
    SurfaceSpec s;
    s.dim_n = semi.dim / 2;
    Vec c = axis_vec(semi.dim, 0, D);
    s.field = make_ellipsoid(c, semi);
    double rmax = 0;
    for (int i = 0; i < semi.dim; i++) rmax = std::max(rmax, semi[i]);
    s.bounding_box = default_box_around({c}, {rmax}, semi.dim, delta + 0.1);
    s.delta = delta;
    s.grid_res = grid_res;
    s.name = "ellipsoid";
    normalize_distance(s);
    return s;
}

SurfaceSpec builtin_dumbbell(double d1, double rho1, double d2, double rho2,
                             double bridge_offset, double bridge_rho, double blend_k,
                             double delta, int grid_res) {
    SurfaceSpec s;
    s.dim_n = 2;
    Vec c1 = axis_vec(4, 0, d1), c2 = axis_vec(4, 0, d2);
    // Bridge capsule parallel to the lobe axis at a transverse offset; the
    // endpoints sit inside the lobes so the junction rims land on the lobe
    // surfaces.
    Vec off = axis_vec(4, 1, bridge_offset);
    Vec a = c1 + off, b = c2 + off;
    s.field = make_blend({{make_sphere(c1, rho1), +1},
                          {make_sphere(c2, rho2), +1},
                          {make_capsule(a, b, bridge_rho), +1}},
                         blend_k);
    s.bounding_box =
        default_box_around({c1, c2, a, b}, {rho1, rho2, bridge_rho, bridge_rho}, 4, delta + 0.12);
    s.delta = delta;
    s.grid_res = grid_res;
    s.name = "dumbbell";
    normalize_distance(s);
    return s;
}

SurfaceSpec builtin_finger_sphere(double D, double rho, double finger_rho, double tip_height,
                                  double entry_offset, double blend_k, double delta,
                                  int grid_res) {
    SurfaceSpec s;
    s.dim_n = 2;
    Vec c = axis_vec(4, 0, D);
    // The finger starts below the ball and drills upward past the center; a
    // transverse offset and slight tilt keep the radius function Morse.
    Vec base = c + axis_vec(4, 0, -rho - 0.4) + axis_vec(4, 1, entry_offset);
    Vec tip = c + axis_vec(4, 0, tip_height) + axis_vec(4, 1, entry_offset * 0.7);
    s.field = make_blend({{make_sphere(c, rho), +1}, {make_capsule(base, tip, finger_rho), -1}},
                         blend_k);
    s.bounding_box = default_box_around({c}, {rho}, 4, delta + 0.1);
    s.delta = delta;
    s.grid_res = grid_res;
    s.name = "finger_sphere";
    normalize_distance(s);
    return s;
}

SurfaceSpec builtin_dented_sphere(double D, double rho, double dent_rho, double dent_offset,
                                  double dent_sink, double blend_k, double delta, int grid_res) {
    SurfaceSpec s;
    s.dim_n = 2;
    Vec c = axis_vec(4, 0, D);
    Vec dent_center = c + axis_vec(4, 0, rho + dent_rho - dent_sink) + axis_vec(4, 1, dent_offset);
    s.field =
        make_blend({{make_sphere(c, rho), +1}, {make_sphere(dent_center, dent_rho), -1}}, blend_k);
    s.bounding_box = default_box_around({c}, {rho}, 4, delta + 0.1);
    s.delta = delta;
    s.grid_res = grid_res;
    s.name = "dented_sphere";
    normalize_distance(s);
    return s;
}

SurfaceSpec builtin_twin_spheres(double D, double rho, double separation, double blend_k,
                                 double delta, int grid_res) {
    SurfaceSpec s;
    s.dim_n = 2;
    Vec c1 = axis_vec(4, 0, D) + axis_vec(4, 1, separation / 2);
    Vec c2 = axis_vec(4, 0, D) + axis_vec(4, 1, -separation / 2);
    Vec bridge_shift = axis_vec(4, 2, 0.25);
    s.field = make_blend({{make_sphere(c1, rho), +1},
                          {make_sphere(c2, rho), +1},
                          {make_capsule(c1 + bridge_shift, c2 + bridge_shift, rho * 0.35), +1}},
                         blend_k);
    s.bounding_box = default_box_around({c1, c2}, {rho, rho}, 4, delta + 0.35);
    s.delta = delta;
    s.grid_res = grid_res;
    s.name = "twin_spheres";
    normalize_distance(s);
    return s;
}

namespace {

Vec json_vec(const json& j, int dim) {
    if (!j.is_array() || (int)j.size() != dim)
        fail(Err::Config, "expected array of length " + std::to_string(dim));
    Vec v(dim);
    for (int i = 0; i < dim; i++) v[i] = j[i].get<double>();
    return v;
}

}  // namespace

SurfaceSpec load_spec_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail(Err::Config, std::string("spec JSON parse failure: ") + e.what());
    }
    double delta = j.value("delta", 0.1);
    int grid_res = j.value("grid_res", 96);
    if (delta <= 0 || grid_res < 8) fail(Err::Config, "delta must be > 0 and grid_res >= 8");

    if (j.contains("expr")) {
        int dim_n = j.value("n", 2);
        int d = 2 * dim_n;
        if (!j.contains("box")) fail(Err::Config, "expression specs need an explicit box");
        SurfaceSpec s;
        s.dim_n = dim_n;
        s.field = compile_expression(j["expr"].get<std::string>(), d);
        s.bounding_box.lo = json_vec(j["box"][0], d);
        s.bounding_box.hi = json_vec(j["box"][1], d);
        s.delta = delta;
        s.grid_res = grid_res;
        s.name = "expr";
        normalize_distance(s);
        return s;
    }

    if (!j.contains("shape")) fail(Err::Config, "spec needs either \"shape\" or \"expr\"");
    std::string shape = j["shape"].get<std::string>();
    json p = j.value("params", json::object());
    SurfaceSpec s;
    if (shape == "offset_sphere") {
        s = builtin_offset_sphere(p.value("center_dist", 4.0), p.value("rho", 1.0), delta,
                                  grid_res);
    } else if (shape == "ellipsoid") {
        Vec semi = p.contains("semi_axes") ? json_vec(p["semi_axes"], 4) : Vec{1.0, 0.8, 0.8, 0.7};
        s = builtin_ellipsoid(p.value("center_dist", 4.0), semi, delta, grid_res);
    } else if (shape == "dumbbell") {
        s = builtin_dumbbell(p.value("d1", 3.5), p.value("rho1", 1.0), p.value("d2", 5.6),
                             p.value("rho2", 0.95), p.value("bridge_offset", 0.8),
                             p.value("bridge_rho", 0.3), p.value("blend_k", 0.1), delta, grid_res);
    } else if (shape == "finger_sphere") {
        s = builtin_finger_sphere(p.value("center_dist", 4.0), p.value("rho", 1.0),
                                  p.value("finger_rho", 0.25), p.value("tip_height", 0.45),
                                  p.value("entry_offset", 0.35), p.value("blend_k", 0.08), delta,
                                  grid_res);
    } else if (shape == "dented_sphere") {
        s = builtin_dented_sphere(p.value("center_dist", 4.0), p.value("rho", 1.0),
                                  p.value("dent_rho", 0.45), p.value("dent_offset", 0.55),
                                  p.value("dent_sink", 0.25), p.value("blend_k", 0.07), delta,
                                  grid_res);
    } else if (shape == "twin_spheres") {
        s = builtin_twin_spheres(p.value("center_dist", 4.0), p.value("rho", 0.8),
                                 p.value("separation", 2.4), p.value("blend_k", 0.12), delta,
                                 grid_res);
    } else {
        fail(Err::Config, "unknown shape: " + shape);
    }
    if (j.contains("box")) {
        s.bounding_box.lo = json_vec(j["box"][0], s.ambient_dim());
        s.bounding_box.hi = json_vec(j["box"][1], s.ambient_dim());
    }
    return s;
}

SurfaceSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Err::Config, "cannot open spec file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_spec_json(ss.str());
}

}  // namespace levifill

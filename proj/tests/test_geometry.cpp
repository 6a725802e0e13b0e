#include <doctest.h>

#include <random>

#include "levifill/grid.hpp"
#include "levifill/surface.hpp"
#include "oracles.hpp"

using namespace levifill;

TEST_CASE("offset sphere eval: sign convention and arithmetic") {
    SurfaceSpec s = builtin_offset_sphere(4.0, 1.0, 0.1, 40);
    Vec p0 = axis_vec(4, 0, 4.0);
    CHECK(s.eval(p0) == doctest::Approx(-1.0));          // center is inside
    CHECK(s.eval(axis_vec(4, 0, 3.0)) == doctest::Approx(0.0));  // on the sphere
    // ||0 - p0|| - 1 = 3; the origin is outside the box, evaluate the field directly
    CHECK(s.field->eval(Vec(4)) == doctest::Approx(3.0));
}

TEST_CASE("gradients: analytic vs finite differences") {
    SurfaceSpec sph = builtin_offset_sphere(4.0, 1.0, 0.1, 40);
    // nearest point to the origin: unit radial direction away from p0
    Vec near = axis_vec(4, 0, 3.0);
    Vec g = sph.gradient(near);
    CHECK(g[0] == doctest::Approx(-1.0));
    CHECK(g[1] == doctest::Approx(0.0));

    FieldPtr quad = compile_expression("x1*x1+x2*x2+x3*x3+x4*x4-1", 4);
    Vec e1 = axis_vec(4, 0, 1.0);
    Vec gq = quad->gradient(e1, 1e-4);
    CHECK(gq[0] == doctest::Approx(2.0).epsilon(1e-6));

    SurfaceSpec db = builtin_dumbbell();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 100; trial++) {
        Vec z(4);
        for (int i = 0; i < 4; i++)
            z[i] = db.bounding_box.lo[i] + u(rng) * (db.bounding_box.hi[i] - db.bounding_box.lo[i]);
        Vec g1 = db.gradient(z);
        Vec g2 = oracles::fd_gradient(*db.field, z, 1e-5);
        for (int i = 0; i < 4; i++) CHECK(g1[i] == doctest::Approx(g2[i]).epsilon(1e-4));
    }
}

TEST_CASE("hessians: quadric, sphere closed form, finite differences") {
    FieldPtr quad = compile_expression("x1^2+x2^2+x3^2+x4^2-1", 4);
    Mat H = quad->hessian(axis_vec(4, 0, 0.3), 1e-3);
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++)
            CHECK(H.at(i, j) == doctest::Approx(i == j ? 2.0 : 0.0).epsilon(1e-5));

    // sphere Hessian (1/rho)(I - uu^T) on the surface, rho = 1
    SurfaceSpec sph = builtin_offset_sphere(4.0, 1.0, 0.1, 40);
    Vec p = axis_vec(4, 0, 3.0);
    Mat Hs = sph.hessian(p);
    Vec u = axis_vec(4, 0, -1.0);
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++)
            CHECK(Hs.at(i, j) == doctest::Approx((i == j ? 1.0 : 0.0) - u[i] * u[j]).epsilon(1e-9));

    SurfaceSpec db = builtin_dumbbell();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> un(0, 1);
    for (int trial = 0; trial < 25; trial++) {
        Vec z(4);
        for (int i = 0; i < 4; i++)
            z[i] = db.bounding_box.lo[i] + un(rng) * (db.bounding_box.hi[i] - db.bounding_box.lo[i]);
        Mat Hd = db.hessian(z);
        for (int i = 0; i < 4; i++)
            for (int j = i; j < 4; j++) {
                double o = oracles::fd_hessian_entry(*db.field, z, i, j, 2e-4);
                CHECK(Hd.at(i, j) == doctest::Approx(o).epsilon(1e-3).scale(1.0));
            }
    }
}

TEST_CASE("voxelize: inside volume converges to the 4-ball volume") {
    SurfaceSpec s = builtin_offset_sphere(4.0, 1.0, 0.1, 110);  // cell edge ~0.02
    VoxelGrid g = voxelize(s);
    size_t inside = 0;
    for (CellIndex c = 0; c < g.cell_count(); c++)
        if (g.inside(c)) inside++;
    double vol = inside * std::pow(g.spacing, 4);
    CHECK(vol == doctest::Approx(oracles::ball4_volume(1.0)).epsilon(0.02));
}

TEST_CASE("voxelize: sign consistency is exhaustive on a small grid") {
    SurfaceSpec s = builtin_offset_sphere(4.0, 1.0, 0.2, 24);
    VoxelGrid g = voxelize(s);
    for (CellIndex c = 0; c < g.cell_count(); c++)
        CHECK(g.inside(c) == (s.eval(g.center(c)) < 0));
}

TEST_CASE("voxelize: empty surface when F > 0 everywhere") {
    SurfaceSpec s;
    s.dim_n = 2;
    s.field = compile_expression("1+x1*x1", 4);
    s.bounding_box.lo = Vec{3, -1, -1, -1};
    s.bounding_box.hi = Vec{5, 1, 1, 1};
    s.delta = 0.2;
    s.grid_res = 24;
    VoxelGrid g = voxelize(s);
    for (CellIndex c = 0; c < g.cell_count(); c++) {
        CHECK(!g.inside(c));
        CHECK(!g.surf(c));
    }
}

TEST_CASE("voxelize: too coarse a grid is a configuration error") {
    SurfaceSpec s = builtin_offset_sphere(4.0, 1.0, 0.05, 24);  // cell 0.1 > delta/4
    CHECK_THROWS_AS(voxelize(s), TypedError);
    try {
        voxelize(s);
    } catch (const TypedError& e) {
        CHECK(e.cls == Err::Config);
    }
}

TEST_CASE("voxelize: band cells sit near an actual crossing (brute force, small grid)") {
    SurfaceSpec s = builtin_offset_sphere(4.0, 1.0, 0.2, 28);
    VoxelGrid g = voxelize(s);
    // collect cells whose neighborhood has a sign change (a crossing nearby)
    for (CellIndex c = 0; c < g.cell_count(); c++) {
        if (!g.near_m(c)) continue;
        // walk outward up to delta + one diagonal in the radial direction of F
        double dist = std::fabs(s.eval(g.center(c)));  // exact for the sphere SDF
        CHECK(dist <= s.delta * 1.2 + g.spacing);
    }
}

TEST_CASE("expression language: grammar and evaluation") {
    FieldPtr f = compile_expression("smin(norm(x1-4,x2,x3,x4)-1, x1-3.9, 0.1)", 4);
    CHECK(std::isfinite(f->eval(axis_vec(4, 0, 3.5))));
    FieldPtr g = compile_expression("2^3 + pi - pi", 4);
    CHECK(g->eval(Vec(4)) == doctest::Approx(8.0));
    CHECK_THROWS_AS(compile_expression("x9+1", 4), TypedError);
    CHECK_THROWS_AS(compile_expression("foo(x1)", 4), TypedError);
    CHECK_THROWS_AS(compile_expression("x1+", 4), TypedError);
}

TEST_CASE("spec JSON loading and normalization") {
    SurfaceSpec s = load_spec_json(R"({"shape":"offset_sphere","params":{"center_dist":4.0,"rho":1.0},"delta":0.1,"grid_res":48})");
    CHECK(s.name == "offset_sphere");
    // center distance 4, radius 1: near distance already 3, no shift
    CHECK(s.normalization_shift.norm() == doctest::Approx(0.0));

    SurfaceSpec t = load_spec_json(R"({"shape":"offset_sphere","params":{"center_dist":5.5,"rho":1.0},"delta":0.1,"grid_res":48})");
    // near distance 4.5 pulls back toward 3
    double d0 = estimate_near_radius(*t.field, t.bounding_box, 48);
    CHECK(d0 == doctest::Approx(3.0).epsilon(0.1));

    CHECK_THROWS_AS(load_spec_json("{"), TypedError);
    CHECK_THROWS_AS(load_spec_json(R"({"shape":"nonsense"})"), TypedError);
}

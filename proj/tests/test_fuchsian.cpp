#include "flipkit/fuchsian.hpp"
#include "flipkit/hyperbolic_tiling.hpp"
#include "flipkit/polygons.hpp"
#include "flipkit/sphere_star.hpp"

#include "corpus.hpp"
#include "frozen_values.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace flipkit;
using std::numbers::pi;

namespace {

const Vec4 kAdsGram(1, 1, -1, -1);

// Boost of the x1-x3 plane and rotation of the x1-x2 plane, written out.
Mat4 boost(double d) {
    Mat4 m = Mat4::Identity();
    m(0, 0) = m(2, 2) = std::cosh(d);
    m(0, 2) = m(2, 0) = std::sinh(d);
    return m;
}

Mat4 rotation(double t) {
    Mat4 m = Mat4::Identity();
    m(0, 0) = m(1, 1) = std::cos(t);
    m(0, 1) = -std::sin(t);
    m(1, 0) = std::sin(t);
    return m;
}

FuchsianConfig centre_config(double h) {
    FuchsianConfig c;
    c.group = genus2_group();
    c.base_points = {h2_from_klein(0, 0)};
    c.heights = {h};
    return c;
}

Eigen::VectorXd cone_at(FuchsianConfig c, const Eigen::VectorXd& h) {
    c.heights.assign(h.data(), h.data() + h.size());
    return cone_angles(orbit_hull(c));
}

// Columns d omega / d h_j by the 4-point stencil on the hull recomputed from scratch.
Eigen::MatrixXd fd_cone_jacobian(const FuchsianConfig& c) {
    const int n = static_cast<int>(c.heights.size());
    Eigen::VectorXd h0 = Eigen::Map<const Eigen::VectorXd>(c.heights.data(), n);
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = oracle::central_diff4(
                [&](double x) {
                    Eigen::VectorXd h = h0;
                    h[j] = x;
                    return cone_at(c, h)[i];
                },
                h0[j]);
    return out;
}

}  // namespace

TEST_CASE("fuchsian: octagon group") {
    FuchsianGroup g = genus2_group();
    CHECK(g.euler_characteristic() == -2);
    CHECK((surface_relation(g) - Mat2::Identity()).norm() < 1e-9);
    for (int k = 0; k < 4; ++k) {
        Mat4 want = rotation(k * pi / 4) * boost(2 * g.inradius) * rotation(-k * pi / 4);
        CHECK((g.generators[k] - want).norm() < 1e-12);
        CHECK(g.lifts[k].determinant() == doctest::Approx(1.0).epsilon(1e-14));
        // the side at angle k pi/4 + pi goes to the side at angle k pi/4
        auto mid = [&](double t) {
            return Vec4(std::sinh(g.inradius) * std::cos(t), std::sinh(g.inradius) * std::sin(t), std::cosh(g.inradius), 0);
        };
        CHECK((g.generators[k] * mid(k * pi / 4 + pi) - mid(k * pi / 4)).norm() < 1e-12);
        CHECK((g.generators[k] * Vec4(0, 0, 0, 1) - Vec4(0, 0, 0, 1)).norm() < 1e-14);
    }
    CHECK(fundamental_domain_area(g) == doctest::Approx(-2 * pi * g.euler_characteristic()).epsilon(1e-12));
    CHECK(in_fundamental_domain(g, h2_from_klein(0.3, -0.2)));
    CHECK_FALSE(in_fundamental_domain(g, h2_from_klein(0.95, 0.0)));
    auto e4 = orbit_elements(g, 4), e5 = orbit_elements(g, 5);
    CHECK(e4.size() < e5.size());
    CHECK((e4[0].action - Mat4::Identity()).norm() == 0);
    // distinct elements move the centre to distinct points
    for (std::size_t i = 0; i < e4.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            CHECK((e4[i].action.col(2) - e4[j].action.col(2)).norm() > 1e-3);
}

TEST_CASE("fuchsian: one orbit through the octagon centre") {
    const double hs[3] = {0.3, 0.8, 1.3};
    const double want[3] = {frozen::OCT_K_0_3, frozen::OCT_K_0_8, frozen::OCT_K_1_3};
    for (int i = 0; i < 3; ++i) {
        FuchsianSurface s = orbit_hull(centre_config(hs[i]));
        CHECK(curvatures(s)[0] == doctest::Approx(want[i]).epsilon(1e-11));
        CHECK(cone_angles_from_kernels(s)[0] == doctest::Approx(cone_angles(s)[0]).epsilon(1e-12));
        CHECK(s.faces.size() == 8);
        for (const auto& f : s.faces) CHECK(f.vertices.size() == 8);
        Eigen::MatrixXd a = jacobian(s);
        CHECK(a(0, 0) == doctest::Approx(fd_cone_jacobian(s.config)(0, 0)).epsilon(1e-6));
    }
}

TEST_CASE("fuchsian: one orbit, height against bisection") {
    FuchsianConfig c = centre_config(0.5);
    c.base_points = {h2_from_klein(0.12, -0.07)};
    auto k_of = [&](double h) {
        c.heights = {h};
        return curvatures(orbit_hull(c))[0];
    };
    // curvature decreases with the height
    CHECK(k_of(0.4) > k_of(0.6));
    for (double target : {-0.5, -3.0}) {
        double h = oracle::bisect([&](double x) { return k_of(x) - target; }, 0.05, 1.5, 1e-12);
        SolveResult r = solve_prescribed_curvature(c.group, c.base_points, Eigen::VectorXd::Constant(1, target));
        CHECK(r.heights[0] == doctest::Approx(h).epsilon(1e-8));
        CHECK(r.residual < 1e-8);
    }
}

TEST_CASE("fuchsian: Jacobian against finite differences") {
    std::mt19937_64 rng(501);
    for (int n : {2, 3}) {
        for (int rep = 0; rep < 3; ++rep) {
            FuchsianConfig c = corpus::random_fuchsian(rng, n);
            FuchsianSurface s = orbit_hull(c);
            Eigen::MatrixXd a = jacobian(s);
            Eigen::MatrixXd fd = fd_cone_jacobian(c);
            CHECK((a - fd).norm() <= 1e-5 * fd.norm());
            // diagonal dominance by columns, signs of the entries
            CHECK(column_dominance_margin(a).minCoeff() > 0);
            for (int i = 0; i < n; ++i) {
                CHECK(a(i, i) > 0);
                for (int j = 0; j < n; ++j)
                    if (i != j) CHECK(a(i, j) <= 0);
            }
            for (const auto& t : jacobian_terms(s)) {
                if (!t.true_edge) CHECK(t.value == 0);
                if (t.true_edge && !t.same_orbit && t.col != t.row) CHECK(t.value < 0);
            }
            CHECK((cone_angles_from_kernels(s) - cone_angles(s)).norm() < 1e-10);
            for (int x = 0; x < n; ++x) {
                StarGeometry g = star_geometry(s, x);
                double apex = 0;
                for (double d : g.apex_angle) apex += d;
                CHECK(apex == doctest::Approx(2 * pi).epsilon(1e-10));
                const std::size_t m = g.wedge.size();
                for (std::size_t k = 0; k < m; ++k) {
                    if (!s.stars[x].neighbours[k].true_edge) continue;
                    CHECK(convexity_sign(std::asinh(g.sinh_alpha_first[k]), std::asinh(g.sinh_alpha_second[(k + m - 1) % m])) ==
                          ConvexitySign::ConvexSide);
                }
            }
        }
    }
}

TEST_CASE("fuchsian: configurations out of convex position are rejected") {
    FuchsianConfig c;
    c.group = genus2_group();
    c.base_points = {h2_from_klein(0.1, 0.05), h2_from_klein(-0.2, 0.3)};
    c.heights = {0.5, 0.7};
    CHECK_THROWS_AS(orbit_hull(c), GeometryError);
    c.heights = {0.5, 0.6};
    CHECK_NOTHROW(orbit_hull(c));
    c.heights = {0.5, 1.7};
    CHECK_THROWS_AS(orbit_hull(c), GeometryError);
    c.heights = {0.5, 0.6};
    c.base_points[1] = h2_from_klein(0.95, 0.0);
    CHECK_THROWS_AS(orbit_hull(c), GeometryError);
    c.base_points[1] = Vec4(0.1, 0.2, 1.0, 0.0);
    CHECK_THROWS_AS(orbit_hull(c), GeometryError);
}

TEST_CASE("fuchsian: target curvatures outside the admissible set") {
    FuchsianGroup g = genus2_group();
    std::vector<Vec4> base = {h2_from_klein(0.1, 0.05), h2_from_klein(-0.2, 0.3)};
    CHECK_THROWS_AS(solve_prescribed_curvature(g, base, Eigen::Vector2d(-1.0, 0.2)), GeometryError);
    CHECK_THROWS_AS(solve_prescribed_curvature(g, base, Eigen::Vector2d(-1.0, 0.0)), GeometryError);
    CHECK_THROWS_AS(solve_prescribed_curvature(g, base, Eigen::Vector2d(-7.0, -6.0)), GeometryError);
    CHECK_THROWS_AS(solve_prescribed_curvature(g, base, Eigen::Vector3d(-1.0, -1.0, -1.0)), GeometryError);
}

TEST_CASE("fuchsian: prescribed curvature") {
    std::mt19937_64 rng(502);
    FuchsianConfig c = corpus::random_fuchsian(rng, 3);
    // targets realised by a known configuration
    Eigen::VectorXd want = curvatures(orbit_hull(c));
    SolveResult r = solve_prescribed_curvature(c.group, c.base_points, want);
    CHECK(r.residual < 1e-8);
    for (int i = 0; i < 3; ++i) CHECK(r.heights[i] == doctest::Approx(c.heights[i]).epsilon(1e-7));
    CHECK(std::isfinite(r.jacobian_condition));
    // a far target from several starts
    Eigen::Vector3d target(-0.4, -1.5, -2.5);
    std::vector<double> first;
    for (double h0 : {0.3, 0.7, 1.1}) {
        SolveOptions opt;
        opt.initial_heights = {h0, h0, h0};
        SolveResult s = solve_prescribed_curvature(c.group, c.base_points, target, opt);
        CHECK(s.residual < 1e-8);
        if (first.empty()) first = s.heights;
        for (int i = 0; i < 3; ++i) CHECK(s.heights[i] == doctest::Approx(first[i]).epsilon(1e-6));
    }
}

TEST_CASE("fuchsian: dual surface") {
    std::mt19937_64 rng(503);
    for (int n : {1, 2, 3}) {
        FuchsianConfig c = corpus::random_fuchsian(rng, n);
        FuchsianSurface s = orbit_hull(c);
        DualSurface d = minkowski_dual(s);
        Eigen::VectorXd k = curvatures(s);
        for (int i = 0; i < n; ++i) {
            CHECK(d.areas[i] == doctest::Approx(-k[i]).epsilon(1e-9));
            for (int f : d.faces[i]) CHECK(std::abs(inner(d.vertices[f], s.vertices[i], Signature::AdS)) < 1e-10);
            // the reflected ray meets the dual face plane orthogonally
            CHECK(std::abs(inner(d.reflected_ray_feet[i], s.vertices[i], Signature::AdS)) < 1e-12);
            CHECK((d.reflected_ray_directions[i] + s.vertices[i]).norm() < 1e-12);
        }
        auto back = dual_of_dual(d);
        for (int i = 0; i < n; ++i) CHECK((back[i] - canonical_ads_representative(s.vertices[i])).norm() < 1e-9);
    }
}

TEST_CASE("hyperbolic tiling: projections, areas and congruences") {
    std::mt19937_64 rng(504);
    for (int n : {1, 2, 3}) {
        FuchsianConfig c = corpus::random_fuchsian(rng, n);
        FuchsianSurface s = orbit_hull(c);
        Eigen::VectorXd k = curvatures(s);
        DualSurface d = minkowski_dual(s);
        for (ProjectionSide side : {ProjectionSide::Left, ProjectionSide::Right}) {
            HyperbolicTiling t = ads_project(s, side);
            CHECK(t.handedness == (side == ProjectionSide::Left ? Handedness::Right : Handedness::Left));
            ValidationReport r = validate_hyperbolic_tiling(t);
            CHECK_MESSAGE(r.ok, r.check << ": " << r.message);
            const double chi = c.group.euler_characteristic();
            CHECK(white_area(t) == doctest::Approx(k.sum() - 2 * pi * chi).epsilon(1e-9));
            CHECK(white_area(t) + black_area(t) == doctest::Approx(-2 * pi * chi).epsilon(1e-9));
            for (int i = 0; i < n; ++i) {
                std::vector<Vec4> dual_face;
                for (int f : d.faces[i]) dual_face.push_back(d.vertices[f]);
                CHECK(spectra_match(h_face_spectrum(t, i), hyperbolic_spectrum(dual_face, kAdsGram), 1e-9, true));
            }
            for (std::size_t f = 0; f < s.faces.size(); ++f) {
                std::vector<Vec4> pts;
                for (const auto& l : s.faces[f].vertices) pts.push_back(s.point(l));
                CHECK(spectra_match(h_face_spectrum(t, n + static_cast<int>(f)), hyperbolic_spectrum(pts, kAdsGram), 1e-9, true));
            }
            HyperbolicReconstruction rec = reconstruct_surface(t);
            CHECK(rec.nullity == 1);
            for (int i = 0; i < n; ++i) CHECK((rec.vertices[i] - s.vertices[i]).norm() < 1e-9);
        }
    }
}

TEST_CASE("hyperbolic tiling: flip") {
    std::mt19937_64 rng(505);
    for (int n : {1, 2, 3}) {
        FuchsianConfig c = corpus::random_fuchsian(rng, n);
        FuchsianSurface s = orbit_hull(c);
        for (ProjectionSide side : {ProjectionSide::Left, ProjectionSide::Right}) {
            HyperbolicTiling t = ads_project(s, side);
            HyperbolicTiling f = hyperbolic_flip(t);
            CHECK(f.handedness == opposite(t.handedness));
            ValidationReport r = validate_hyperbolic_tiling(f);
            CHECK_MESSAGE(r.ok, r.check << ": " << r.message);
            CHECK(hyperbolic_tilings_equal(hyperbolic_flip(f), t, 1e-7));
            CHECK_FALSE(hyperbolic_tilings_equal(f, t, 1e-7));
            // the flip keeps every face up to isometry
            for (std::size_t face = 0; face < t.faces.size(); ++face)
                CHECK(spectra_match(h_face_spectrum(f, static_cast<int>(face)), h_face_spectrum(t, static_cast<int>(face)), 1e-8, true));
            // and is the other projection of the same surface
            HyperbolicTiling other = ads_project(s, side == ProjectionSide::Left ? ProjectionSide::Right : ProjectionSide::Left);
            CHECK(hyperbolic_tilings_equal(f, other, 1e-8));
        }
    }
}

TEST_CASE("hyperbolic tiling: validation catches damage") {
    std::mt19937_64 rng(506);
    FuchsianSurface s = orbit_hull(corpus::random_fuchsian(rng, 2));
    HyperbolicTiling t = ads_project(s, ProjectionSide::Left);
    REQUIRE(validate_hyperbolic_tiling(t).ok);
    HyperbolicTiling wrong = t;
    wrong.handedness = opposite(t.handedness);
    CHECK(validate_hyperbolic_tiling(wrong).check == "handedness");
    HyperbolicTiling moved = t;
    Vec4& p = moved.vertices[0].point;
    p = h2_from_klein(klein(p)[0] + 1e-3, klein(p)[1]);
    CHECK_FALSE(validate_hyperbolic_tiling(moved).ok);
}

TEST_CASE("sphere star Jacobian against finite differences") {
    std::mt19937_64 rng(507);
    const Vec4 e(1, 0, 0, 0);
    int tested = 0;
    while (tested < 8) {
        ConvexPolyhedron p = corpus::random_polyhedron(rng, 6, 10, 0.05);
        bool triangles = true;
        for (const auto& f : p.faces) triangles = triangles && f.size() == 3;
        bool interior = true;
        for (const auto& a : p.poles) interior = interior && a.dot(e) > 0.05;
        if (!triangles || !interior) continue;
        ++tested;
        Eigen::MatrixXd a = sph_star_jacobian(p, e);
        Eigen::VectorXd h = star_heights(p, e);
        const int n = static_cast<int>(p.vertices.size());
        Eigen::MatrixXd fd(n, n);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i)
                fd(i, j) = oracle::central_diff4(
                    [&](double x) {
                        Eigen::VectorXd hh = h;
                        hh[j] = x;
                        ConvexPolyhedron q = move_on_rays(p, e, hh);
                        return cone_angle(q, i);
                    },
                    h[j]);
        }
        CHECK((a - fd).norm() <= 1e-6 * fd.norm());
        // neighbours contribute positively; the diagonal is the transposed sum
        for (const auto& ed : edges(p)) {
            CHECK(a(ed.a, ed.b) > 0);
            CHECK(a(ed.b, ed.a) > 0);
        }
        for (int x = 0; x < n; ++x) {
            double sum = 0;
            for (int y = 0; y < n; ++y)
                if (y != x && a(y, x) != 0) sum += std::cos(arc_length(p.vertices[x], p.vertices[y])) * a(y, x);
            CHECK(a(x, x) == doctest::Approx(-sum).epsilon(1e-9));
        }
    }
}

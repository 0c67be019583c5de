#include "flipkit/tiling.hpp"

#include "corpus.hpp"

#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

using namespace flipkit;
using std::numbers::pi;

namespace {

std::vector<int> faces_of(const SphericalTiling& t, Color c) {
    std::vector<int> out;
    for (std::size_t f = 0; f < t.faces.size(); ++f)
        if (t.faces[f].color == c) out.push_back(static_cast<int>(f));
    return out;
}

std::vector<Vec3> true_polygon(const SphericalTiling& t, int f) {
    std::vector<Vec3> out;
    for (int i : true_corners(t, f)) out.push_back(t.vertices[t.faces[f].vertices[i]]);
    return out;
}

std::vector<double> sorted_areas(const SphericalTiling& t, Color c) {
    std::vector<double> out;
    for (int f : faces_of(t, c)) out.push_back(face_area(t, f));
    std::sort(out.begin(), out.end());
    return out;
}

bool every_edge_follows(const SphericalTiling& t, Handedness h) {
    for (const auto& e : t.edges)
        for (const auto& s : e.segments) {
            bool black = t.faces[s.face].color == Color::Black;
            bool forward = s.position == Position::Forward;
            bool right = s.side == Side::Right;
            bool expect = h == Handedness::Right ? (black == right) : (black != right);
            if (forward != expect) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("tiling: projection of a tetrahedron") {
    ConvexPolyhedron p = hull(corpus::tetrahedron_points());
    for (ProjectionSide side : {ProjectionSide::Left, ProjectionSide::Right}) {
        SphericalTiling t = project(p, side);
        CHECK(faces_of(t, Color::Black).size() == 4);
        CHECK(faces_of(t, Color::White).size() == 4);
        CHECK(t.edges.size() == 6);
        CHECK(t.handedness == (side == ProjectionSide::Left ? Handedness::Right : Handedness::Left));
        ValidationReport r = validate_tiling(t);
        CHECK_MESSAGE(r.ok, r.check << ": " << r.message);
        double total = 0;
        for (std::size_t f = 0; f < t.faces.size(); ++f) total += face_area(t, static_cast<int>(f));
        CHECK(total == doctest::Approx(4 * pi).epsilon(1e-12));
    }
}

TEST_CASE("tiling: projection matches faces, links and dihedral gaps") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 10; ++k) {
        ConvexPolyhedron p = corpus::random_polyhedron(rng);
        for (ProjectionSide side : {ProjectionSide::Left, ProjectionSide::Right}) {
            SphericalTiling t = project(p, side);
            ValidationReport r = validate_tiling(t);
            REQUIRE_MESSAGE(r.ok, r.check << ": " << r.message);
            const int nv = static_cast<int>(p.vertices.size());
            for (std::size_t f = 0; f < p.faces.size(); ++f)
                CHECK(spectra_match(face_spectrum(t, nv + static_cast<int>(f)), spherical_spectrum(face_points(p, static_cast<int>(f))),
                                    1e-9, false));
            for (int v = 0; v < nv; ++v) {
                CHECK(spectra_match(face_spectrum(t, v), spherical_spectrum(link(p, v)), 1e-9, false));
            }
            // the white gap along each edge is the exterior dihedral angle
            auto pe = edges(p);
            for (std::size_t e = 0; e < pe.size(); ++e) {
                double black_len = 0;
                for (const auto& s : t.edges[e].segments)
                    if (t.faces[s.face].color == Color::Black) black_len = s.t1 - s.t0;
                CHECK(black_len == doctest::Approx(exterior_dihedral(p, pe[e])).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("tiling: validation catches perturbations and label swaps") {
    std::mt19937_64 rng(32);
    ConvexPolyhedron p = corpus::random_polyhedron(rng);
    SphericalTiling t = project(p, ProjectionSide::Left);
    REQUIRE(validate_tiling(t).ok);

    SphericalTiling moved = t;
    Vec3 d = moved.vertices[0].unitOrthogonal();
    moved.vertices[0] = (moved.vertices[0] + 1e-3 * d).normalized();
    CHECK_FALSE(validate_tiling(moved).ok);

    SphericalTiling swapped = t;
    for (auto& s : swapped.edges[0].segments)
        s.position = s.position == Position::Forward ? Position::Backward : Position::Forward;
    ValidationReport r = validate_tiling(swapped);
    CHECK_FALSE(r.ok);
    CHECK(r.check == "handedness");

    SphericalTiling wrong_hand = t;
    wrong_hand.handedness = opposite(t.handedness);
    CHECK(validate_tiling(wrong_hand).check == "handedness");
}

TEST_CASE("tiling: reconstruction and flip") {
    std::mt19937_64 rng(33);
    for (int k = 0; k < 10; ++k) {
        ConvexPolyhedron p = corpus::random_polyhedron(rng);
        for (ProjectionSide side : {ProjectionSide::Left, ProjectionSide::Right}) {
            SphericalTiling t = project(p, side);
            ConvexPolyhedron q = white_polyhedron(t);
            CHECK(congruent(p, q, 1e-8));
            // project back on the same side: the same tiling
            CHECK(tilings_congruent(project(q, side), t, 1e-8));

            SphericalTiling f = flip(t);
            CHECK(f.handedness == opposite(t.handedness));
            ValidationReport r = validate_tiling(f);
            CHECK_MESSAGE(r.ok, r.check << ": " << r.message);
            CHECK(every_edge_follows(f, f.handedness));
            auto a = sorted_areas(t, Color::Black), b = sorted_areas(f, Color::Black);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
            CHECK(tilings_congruent(flip(f), t, 1e-7));
            CHECK_FALSE(tilings_congruent(f, t, 1e-7));
        }
    }
}

TEST_CASE("tiling: recoloring") {
    std::mt19937_64 rng(34);
    ConvexPolyhedron p = corpus::random_polyhedron(rng);
    SphericalTiling t = project(p, ProjectionSide::Left);
    SphericalTiling r = recolor(t);
    CHECK(r.handedness == opposite(t.handedness));
    CHECK(validate_tiling(r).ok);
    SphericalTiling rr = recolor(r);
    CHECK(rr.handedness == t.handedness);
    for (std::size_t f = 0; f < t.faces.size(); ++f) CHECK(rr.faces[f].color == t.faces[f].color);
    auto wb = sorted_areas(t, Color::White), bw = sorted_areas(r, Color::Black);
    REQUIRE(wb.size() == bw.size());
    for (std::size_t i = 0; i < wb.size(); ++i) CHECK(wb[i] == doctest::Approx(bw[i]));
    // black polyhedron = white polyhedron of the recolored tiling, and it is
    // the polar dual of the white polyhedron
    ConvexPolyhedron pb = black_polyhedron(t);
    CHECK(congruent(pb, white_polyhedron(r), 1e-10));
    ConvexPolyhedron pw = white_polyhedron(t);
    ConvexPolyhedron dual;
    bool have_dual = true;
    try {
        dual = polar_dual(pw);
    } catch (const GeometryError&) {
        have_dual = false;
    }
    if (have_dual) CHECK(congruent(pb, dual, 1e-8));
}

TEST_CASE("tiling: cone metrics") {
    std::mt19937_64 rng(35);
    for (int k = 0; k < 5; ++k) {
        ConvexPolyhedron p = corpus::random_polyhedron(rng);
        SphericalTiling t = project(p, ProjectionSide::Right);
        ConeMetric bm = black_metric(t);
        CHECK(bm.curvature == 1);
        CHECK(bm.cone_faces.size() == p.faces.size());
        double curvature = 0;
        for (std::size_t i = 0; i < bm.cone_faces.size(); ++i) {
            double area = face_area(t, bm.cone_faces[i]);
            CHECK(bm.cone_angles[i] == doctest::Approx(2 * pi - area).epsilon(1e-10));
            CHECK(bm.cone_angles[i] < 2 * pi);
            curvature += 2 * pi - bm.cone_angles[i];
        }
        double black_area = 0;
        for (int f : bm.glued_faces) black_area += face_area(t, f);
        CHECK(black_area + curvature == doctest::Approx(4 * pi).epsilon(1e-10));
        // white metric: cone angles are those of the boundary of P
        ConeMetric wm = white_metric(t);
        for (std::size_t i = 0; i < wm.cone_faces.size(); ++i)
            CHECK(wm.cone_angles[i] == doctest::Approx(cone_angle(p, wm.cone_faces[i])).epsilon(1e-10));
    }
}

TEST_CASE("tiling: antipodal tilings") {
    std::vector<Vec3> tri = {Vec3(0.3, 0.1, 1).normalized(), Vec3(-0.2, 0.4, 1).normalized(), Vec3(-0.1, -0.4, 1).normalized()};
    for (Handedness h : {Handedness::Left, Handedness::Right}) {
        SphericalTiling t = make_antipodal_tiling(tri, h);
        CHECK(t.handedness == h);
        ValidationReport r = validate_tiling(t);
        CHECK_MESSAGE(r.ok, r.check << ": " << r.message);
        CHECK(faces_of(t, Color::Black).size() == 2);
        CHECK(faces_of(t, Color::White).size() == 3);
        CHECK(t.edges.size() == 3);
        CHECK(white_polyhedron(t).degeneracy == Degeneracy::Hosohedron);
        CHECK_THROWS_AS(flip(t), UnsupportedError);
        // the white faces are digons of the polygon's exterior angles
        std::vector<double> got, want;
        for (int f : faces_of(t, Color::White)) got.push_back(face_area(t, f));
        for (std::size_t i = 0; i < 3; ++i)
            want.push_back(2 * (pi - corner_angle(tri[i], tri[(i + 2) % 3], tri[(i + 1) % 3])));
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        for (std::size_t i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
        for (int f : faces_of(t, Color::White)) CHECK(true_polygon(t, f).size() == 2);
    }
}

TEST_CASE("tiling: two great circles") {
    for (Handedness h : {Handedness::Left, Handedness::Right}) {
        SphericalTiling t = make_lune_tiling(1.1, h);
        ValidationReport r = validate_tiling(t);
        CHECK_MESSAGE(r.ok, r.check << ": " << r.message);
        CHECK(t.handedness == h);
        CHECK(t.faces.size() == 4);
        CHECK(t.edges.size() == 2);
        CHECK(white_polyhedron(t).degeneracy != Degeneracy::None);
    }
}

TEST_CASE("tiling: corrupted edge length breaks the development") {
    std::mt19937_64 rng(36);
    ConvexPolyhedron p = corpus::random_polyhedron(rng);
    SphericalTiling t = project(p, ProjectionSide::Left);
    SphericalTiling bad = t;
    bad.edges[0].length += 1e-3;
    CHECK_THROWS_AS(white_polyhedron(bad), GeometryError);
}

TEST_CASE("tiling: canonical order keeps the geometry") {
    std::mt19937_64 rng(37);
    ConvexPolyhedron p = corpus::random_polyhedron(rng);
    SphericalTiling t = project(p, ProjectionSide::Left);
    SphericalTiling c = canonical_order(t);
    CHECK(validate_tiling(c).ok);
    CHECK(tilings_congruent(c, t, 1e-12));
    for (std::size_t f = 1; f < c.faces.size(); ++f)
        CHECK(!(c.faces[f].color == Color::Black && c.faces[f - 1].color == Color::White));
}

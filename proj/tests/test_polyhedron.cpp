#include "flipkit/polyhedron.hpp"

#include "corpus.hpp"

#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

using namespace flipkit;
using std::numbers::pi;

namespace {

std::size_t edge_count(const ConvexPolyhedron& p) { return edges(p).size(); }

// Null vector of three vectors of R^4 (generalised cross product).
Vec4 null_vector(const Vec4& a, const Vec4& b, const Vec4& c) {
    Eigen::Matrix<double, 3, 4> m;
    m.row(0) = a.transpose();
    m.row(1) = b.transpose();
    m.row(2) = c.transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(m, Eigen::ComputeFullV);
    return svd.matrixV().col(3);
}

// Vertices of {y : <x_i, y> >= 0} by trying every triple of constraints.
std::vector<Vec4> brute_force_dual_vertices(const std::vector<Vec4>& xs) {
    std::vector<Vec4> out;
    const std::size_t n = xs.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Vec4 y = null_vector(xs[i], xs[j], xs[k]).normalized();
                for (int sign : {1, -1}) {
                    Vec4 z = sign * y;
                    bool inside = true;
                    for (const auto& x : xs)
                        if (x.dot(z) < -1e-12) inside = false;
                    if (!inside) continue;
                    bool dup = false;
                    for (const auto& w : out)
                        if ((w - z).norm() < 1e-9) dup = true;
                    if (!dup) out.push_back(z);
                }
            }
    return out;
}

// Barycentric coordinates of q in the tetrahedron (a, b, c, d).
Eigen::Vector4d barycentric(const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    Eigen::Matrix4d m;
    m << a[0], b[0], c[0], d[0], a[1], b[1], c[1], d[1], a[2], b[2], c[2], d[2], 1, 1, 1, 1;
    return m.colPivHouseholderQr().solve(Eigen::Vector4d(q[0], q[1], q[2], 1));
}

}  // namespace

TEST_CASE("polyhedron: regular tetrahedron") {
    ConvexPolyhedron p = hull(corpus::tetrahedron_points());
    CHECK(p.vertices.size() == 4);
    CHECK(p.faces.size() == 4);
    CHECK(edge_count(p) == 6);
    std::vector<double> dihedrals;
    for (const auto& e : edges(p)) dihedrals.push_back(exterior_dihedral(p, e));
    for (double d : dihedrals) CHECK(d == doctest::Approx(dihedrals[0]).epsilon(1e-12));
    for (int v = 0; v < 4; ++v) CHECK(link(p, v).size() == 3);
}

TEST_CASE("polyhedron: interior point is dropped") {
    auto pts = corpus::tetrahedron_points();
    Vec4 inner_pt = Vec4(1.0, 0.05, -0.02, 0.03).normalized();
    // chart oracle: the extra point has positive barycentric coordinates
    Eigen::Vector4d bc = barycentric(chart(inner_pt), chart(pts[0]), chart(pts[1]), chart(pts[2]), chart(pts[3]));
    REQUIRE(bc.minCoeff() > 0);
    pts.insert(pts.begin() + 2, inner_pt);
    ConvexPolyhedron p = hull(pts);
    CHECK(p.vertices.size() == 4);
    for (const auto& v : p.vertices) CHECK((v - inner_pt).norm() > 1e-3);
}

TEST_CASE("polyhedron: bad input is rejected") {
    auto pts = corpus::tetrahedron_points();
    pts[0] = Vec4(0, 1, 0, 0);
    CHECK_THROWS_AS(hull(pts), GeometryError);
    // coplanar in the chart
    std::vector<Vec4> flat = {Vec4(1, 0, 0, 0), Vec4(1, 1, 0, 0).normalized(), Vec4(1, 0, 1, 0).normalized(),
                              Vec4(1, 1, 1, 0).normalized()};
    CHECK_THROWS_AS(hull(flat), GeometryError);
}

TEST_CASE("polyhedron: random hulls satisfy Euler and are idempotent") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        ConvexPolyhedron p = corpus::random_polyhedron(rng, 10, 10);
        const long v = static_cast<long>(p.vertices.size()), e = static_cast<long>(edge_count(p)),
                   f = static_cast<long>(p.faces.size());
        CHECK(v - e + f == 2);
        ConvexPolyhedron q = hull(p.vertices);
        CHECK(q.vertices.size() == p.vertices.size());
        CHECK(q.faces.size() == p.faces.size());
        CHECK(congruent(p, q, 1e-12));
    }
}

TEST_CASE("polyhedron: polar duality") {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 20; ++k) {
        ConvexPolyhedron p = corpus::random_polyhedron(rng);
        ConvexPolyhedron d;
        try {
            d = polar_dual(p);
        } catch (const GeometryError&) {
            continue;  // a pole outside the hemisphere
        }
        ConvexPolyhedron dd = polar_dual(d);
        REQUIRE(dd.vertices.size() == p.vertices.size());
        for (std::size_t i = 0; i < p.vertices.size(); ++i) CHECK((dd.vertices[i] - p.vertices[i]).norm() < 1e-9);
        // exterior dihedral of P = length of the dual edge
        for (const auto& e : edges(p)) {
            double len = arc_length(d.vertices[e.left_face], d.vertices[e.right_face]);
            CHECK(exterior_dihedral(p, e) == doctest::Approx(len).epsilon(1e-12));
        }
        // face of P* dual to x is congruent to the link of x
        for (std::size_t v = 0; v < p.vertices.size(); ++v) {
            auto lk = link(p, static_cast<int>(v));
            auto face = face_points(d, static_cast<int>(v));
            CHECK(spectra_match(spherical_spectrum(lk), spherical_spectrum(face), 1e-9, true));
        }
    }
}

TEST_CASE("polyhedron: dual of the tetrahedron against half-space intersection") {
    ConvexPolyhedron p = hull(corpus::tetrahedron_points());
    ConvexPolyhedron d = polar_dual(p);
    auto bf = brute_force_dual_vertices(p.vertices);
    REQUIRE(bf.size() == d.vertices.size());
    for (const auto& v : d.vertices) {
        double best = 1e9;
        for (const auto& w : bf) best = std::min(best, (v - w).norm());
        CHECK(best < 1e-12);
    }
    CHECK(d.faces.size() == 4);
    for (const auto& f : d.faces) CHECK(f.size() == 3);
}

TEST_CASE("polyhedron: links and areas") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 20; ++k) {
        ConvexPolyhedron p = corpus::random_polyhedron(rng);
        double total = 0;
        for (std::size_t f = 0; f < p.faces.size(); ++f) total += face_area(p, static_cast<int>(f));
        for (std::size_t v = 0; v < p.vertices.size(); ++v) {
            auto lk = link(p, static_cast<int>(v));
            double lk_area = spherical_polygon_area(lk);
            total += lk_area;
            CHECK(lk_area == doctest::Approx(2 * pi - cone_angle(p, static_cast<int>(v))).epsilon(1e-10));
            // link corners are pi minus the face angles, link sides the dihedrals
            auto around = faces_around(p, static_cast<int>(v));
            PolygonSpectrum s = spherical_spectrum(lk);
            std::vector<double> face_angles;
            for (int f : around) {
                const auto& cyc = p.faces[f];
                const std::size_t m = cyc.size();
                std::size_t i = std::find(cyc.begin(), cyc.end(), static_cast<int>(v)) - cyc.begin();
                face_angles.push_back(corner_angle(p.vertices[v], p.vertices[cyc[(i + m - 1) % m]], p.vertices[cyc[(i + 1) % m]]));
            }
            std::vector<double> lhs, rhs;
            for (double a : s.angles) lhs.push_back(a);
            for (double a : face_angles) rhs.push_back(pi - a);
            std::sort(lhs.begin(), lhs.end());
            std::sort(rhs.begin(), rhs.end());
            for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-10));
        }
        CHECK(total == doctest::Approx(4 * pi).epsilon(1e-10));
    }
}

TEST_CASE("polyhedron: dihedral angle against the chart") {
    // Tetrahedron near e: the chart is almost isometric and the angle between
    // Euclidean face normals approaches the exterior dihedral angle.
    const double r = 1e-4;
    ConvexPolyhedron p = hull(corpus::tetrahedron_points(r));
    for (const auto& e : edges(p)) {
        auto normal = [&](int f) {
            const auto& c = p.faces[f];
            Vec3 a = chart(p.vertices[c[0]]), b = chart(p.vertices[c[1]]), d = chart(p.vertices[c[2]]);
            return Vec3((b - a).cross(d - a).normalized());
        };
        CHECK(exterior_dihedral(p, e) == doctest::Approx(vector_angle(normal(e.left_face), normal(e.right_face))).epsilon(1e-6));
    }
    CHECK(exterior_dihedral(p, edges(p)[0]) == doctest::Approx(std::acos(-1.0 / 3.0)).epsilon(1e-6));
}

TEST_CASE("polygons: areas") {
    std::vector<Vec3> octant = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    CHECK(spherical_polygon_area(octant) == doctest::Approx(pi / 2));
    // a digon of angle a, split by its midpoints into a flat-cornered 4-cycle
    const double a = 0.7;
    std::vector<Vec3> digon = {Vec3::UnitZ(), Vec3::UnitX(), -Vec3::UnitZ(), Vec3(std::cos(a), std::sin(a), 0)};
    CHECK(spherical_polygon_area(digon) == doctest::Approx(2 * a));
    // random convex polygon against a fan of triangles measured by the solid angle formula
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0, 2 * pi);
    for (int k = 0; k < 20; ++k) {
        std::vector<double> th;
        for (int i = 0; i < 7; ++i) th.push_back(u(rng));
        std::sort(th.begin(), th.end());
        std::vector<Vec3> poly;
        for (double t : th) poly.push_back(Vec3(0.6 * std::cos(t), 0.6 * std::sin(t), 1.0).normalized());
        double fan = 0;
        for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
            const Vec3 &x = poly[0], &y = poly[i], &z = poly[i + 1];
            fan += 2 * std::atan2(x.dot(y.cross(z)), 1 + x.dot(y) + y.dot(z) + z.dot(x));
        }
        CHECK(spherical_polygon_area(poly) == doctest::Approx(fan).epsilon(1e-12));
    }
}

#include "flipkit/forms.hpp"
#include "flipkit/tolerances.hpp"

#include <doctest.h>

#include <complex>
#include <numbers>
#include <random>

using namespace flipkit;

namespace {

Vec4 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec4 v(g(rng), g(rng), g(rng), g(rng));
    return v.normalized();
}

// Random point of AdS_3: (cosh t u, sinh t w) with u, w unit in the two 2-planes.
Vec4 random_ads(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), len(-1.5, 1.5);
    double a = ang(rng), b = ang(rng), t = len(rng);
    return Vec4(std::sinh(t) * std::cos(a), std::sinh(t) * std::sin(a), std::cosh(t) * std::cos(b), std::cosh(t) * std::sin(b));
}

// 2x2 complex product written out entrywise.
Vec4 quaternion_oracle(const Vec4& x, const Vec4& y) {
    using C = std::complex<double>;
    C a(x[0], x[1]), b(x[2], x[3]), c(y[0], y[1]), d(y[2], y[3]);
    // rows of [[a, b], [-conj b, conj a]] times [[c, d], [-conj d, conj c]]
    C tl = a * c + b * (-std::conj(d));
    C tr = a * d + b * std::conj(c);
    return Vec4(tl.real(), tl.imag(), tr.real(), tr.imag());
}

}  // namespace

TEST_CASE("forms: signatures on basis vectors and against a direct sum") {
    CHECK(inner(Vec4(1, 0, 0, 0), Vec4(1, 0, 0, 0), Signature::Sphere) == 1.0);
    CHECK(inner(Vec4(0, 0, 0, 1), Vec4(0, 0, 0, 1), Signature::AdS) == -1.0);
    CHECK(inner(Vec4(0, 0, 0, 1), Vec4(0, 0, 0, 1), Signature::Mink31) == -1.0);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int k = 0; k < 50; ++k) {
        Vec4 u(g(rng), g(rng), g(rng), g(rng)), v(g(rng), g(rng), g(rng), g(rng));
        double direct = u[0] * v[0] + u[1] * v[1] - u[2] * v[2] - u[3] * v[3];
        CHECK(inner(u, v, Signature::AdS) == doctest::Approx(direct).epsilon(1e-14));
        CHECK(inner(u, v, Signature::AdS) == doctest::Approx(inner(v, u, Signature::AdS)).epsilon(1e-14));
    }
}

TEST_CASE("forms: quadric points are checked and normalised") {
    CHECK_NOTHROW(QuadricPoint(Model::S3, Vec4(1, 0, 0, 0)));
    CHECK_THROWS_AS(QuadricPoint(Model::S3, Vec4(2, 0, 0, 0)), GeometryError);
    CHECK_THROWS_AS(QuadricPoint(Model::AdS3, Vec4(1, 0, 0, 0)), GeometryError);
    QuadricPoint p = normalize(Vec4(0.3, 0.1, 2.0, 0.4), Model::AdS3);
    CHECK(inner(p.coords(), p.coords(), Signature::AdS) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK_THROWS_AS(normalize(Vec4(1, 0, 0, 0), Model::AdS3), GeometryError);
}

TEST_CASE("forms: sphere group law") {
    const Vec4 e = identity_coords(Model::S3);
    std::mt19937_64 rng(3);
    Vec4 y = random_unit(rng);
    CHECK((group_mul(e, y, Model::S3) - y).norm() < 1e-15);
    CHECK((group_mul(Vec4(0, 1, 0, 0), Vec4(0, 1, 0, 0), Model::S3) - Vec4(-1, 0, 0, 0)).norm() < 1e-15);
    CHECK((group_inv(Vec4(1, 0, 0, 0), Model::S3) - Vec4(1, 0, 0, 0)).norm() == 0);
    CHECK((group_inv(Vec4(0, 1, 0, 0), Model::S3) - Vec4(0, -1, 0, 0)).norm() == 0);
    for (int k = 0; k < 50; ++k) {
        Vec4 a = random_unit(rng), b = random_unit(rng);
        CHECK((group_mul(a, b, Model::S3) - quaternion_oracle(a, b)).norm() < 1e-14);
        CHECK((group_mul(a, group_inv(a, Model::S3), Model::S3) - e).norm() < 1e-14);
    }
}

TEST_CASE("forms: AdS group law") {
    const Vec4 e = identity_coords(Model::AdS3);
    CHECK(e == Vec4(0, 0, 0, 1));
    CHECK((group_inv(e, Model::AdS3) - e).norm() == 0);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
        Vec4 a = random_ads(rng), b = random_ads(rng);
        CHECK((group_mul(e, a, Model::AdS3) - a).norm() < 1e-14);
        Vec4 ab = group_mul(a, b, Model::AdS3);
        CHECK(inner(ab, ab, Signature::AdS) == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK((group_mul(a, group_inv(a, Model::AdS3), Model::AdS3) - e).norm() < 1e-12);
        CHECK(sl2_matrix(a).determinant() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(group_mul(QuadricPoint(Model::S3, Vec4(1, 0, 0, 0)), QuadricPoint(Model::AdS3, e)), GeometryError);
}

TEST_CASE("forms: left and right multiplications are isometries") {
    std::mt19937_64 rng(7);
    for (Model m : {Model::S3, Model::AdS3}) {
        Signature sig = signature_of(m);
        for (int k = 0; k < 30; ++k) {
            Vec4 g = m == Model::S3 ? random_unit(rng) : random_ads(rng);
            Vec4 u = m == Model::S3 ? random_unit(rng) : random_ads(rng);
            Vec4 v = m == Model::S3 ? random_unit(rng) : random_ads(rng);
            double ref = inner(u, v, sig);
            CHECK(inner(group_mul(g, u, m), group_mul(g, v, m), sig) == doctest::Approx(ref).epsilon(1e-10));
            CHECK(inner(group_mul(u, g, m), group_mul(v, g, m), sig) == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("forms: left multiplication sends y* to (xy)*") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 30; ++k) {
        Vec4 x = random_unit(rng), y = random_unit(rng), z = random_unit(rng);
        z -= z.dot(y) * y;
        z.normalize();
        CHECK(std::abs(group_mul(x, z, Model::S3).dot(group_mul(x, y, Model::S3))) < 1e-14);
    }
}

TEST_CASE("forms: pairing with a point of e* changes sign under inversion") {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 30; ++k) {
        Vec4 x = random_unit(rng);
        x[0] = 0;
        x.normalize();
        Vec4 y = random_unit(rng);
        CHECK(x.dot(y) == doctest::Approx(-x.dot(group_inv(y, Model::S3))).epsilon(1e-14));
    }
}

TEST_CASE("forms: point/plane duality") {
    DualPlane pe = dual(QuadricPoint(Model::S3, Vec4(1, 0, 0, 0)));
    CHECK(pe.pole == Vec4(1, 0, 0, 0));
    std::mt19937_64 rng(17);
    for (int k = 0; k < 20; ++k) {
        Vec4 x = random_unit(rng);
        if (x[0] < 0) x = -x;
        DualPlane px = dual(QuadricPoint(Model::S3, x));
        // sample points of the plane by projecting random vectors
        for (int j = 0; j < 5; ++j) {
            Vec4 y = random_unit(rng);
            y -= y.dot(px.pole) * px.pole;
            y.normalize();
            CHECK(std::abs(inner(x, y, Signature::Sphere)) < 1e-12);
        }
        CHECK((dual(px).coords() - x).norm() < 1e-14);
    }
    DualPlane h{Model::AdS3, Vec4(0, 0, 0, 3.0)};
    CHECK((dual(h).coords() - Vec4(0, 0, 0, 1)).norm() < 1e-15);
    CHECK_THROWS_AS(dual(DualPlane{Model::AdS3, Vec4(1, 0, 1, 0)}), GeometryError);
    CHECK_THROWS_AS(dual(DualPlane{Model::AdS3, Vec4(1, 0, 0, 0)}), GeometryError);
    CHECK_THROWS_AS(dual(DualPlane{Model::S3, Vec4(0, 1, 0, 0)}), GeometryError);
}

TEST_CASE("forms: canonical AdS representative") {
    CHECK(canonical_ads_representative(Vec4(-1, 2, 0, 0)) == Vec4(1, -2, 0, 0));
    CHECK(canonical_ads_representative(Vec4(1e-13, -2, 0, 0)) == Vec4(-1e-13, 2, 0, 0));
}

TEST_CASE("forms: plane through three points") {
    std::mt19937_64 rng(19);
    for (int k = 0; k < 20; ++k) {
        Vec4 a = random_unit(rng), b = random_unit(rng), c = random_unit(rng);
        DualPlane p = plane_through(a, b, c, Model::S3);
        CHECK(std::abs(p.pole.dot(a)) < 1e-12);
        CHECK(std::abs(p.pole.dot(b)) < 1e-12);
        CHECK(std::abs(p.pole.dot(c)) < 1e-12);
    }
    // the plane x4 = 0 of AdS through three points of H
    Vec4 p1(0, 0, 1, 0), p2(std::sinh(0.5), 0, std::cosh(0.5), 0), p3(0, std::sinh(0.7), std::cosh(0.7), 0);
    DualPlane h = plane_through(p1, p2, p3, Model::AdS3);
    CHECK((canonical_ads_representative(h.pole) - Vec4(0, 0, 0, 1)).norm() < 1e-12);
    CHECK_THROWS_AS(plane_through(p1, p1, p2, Model::S3), GeometryError);
}

TEST_CASE("forms: distances") {
    CHECK(distance(Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0), Model::S3) == doctest::Approx(std::numbers::pi / 2));
    Vec4 x(0, 0, 1, 0), y(std::sinh(1.3), 0, std::cosh(1.3), 0);
    CHECK(distance(x, y, Model::AdS3) == doctest::Approx(1.3).epsilon(1e-14));
    Vec4 z(0, 0, std::cos(0.4), std::sin(0.4));
    CHECK(ads_timelike_distance(x, z) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK_THROWS_AS(distance(x, z, Model::AdS3), GeometryError);
}

TEST_CASE("forms: angles between vectors of R^{3,1}") {
    Vec4 t(0, 0, 0, 1);
    HSAngle same = hs_angle(t, t);
    CHECK(same.kind == HSAngle::Kind::Real);
    CHECK(same.value == doctest::Approx(0.0));
    HSAngle right = hs_angle(Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0));
    CHECK(right.kind == HSAngle::Kind::Real);
    CHECK(right.value == doctest::Approx(std::numbers::pi / 2));
    // two space-like vectors spanning a time-like plane
    Vec4 u(1, 0, 0, 0), v(std::cosh(0.8), 0, 0, std::sinh(0.8));
    HSAngle im = hs_angle(u, v);
    CHECK(im.kind == HSAngle::Kind::PureImaginary);
    CHECK(im.value == doctest::Approx(0.8));
    HSAngle pim = hs_angle(u, Vec4(-v));
    CHECK(pim.kind == HSAngle::Kind::PiMinusImaginary);
    CHECK(pim.value == doctest::Approx(0.8));
    CHECK(std::abs(std::cos(pim.as_complex()) + std::cos(im.as_complex())) < 1e-12);
    // mixed pair: sinh(theta) = i <u,v> / (|u| |w|)
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    for (int k = 0; k < 20; ++k) {
        Vec4 s(g(rng), g(rng), g(rng), 0.1 * g(rng));
        Vec4 w(0.2 * g(rng), 0.2 * g(rng), 0.2 * g(rng), 2.0 + std::abs(g(rng)));
        HSAngle a = hs_angle(s, w);
        std::complex<double> rhs = std::complex<double>(0, 1) * inner(s, w, Signature::Mink31) /
                                   (pseudo_norm(s, Signature::Mink31) * pseudo_norm(w, Signature::Mink31));
        CHECK(std::abs(std::sinh(a.as_complex()) - rhs) < 1e-12);
    }
    CHECK_THROWS_AS(hs_angle(Vec4(1, 0, 0, 1), u), GeometryError);
    CHECK_THROWS_AS(hs_angle(t, Vec4(-t)), UnsupportedError);
}

TEST_CASE("forms: the opposite form swaps the pseudo-norm branches") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> g;
    const std::complex<double> i(0, 1);
    for (int k = 0; k < 20; ++k) {
        Vec4 x(g(rng), g(rng), g(rng), g(rng));
        double q = inner(x, x, Signature::Mink31);
        // |x|' for <.,.>' = -<.,.>_1, same branch rule
        std::complex<double> other = -q >= 0 ? std::complex<double>(std::sqrt(-q), 0) : std::complex<double>(0, std::sqrt(q));
        std::complex<double> n1 = pseudo_norm(x, Signature::Mink31);
        // space-like: |x| = -i |x|'; time-like: |x| = i |x|'
        if (q > 0)
            CHECK(std::abs(n1 + i * other) < 1e-12);
        else
            CHECK(std::abs(n1 - i * other) < 1e-12);
    }
}

TEST_CASE("forms: conjugation by SL(2,R) fixes e and preserves the form") {
    Mat2 g;
    g << 2.0, 0.3, 1.0, 0.65;  // det = 1
    Mat4 a = conjugation_action(g);
    CHECK((a * Vec4(0, 0, 0, 1) - Vec4(0, 0, 0, 1)).norm() < 1e-14);
    Eigen::Matrix4d j = gram_diagonal(Signature::AdS).asDiagonal();
    CHECK((a.transpose() * j * a - j).norm() < 1e-12);
    Vec4 x(0.2, -0.1, 1.1, 0.3);
    Vec4 direct = group_mul(group_mul(from_sl2(g), x, Model::AdS3), group_inv(from_sl2(g), Model::AdS3), Model::AdS3);
    CHECK((a * x - direct).norm() < 1e-12);
}

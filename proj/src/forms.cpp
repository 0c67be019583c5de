#include "flipkit/forms.hpp"

#include "flipkit/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace flipkit {

Vec4 gram_diagonal(Signature sig) {
    switch (sig) {
        case Signature::Sphere: return Vec4(1, 1, 1, 1);
        case Signature::AdS: return Vec4(1, 1, -1, -1);
        case Signature::Mink31: return Vec4(1, 1, 1, -1);
        case Signature::Mink21: return Vec4(1, -1, -1, 0);
    }
    return Vec4(1, 1, 1, 1);
}

double inner(const Vec4& x, const Vec4& y, Signature sig) {
    return (gram_diagonal(sig).array() * x.array() * y.array()).sum();
}

std::complex<double> pseudo_norm(const Vec4& x, Signature sig) {
    double q = inner(x, x, sig);
    if (q >= 0) return {std::sqrt(q), 0.0};
    return {0.0, std::sqrt(-q)};
}

Signature signature_of(Model m) { return m == Model::S3 ? Signature::Sphere : Signature::AdS; }

static double quadric_value(Model m) { return m == Model::S3 ? 1.0 : -1.0; }

QuadricPoint::QuadricPoint(Model model, const Vec4& coords) : model_(model), x_(coords) {
    double q = inner(x_, x_, signature_of(model));
    if (!std::isfinite(q) || std::abs(q - quadric_value(model)) > tol().norm)
        throw GeometryError("point is not on the " + std::string(model == Model::S3 ? "S3" : "AdS3") +
                            " quadric (<x,x> = " + std::to_string(q) + ")");
}

QuadricPoint normalize(const Vec4& v, Model m) {
    double q = inner(v, v, signature_of(m));
    if (m == Model::S3) {
        if (!(q > 0)) throw GeometryError("cannot normalise the zero vector onto S3");
        return QuadricPoint(m, v / std::sqrt(q));
    }
    if (!(q < 0)) throw GeometryError("vector is not time-like for the AdS form");
    return QuadricPoint(m, v / std::sqrt(-q));
}

Vec4 identity_coords(Model m) { return m == Model::S3 ? Vec4(1, 0, 0, 0) : Vec4(0, 0, 0, 1); }

Eigen::Matrix2cd su2_matrix(const Vec4& x) {
    using C = std::complex<double>;
    Eigen::Matrix2cd m;
    m << C(x[0], x[1]), C(x[2], x[3]), C(-x[2], x[3]), C(x[0], -x[1]);
    return m;
}

Vec4 from_su2(const Eigen::Matrix2cd& m) {
    return Vec4(m(0, 0).real(), m(0, 0).imag(), m(0, 1).real(), m(0, 1).imag());
}

Mat2 sl2_matrix(const Vec4& x) {
    Mat2 m;
    m << x[1] + x[3], x[0] + x[2], x[0] - x[2], x[3] - x[1];
    return m;
}

Vec4 from_sl2(const Mat2& m) {
    return Vec4(0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 0) - m(1, 1)), 0.5 * (m(0, 1) - m(1, 0)),
                0.5 * (m(0, 0) + m(1, 1)));
}

Vec4 group_mul(const Vec4& x, const Vec4& y, Model m) {
    if (m == Model::S3) return from_su2(su2_matrix(x) * su2_matrix(y));
    return from_sl2(sl2_matrix(x) * sl2_matrix(y));
}

Vec4 group_inv(const Vec4& x, Model m) {
    if (m == Model::S3) return Vec4(x[0], -x[1], -x[2], -x[3]);
    return Vec4(-x[0], -x[1], -x[2], x[3]);
}

QuadricPoint group_mul(const QuadricPoint& x, const QuadricPoint& y) {
    if (x.model() != y.model()) throw GeometryError("group_mul: points live in different models");
    return QuadricPoint(x.model(), group_mul(x.coords(), y.coords(), x.model()));
}

QuadricPoint group_inv(const QuadricPoint& x) { return QuadricPoint(x.model(), group_inv(x.coords(), x.model())); }

Mat4 conjugation_action(const Mat2& g) {
    Mat2 ginv;
    ginv << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
    ginv /= g.determinant();
    Mat4 a;
    for (int k = 0; k < 4; ++k) a.col(k) = from_sl2(g * sl2_matrix(Vec4::Unit(k)) * ginv);
    return a;
}

Vec4 canonical_ads_representative(const Vec4& x) {
    for (int i = 0; i < 4; ++i) {
        if (std::abs(x[i]) > tol().zero_coord) return x[i] < 0 ? Vec4(-x) : x;
    }
    return x;
}

DualPlane dual(const QuadricPoint& x) { return DualPlane{x.model(), x.coords()}; }

QuadricPoint dual(const DualPlane& plane) {
    if (plane.model == Model::S3) {
        double n = plane.pole.norm();
        if (n == 0) throw GeometryError("plane pole is zero");
        Vec4 p = plane.pole / n;
        if (std::abs(p[0]) <= tol().zero_coord)
            throw GeometryError("plane passes through the identity; its pole is not in the open hemisphere");
        if (p[0] < 0) p = -p;
        return QuadricPoint(Model::S3, p);
    }
    double q = inner(plane.pole, plane.pole, Signature::AdS);
    double scale = plane.pole.squaredNorm();
    if (std::abs(q) <= tol().norm * scale) throw GeometryError("plane has a light-like pole");
    if (q > 0) throw GeometryError("plane is time-like; only space-like planes have a dual point");
    return QuadricPoint(Model::AdS3, canonical_ads_representative(plane.pole / std::sqrt(-q)));
}

DualPlane plane_through(const Vec4& a, const Vec4& b, const Vec4& c, Model m) {
    // Euclidean normal of span(a,b,c) by cofactor expansion, then raised with
    // the (diagonal, involutive) Gram matrix.
    Eigen::Matrix<double, 3, 4> rows;
    rows.row(0) = a.transpose();
    rows.row(1) = b.transpose();
    rows.row(2) = c.transpose();
    Vec4 n;
    for (int k = 0; k < 4; ++k) {
        Eigen::Matrix3d minor;
        int col = 0;
        for (int j = 0; j < 4; ++j) {
            if (j == k) continue;
            minor.col(col++) = rows.col(j);
        }
        n[k] = ((k % 2) ? -1.0 : 1.0) * minor.determinant();
    }
    double scale = a.norm() * b.norm() * c.norm();
    if (n.norm() <= tol().plane * scale) throw GeometryError("plane_through: points are collinear");
    n = (gram_diagonal(signature_of(m)).array() * n.array()).matrix();
    if (m == Model::S3) return DualPlane{m, n.normalized()};
    double q = inner(n, n, Signature::AdS);
    if (std::abs(q) <= tol().norm * n.squaredNorm()) throw GeometryError("plane_through: light-like plane");
    if (q > 0) throw GeometryError("plane_through: time-like plane");
    return DualPlane{m, n / std::sqrt(-q)};
}

double distance(const Vec4& x, const Vec4& y, Model m) {
    if (m == Model::S3) return 2.0 * std::atan2((x - y).norm(), (x + y).norm());
    double xy = inner(x, y, Signature::AdS);
    if (xy > -1.0 + tol().norm) throw GeometryError("AdS points are not joined by a space-like geodesic");
    Vec4 d = x - y;
    double q = inner(d, d, Signature::AdS);  // = 4 sinh^2(dist/2)
    return 2.0 * std::asinh(0.5 * std::sqrt(std::max(q, 0.0)));
}

double ads_timelike_distance(const Vec4& x, const Vec4& y) {
    double xy = inner(x, y, Signature::AdS);
    if (std::abs(xy) > 1.0 + tol().norm) throw GeometryError("AdS points are not time-like separated");
    return std::acos(std::clamp(-xy, -1.0, 1.0));
}

std::complex<double> HSAngle::as_complex() const {
    switch (kind) {
        case Kind::Real: return {value, 0.0};
        case Kind::PureImaginary: return {0.0, value};
        case Kind::PiMinusImaginary: return {std::numbers::pi, -value};
    }
    return {value, 0.0};
}

HSAngle hs_angle(const Vec4& u, const Vec4& v) {
    const double uu = inner(u, u, Signature::Mink31);
    const double vv = inner(v, v, Signature::Mink31);
    const double uv = inner(u, v, Signature::Mink31);
    const double eps = tol().norm;
    if (std::abs(uu) <= eps * u.squaredNorm() || std::abs(vv) <= eps * v.squaredNorm())
        throw GeometryError("hs_angle: light-like vector");
    const double nu = std::sqrt(std::abs(uu));
    const double nv = std::sqrt(std::abs(vv));
    HSAngle out;
    if (uu < 0 && vv < 0) {
        // ||u|| ||v|| = (i nu)(i nv) = -nu nv
        double c = -uv / (nu * nv);
        if (c < 0) throw UnsupportedError("hs_angle: time-like vectors in opposite cones");
        out.kind = HSAngle::Kind::Real;
        out.value = std::acosh(std::max(c, 1.0));
        return out;
    }
    if (uu > 0 && vv > 0) {
        double c = uv / (nu * nv);
        if (c > 1.0) {
            out.kind = HSAngle::Kind::PureImaginary;
            out.value = std::acosh(c);
        } else if (c < -1.0) {
            out.kind = HSAngle::Kind::PiMinusImaginary;
            out.value = std::acosh(-c);
        } else {
            out.kind = HSAngle::Kind::Real;
            out.value = std::acos(c);
        }
        return out;
    }
    // one time-like, one space-like: sinh(theta) = i<u,v> / (||u|| ||v||) = <u,v>/(nu nv)
    out.kind = HSAngle::Kind::Real;
    out.value = std::asinh(uv / (nu * nv));
    return out;
}

}  // namespace flipkit

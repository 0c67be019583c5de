// Metric helpers for geodesic polygons on round spheres and on space-like
// totally geodesic planes of R^{2,1} / R^{2,2} (hyperbolic planes).
#pragma once

#include "flipkit/forms.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace flipkit {

// ---------------------------------------------------------------- spheres

// Arc length between unit vectors; stable for tiny and near-antipodal pairs.
template <class V>
double arc_length(const V& a, const V& b) {
    return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

// Euclidean angle between two nonzero vectors.
template <class V>
double vector_angle(const V& a, const V& b) {
    V ua = a.normalized();
    V ub = b.normalized();
    return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

// Unit tangent at p of the geodesic towards q (q != +-p).
template <class V>
V tangent_toward(const V& p, const V& q) {
    V t = q - p.dot(q) * p;
    return t.normalized();
}

// Interior angle at v of the geodesic corner prev -> v -> next.
template <class V>
double corner_angle(const V& v, const V& prev, const V& next) {
    return vector_angle(V(prev - v.dot(prev) * v), V(next - v.dot(next) * v));
}

// Area of a convex spherical polygon (vertices in cyclic order).
template <class V>
double spherical_polygon_area(const std::vector<V>& verts) {
    const std::size_t m = verts.size();
    double sum = 0;
    for (std::size_t i = 0; i < m; ++i)
        sum += corner_angle(verts[i], verts[(i + m - 1) % m], verts[(i + 1) % m]);
    return sum - (static_cast<double>(m) - 2.0) * std::numbers::pi;
}

// Point at arc length s from p in the unit tangent direction t.
template <class V>
V geodesic_point(const V& p, const V& t, double s) {
    return std::cos(s) * p + std::sin(s) * t;
}

// Orientation of a corner on S^2 seen from outside (positive: counter-clockwise).
inline double orientation(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

// Completes a unit vector of R^4 to an orthonormal basis; columns 1..3 span
// its orthogonal complement with orientation det = +1.
Mat4 orthonormal_frame(const Vec4& v);

struct PolygonSpectrum {
    std::vector<double> sides;   // side i joins vertex i and i+1
    std::vector<double> angles;  // interior angle at vertex i
};

template <class V>
PolygonSpectrum spherical_spectrum(const std::vector<V>& verts) {
    PolygonSpectrum s;
    const std::size_t m = verts.size();
    for (std::size_t i = 0; i < m; ++i) {
        s.sides.push_back(arc_length(verts[i], verts[(i + 1) % m]));
        s.angles.push_back(corner_angle(verts[i], verts[(i + m - 1) % m], verts[(i + 1) % m]));
    }
    return s;
}

// ------------------------------------------------ pseudo-Riemannian planes
//
// Points x with <x,x> = -1 for a diagonal form of signature (+,+,-[,-]);
// geodesic polygons in space-like planes are hyperbolic polygons.

// Angle between two vectors on which the form is positive definite.
double form_angle(const Vec4& a, const Vec4& b, const Vec4& gram);

// Interior angle at v of the corner prev -> v -> next; all three points on
// {<x,x> = -1} and spanning a space-like plane.
double hyperbolic_corner_angle(const Vec4& v, const Vec4& prev, const Vec4& next, const Vec4& gram);

double hyperbolic_distance(const Vec4& a, const Vec4& b, const Vec4& gram);

double hyperbolic_polygon_area(const std::vector<Vec4>& verts, const Vec4& gram);

PolygonSpectrum hyperbolic_spectrum(const std::vector<Vec4>& verts, const Vec4& gram);

// H^2 as the upper sheet of x1^2 + x2^2 - x3^2 = -1. Points are embedded in
// R^4 with a zero last coordinate, which is the plane e* of AdS_3.
inline Vec4 h2_gram() { return Vec4(1, 1, -1, 0); }

// Klein model coordinates (x1, x2) / x3.
inline Vec2 klein(const Vec4& p) { return Vec2(p[0] / p[2], p[1] / p[2]); }

// Cyclic comparison of two spectra allowing rotation (and, if asked, reversal).
bool spectra_match(const PolygonSpectrum& a, const PolygonSpectrum& b, double tolerance, bool allow_reversal);

}  // namespace flipkit

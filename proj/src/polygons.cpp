#include "flipkit/polygons.hpp"

#include <algorithm>

namespace flipkit {

Mat4 orthonormal_frame(const Vec4& v) {
    Mat4 a = Mat4::Identity();
    a.col(0) = v;
    // start the completion from the coordinate axes least aligned with v
    int order[4] = {0, 1, 2, 3};
    std::sort(order, order + 4, [&](int i, int j) { return std::abs(v[i]) < std::abs(v[j]); });
    for (int k = 1; k < 4; ++k) a.col(k) = Vec4::Unit(order[k - 1]);
    Eigen::HouseholderQR<Mat4> qr(a);
    Mat4 q = qr.householderQ();
    if (q.col(0).dot(v) < 0) q.col(0) = -q.col(0);
    if (q.determinant() < 0) q.col(3) = -q.col(3);
    return q;
}

double form_angle(const Vec4& a, const Vec4& b, const Vec4& gram) {
    auto fnorm = [&](const Vec4& u) {
        return std::sqrt(std::max(0.0, (gram.array() * u.array() * u.array()).sum()));
    };
    Vec4 ua = a / fnorm(a);
    Vec4 ub = b / fnorm(b);
    return 2.0 * std::atan2(fnorm(ua - ub), fnorm(ua + ub));
}

double hyperbolic_corner_angle(const Vec4& v, const Vec4& prev, const Vec4& next, const Vec4& gram) {
    auto ip = [&](const Vec4& x, const Vec4& y) { return (gram.array() * x.array() * y.array()).sum(); };
    Vec4 tp = prev + ip(v, prev) * v;
    Vec4 tn = next + ip(v, next) * v;
    return form_angle(tp, tn, gram);
}

double hyperbolic_distance(const Vec4& a, const Vec4& b, const Vec4& gram) {
    Vec4 d = a - b;
    double q = (gram.array() * d.array() * d.array()).sum();
    return 2.0 * std::asinh(0.5 * std::sqrt(std::max(q, 0.0)));
}

double hyperbolic_polygon_area(const std::vector<Vec4>& verts, const Vec4& gram) {
    const std::size_t m = verts.size();
    double sum = 0;
    for (std::size_t i = 0; i < m; ++i)
        sum += hyperbolic_corner_angle(verts[i], verts[(i + m - 1) % m], verts[(i + 1) % m], gram);
    return (static_cast<double>(m) - 2.0) * std::numbers::pi - sum;
}

PolygonSpectrum hyperbolic_spectrum(const std::vector<Vec4>& verts, const Vec4& gram) {
    PolygonSpectrum s;
    const std::size_t m = verts.size();
    for (std::size_t i = 0; i < m; ++i) {
        s.sides.push_back(hyperbolic_distance(verts[i], verts[(i + 1) % m], gram));
        s.angles.push_back(hyperbolic_corner_angle(verts[i], verts[(i + m - 1) % m], verts[(i + 1) % m], gram));
    }
    return s;
}

bool spectra_match(const PolygonSpectrum& a, const PolygonSpectrum& b, double tolerance, bool allow_reversal) {
    const std::size_t m = a.sides.size();
    if (b.sides.size() != m) return false;
    for (int dir = 0; dir < (allow_reversal ? 2 : 1); ++dir) {
        for (std::size_t shift = 0; shift < m; ++shift) {
            bool ok = true;
            for (std::size_t i = 0; i < m && ok; ++i) {
                std::size_t j = dir == 0 ? (i + shift) % m : (shift + m - i) % m;
                // reversed traversal: side i of a is side j-1 of b
                std::size_t js = dir == 0 ? j : (j + m - 1) % m;
                ok = std::abs(a.angles[i] - b.angles[j]) <= tolerance && std::abs(a.sides[i] - b.sides[js]) <= tolerance;
            }
            if (ok) return true;
        }
    }
    return false;
}

}  // namespace flipkit

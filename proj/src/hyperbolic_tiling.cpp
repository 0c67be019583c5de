#include "flipkit/hyperbolic_tiling.hpp"

#include "flipkit/polygons.hpp"
#include "flipkit/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace flipkit {

namespace {

Vec4 ads_gram() { return gram_diagonal(Signature::AdS); }

double cross2(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

std::vector<Vec4> face_points(const HyperbolicTiling& t, int f) {
    std::vector<Vec4> out;
    for (int v : t.faces[f].vertices) out.push_back(t.vertices[v].point);
    return out;
}

void orient_ccw(const HyperbolicTiling& t, std::vector<int>& cyc) {
    double turn = 0;
    const std::size_t m = cyc.size();
    for (std::size_t i = 0; i < m; ++i)
        turn += cross2(klein(t.vertices[cyc[i]].point), klein(t.vertices[cyc[(i + 1) % m]].point));
    if (turn < 0) std::reverse(cyc.begin(), cyc.end());
}

void orient_all(HyperbolicTiling& t) {
    for (auto& f : t.faces) orient_ccw(t, f.vertices);
}

Vec4 project_point(const Vec4& a, const Vec4& s, bool left) {
    Vec4 ainv = group_inv(a, Model::AdS3);
    return left ? group_mul(ainv, s, Model::AdS3) : group_mul(s, ainv, Model::AdS3);
}

Vec4 centroid_h2(const std::vector<Vec4>& pts) {
    Vec4 c = Vec4::Zero();
    for (const auto& p : pts) c += p;
    return c / std::sqrt(-inner(c, c, Signature::AdS));
}

ValidationReport fail(const std::string& check, const std::string& msg) { return {false, check, msg}; }

// Matrix of y -> y p (right) or y -> p y (left) in SL(2,R) coordinates.
Mat4 multiplication_matrix(const Vec4& p, bool on_right) {
    Mat4 m;
    for (int k = 0; k < 4; ++k)
        m.col(k) = on_right ? group_mul(Vec4::Unit(k), p, Model::AdS3) : group_mul(p, Vec4::Unit(k), Model::AdS3);
    return m;
}

}  // namespace

HyperbolicTiling ads_project(const FuchsianSurface& s, ProjectionSide side) {
    HyperbolicTiling t;
    const bool left = side == ProjectionSide::Left;
    t.handedness = left ? Handedness::Right : Handedness::Left;
    t.group = s.config.group;
    t.elements = s.elements;
    t.vertex_orbits = static_cast<int>(s.size());
    t.face_orbits = s.face_orbit_count;
    const int n = static_cast<int>(s.size());

    std::map<std::tuple<int, int, int>, int> corner;  // (face, element, orbit) -> tiling vertex
    std::vector<HTilingFace> white;
    for (std::size_t f = 0; f < s.faces.size(); ++f) {
        const SurfaceFace& sf = s.faces[f];
        HTilingFace w{Color::White, {}, sf.orbit, sf.element};
        for (const auto& l : sf.vertices) {
            Vec4 v = project_point(sf.pole, s.point(l), left);
            corner[{static_cast<int>(f), l.element, l.orbit}] = static_cast<int>(t.vertices.size());
            w.vertices.push_back(static_cast<int>(t.vertices.size()));
            t.vertices.push_back({v, l, n + static_cast<int>(f)});
        }
        white.push_back(w);
    }
    for (int i = 0; i < n; ++i) {
        HTilingFace b{Color::Black, {}, i, 0};
        for (int f : faces_around(s, i)) b.vertices.push_back(corner.at({f, 0, i}));
        t.faces.push_back(b);
    }
    for (auto& w : white) t.faces.push_back(w);

    for (int i = 0; i < n; ++i) {
        const VertexLabel x{0, i};
        for (const auto& nb : s.stars[i].neighbours) {
            if (!nb.true_edge) continue;
            std::vector<int> both;
            for (std::size_t f = 0; f < s.faces.size(); ++f) {
                const auto& v = s.faces[f].vertices;
                if (std::find(v.begin(), v.end(), x) != v.end() && std::find(v.begin(), v.end(), nb.label) != v.end())
                    both.push_back(static_cast<int>(f));
            }
            if (both.size() != 2) throw GeometryError("surface edge does not have two faces");
            const int F = both[0], G = both[1];
            const auto& y = nb.label;
            t.edges.push_back({{corner.at({F, 0, i}), corner.at({G, 0, i}), corner.at({F, y.element, y.orbit}),
                                corner.at({G, y.element, y.orbit})}});
        }
    }
    orient_all(t);
    return t;
}

double h_face_area(const HyperbolicTiling& t, int f) { return hyperbolic_polygon_area(face_points(t, f), ads_gram()); }

PolygonSpectrum h_face_spectrum(const HyperbolicTiling& t, int f) { return hyperbolic_spectrum(face_points(t, f), ads_gram()); }

double white_area(const HyperbolicTiling& t) {
    double a = 0;
    for (std::size_t f = 0; f < t.faces.size(); ++f)
        if (t.faces[f].color == Color::White && t.faces[f].element == 0) a += h_face_area(t, static_cast<int>(f));
    return a;
}

double black_area(const HyperbolicTiling& t) {
    double a = 0;
    for (std::size_t f = 0; f < t.faces.size(); ++f)
        if (t.faces[f].color == Color::Black) a += h_face_area(t, static_cast<int>(f));
    return a;
}

ValidationReport validate_hyperbolic_tiling(const HyperbolicTiling& t) {
    const double geo = tol().align;
    const int nv = static_cast<int>(t.vertices.size());
    for (int i = 0; i < nv; ++i) {
        const Vec4& p = t.vertices[i].point;
        const double q = inner(p, p, Signature::AdS);
        if (std::abs(p[3]) > geo * p.norm() || std::abs(q + 1) > geo * p.squaredNorm() || p[2] <= 0)
            return fail("structure", "vertex " + std::to_string(i) + " is not on the hyperbolic plane");
    }
    std::vector<int> black_of_orbit(t.vertex_orbits, -1), white_rep(t.face_orbits, -1);
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        const auto& face = t.faces[f];
        const auto& cyc = face.vertices;
        if (cyc.size() < 3) return fail("structure", "face " + std::to_string(f) + " has fewer than three vertices");
        for (int v : cyc)
            if (v < 0 || v >= nv) return fail("structure", "face " + std::to_string(f) + " refers to a missing vertex");
        if (face.color == Color::Black) {
            if (face.orbit < 0 || face.orbit >= t.vertex_orbits) return fail("structure", "black face with a bad orbit");
            black_of_orbit[face.orbit] = static_cast<int>(f);
        } else {
            if (face.orbit < 0 || face.orbit >= t.face_orbits || face.element < 0 ||
                face.element >= static_cast<int>(t.elements.size()))
                return fail("structure", "white face with a bad label");
            if (face.element == 0) white_rep[face.orbit] = static_cast<int>(f);
        }
        const std::size_t m = cyc.size();
        for (std::size_t i = 0; i < m; ++i) {
            Vec2 a = klein(t.vertices[cyc[i]].point), b = klein(t.vertices[cyc[(i + 1) % m]].point),
                 c = klein(t.vertices[cyc[(i + 2) % m]].point);
            if (cross2(b - a, c - b) <= tol().convexity)
                return fail("convexity", "face " + std::to_string(f) + " is not strictly convex");
        }
    }
    for (int b : black_of_orbit)
        if (b < 0) return fail("structure", "a vertex orbit has no black face");
    for (int w : white_rep)
        if (w < 0) return fail("structure", "a face orbit has no representative white face");

    // white faces of one orbit are translates of each other
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        const auto& face = t.faces[f];
        if (face.color != Color::White) continue;
        const Mat4& g = t.elements[face.element].action;
        const auto& rep = t.faces[white_rep[face.orbit]];
        if (rep.vertices.size() != face.vertices.size())
            return fail("equivariance", "face " + std::to_string(f) + " differs from its orbit representative");
        for (int v : rep.vertices) {
            Vec4 img = g * t.vertices[v].point;
            bool found = false;
            for (int w : face.vertices) found = found || (t.vertices[w].point - img).norm() <= geo * img.norm();
            if (!found) return fail("equivariance", "face " + std::to_string(f) + " is not the image of its representative");
        }
    }

    // edges: four collinear points, equal black and white segments, and the
    // handedness rule
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
        const auto& c = t.edges[e].corners;
        Vec4 p[4];
        for (int k = 0; k < 4; ++k) {
            if (c[k] < 0 || c[k] >= nv) return fail("structure", "edge " + std::to_string(e) + " refers to a missing vertex");
            p[k] = t.vertices[c[k]].point;
        }
        const std::string name = "edge " + std::to_string(e);
        Eigen::Matrix3d m;
        for (int k = 2; k < 4; ++k) {
            m << p[0].head<3>(), p[1].head<3>(), p[k].head<3>();
            if (std::abs(m.determinant()) > geo * p[0].norm() * p[1].norm() * p[k].norm())
                return fail("segments", name + ": the four corners are not on one geodesic");
        }
        auto d = [&](int a, int b) { return hyperbolic_distance(p[a], p[b], ads_gram()); };
        if (std::abs(d(0, 1) - d(2, 3)) > geo) return fail("segments", name + ": black segments differ in length");
        if (std::abs(d(0, 2) - d(1, 3)) > geo) return fail("segments", name + ": white segments differ in length");

        // parameter along the geodesic from corner 0 towards corner 1
        const Vec2 o = klein(p[0]);
        const Vec2 dir = (klein(p[1]) - o).normalized();
        auto param = [&](int k) {
            const double s = d(0, k);
            return (klein(p[k]) - o).dot(dir) >= 0 ? s : -s;
        };
        // centroids of the two black faces and of the two white faces
        auto black_centroid = [&](int k) {
            const VertexLabel& l = t.vertices[c[k]].black;
            return Vec4(t.elements[l.element].action * centroid_h2(face_points(t, black_of_orbit[l.orbit])));
        };
        auto white_centroid = [&](int k) { return centroid_h2(face_points(t, t.vertices[c[k]].white)); };
        struct Seg {
            bool black;
            double t0;
            bool right;
        };
        auto side_right = [&](const Vec4& centre) { return cross2(dir, klein(centre) - o) < 0; };
        Seg segs[4] = {{true, std::min(param(0), param(1)), side_right(black_centroid(0))},
                       {true, std::min(param(2), param(3)), side_right(black_centroid(2))},
                       {false, std::min(param(0), param(2)), side_right(white_centroid(0))},
                       {false, std::min(param(1), param(3)), side_right(white_centroid(1))}};
        for (int a = 0; a < 4; ++a) {
            int same_side = -1;
            for (int b = 0; b < 4; ++b)
                if (b != a && segs[b].right == segs[a].right) {
                    if (same_side >= 0) return fail("segments", name + ": three segments on one side");
                    same_side = b;
                }
            if (same_side < 0 || segs[same_side].black == segs[a].black)
                return fail("segments", name + ": each side needs one black and one white segment");
            const bool forward = segs[a].t0 > segs[same_side].t0;
            const bool expect = (segs[a].black == segs[a].right) == (t.handedness == Handedness::Right);
            if (forward != expect)
                return fail("handedness", name + " violates the " + std::string(t.handedness == Handedness::Right ? "right" : "left") +
                                              " tiling rule");
        }
    }
    return {};
}

HyperbolicReconstruction reconstruct_surface(const HyperbolicTiling& t) {
    const int n = t.vertex_orbits, m = t.face_orbits;
    // right tilings come from x -> a^{-1} x, so s = a v; left tilings: s = v a
    const bool left_type = t.handedness == Handedness::Right;
    std::vector<Eigen::Matrix<double, 4, Eigen::Dynamic>> blocks;
    const int cols = 4 * (n + m);
    for (const auto& face : t.faces) {
        if (face.color != Color::White) continue;
        const Mat4& g = t.elements[face.element].action;
        for (int v : face.vertices) {
            const auto& tv = t.vertices[v];
            Eigen::Matrix<double, 4, Eigen::Dynamic> rows = Eigen::Matrix<double, 4, Eigen::Dynamic>::Zero(4, cols);
            rows.block<4, 4>(0, 4 * tv.black.orbit) = t.elements[tv.black.element].action;
            rows.block<4, 4>(0, 4 * (n + face.orbit)) -= multiplication_matrix(tv.point, left_type) * g;
            blocks.push_back(rows);
        }
    }
    Eigen::MatrixXd k(4 * static_cast<int>(blocks.size()), cols);
    for (std::size_t b = 0; b < blocks.size(); ++b) k.block(4 * static_cast<int>(b), 0, 4, cols) = blocks[b];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(k, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    HyperbolicReconstruction r;
    r.nullity = cols - static_cast<int>(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] <= 1e-9 * sv[0]) ++r.nullity;
    if (r.nullity != 1)
        throw GeometryError("tiling does not determine a unique surface (solution space of dimension " + std::to_string(r.nullity) +
                            ")");
    Eigen::VectorXd z = svd.matrixV().col(cols - 1);
    r.residual = (k * z).norm();
    const Vec4 x0 = z.head<4>();
    const double q = inner(x0, x0, Signature::AdS);
    if (!(q < 0)) throw GeometryError("reconstructed vertex is not time-like");
    z /= std::sqrt(-q);
    if (z[3] < 0) z = -z;
    for (int i = 0; i < n; ++i) r.vertices.push_back(z.segment<4>(4 * i));
    for (int c = 0; c < m; ++c) r.face_poles.push_back(z.segment<4>(4 * (n + c)));
    return r;
}

HyperbolicTiling hyperbolic_flip(const HyperbolicTiling& t) {
    HyperbolicReconstruction r = reconstruct_surface(t);
    HyperbolicTiling out = t;
    out.handedness = opposite(t.handedness);
    // a right tiling came from the left projection; flip uses the right one
    const bool left = t.handedness == Handedness::Left;
    for (const auto& face : t.faces) {
        if (face.color != Color::White) continue;
        const Vec4 a = t.elements[face.element].action * r.face_poles[face.orbit];
        for (int v : face.vertices) {
            const auto& l = t.vertices[v].black;
            out.vertices[v].point = project_point(a, Vec4(t.elements[l.element].action * r.vertices[l.orbit]), left);
        }
    }
    orient_all(out);
    ValidationReport rep = validate_hyperbolic_tiling(out);
    if (!rep.ok) throw GeometryError("flipped tiling fails validation: " + rep.check + ": " + rep.message);
    return out;
}

bool hyperbolic_tilings_equal(const HyperbolicTiling& a, const HyperbolicTiling& b, double tolerance) {
    if (a.handedness != b.handedness || a.vertices.size() != b.vertices.size() || a.faces.size() != b.faces.size())
        return false;
    for (std::size_t f = 0; f < a.faces.size(); ++f) {
        const auto& fa = a.faces[f];
        const auto& fb = b.faces[f];
        if (fa.color != fb.color || fa.orbit != fb.orbit || fa.element != fb.element) return false;
        std::vector<int> va = fa.vertices, vb = fb.vertices;
        std::sort(va.begin(), va.end());
        std::sort(vb.begin(), vb.end());
        if (va != vb) return false;
    }
    for (std::size_t v = 0; v < a.vertices.size(); ++v)
        if ((a.vertices[v].point - b.vertices[v].point).norm() > tolerance * std::max(1.0, a.vertices[v].point.norm()))
            return false;
    return true;
}

}  // namespace flipkit

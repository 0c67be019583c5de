#include "flipkit/tiling.hpp"

#include "flipkit/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <set>

namespace flipkit {

namespace {

constexpr double pi = std::numbers::pi;
// corners within this of pi count as flat
constexpr double flat_eps = 1e-9;

Vec3 e_part(const Vec4& x) { return Vec3(x[1], x[2], x[3]); }
Vec4 lift(const Vec3& v) { return Vec4(0, v[0], v[1], v[2]); }

Vec3 centroid(const SphericalTiling& t, const std::vector<int>& cyc) {
    Vec3 c = Vec3::Zero();
    for (int i : cyc) c += t.vertices[i];
    return c.normalized();
}

void orient_ccw(const std::vector<Vec3>& verts, std::vector<int>& cyc) {
    Vec3 c = Vec3::Zero();
    for (int i : cyc) c += verts[i];
    double turn = 0;
    for (std::size_t i = 0; i < cyc.size(); ++i) turn += orientation(c, verts[cyc[i]], verts[cyc[(i + 1) % cyc.size()]]);
    if (turn < 0) std::reverse(cyc.begin(), cyc.end());
}

double face_corner(const SphericalTiling& t, int f, std::size_t i) {
    const auto& cyc = t.faces[f].vertices;
    const std::size_t m = cyc.size();
    return corner_angle(t.vertices[cyc[i]], t.vertices[cyc[(i + m - 1) % m]], t.vertices[cyc[(i + 1) % m]]);
}

// Side of the oriented great circle of e on which the face lies.
Side face_side(const SphericalTiling& t, const TilingEdge& e, int f) {
    Vec3 n = e.origin.cross(e.tangent);
    return n.dot(centroid(t, t.faces[f].vertices)) > 0 ? Side::Left : Side::Right;
}

// On each side, the later segment is forward.
void assign_positions(TilingEdge& e, const SphericalTiling& t) {
    for (auto& s : e.segments) s.side = face_side(t, e, s.face);
    for (auto& s : e.segments) {
        for (const auto& o : e.segments)
            if (&o != &s && o.side == s.side) s.position = s.t0 > o.t0 ? Position::Forward : Position::Backward;
    }
}

Handedness handedness_from_labels(const SphericalTiling& t, const TilingEdge& e) {
    for (const auto& s : e.segments)
        if (t.faces[s.face].color == Color::Black && s.side == Side::Right)
            return s.position == Position::Forward ? Handedness::Right : Handedness::Left;
    throw GeometryError("edge has no black segment on its right side");
}

ValidationReport fail(const std::string& check, const std::string& msg) { return {false, check, msg}; }

std::string edge_name(std::size_t e) { return "edge " + std::to_string(e); }
std::string face_name(std::size_t f) { return "face " + std::to_string(f); }

}  // namespace

Handedness opposite(Handedness h) { return h == Handedness::Left ? Handedness::Right : Handedness::Left; }

Vec3 edge_point(const TilingEdge& e, double t) { return geodesic_point(e.origin, e.tangent, t); }

double face_area(const SphericalTiling& t, int f) {
    std::vector<Vec3> pts;
    for (int i : t.faces[f].vertices) pts.push_back(t.vertices[i]);
    return spherical_polygon_area(pts);
}

PolygonSpectrum face_spectrum(const SphericalTiling& t, int f) {
    std::vector<Vec3> pts;
    for (int i : t.faces[f].vertices) pts.push_back(t.vertices[i]);
    return spherical_spectrum(pts);
}

std::vector<int> true_corners(const SphericalTiling& t, int f) {
    std::vector<int> out;
    for (std::size_t i = 0; i < t.faces[f].vertices.size(); ++i)
        if (face_corner(t, f, i) < pi - flat_eps) out.push_back(static_cast<int>(i));
    return out;
}

SphericalTiling project(const ConvexPolyhedron& p, ProjectionSide side) {
    if (p.degeneracy != Degeneracy::None) throw UnsupportedError("projection of a hosohedron or dihedron");
    SphericalTiling t;
    t.handedness = side == ProjectionSide::Left ? Handedness::Right : Handedness::Left;
    const int nv = static_cast<int>(p.vertices.size());
    std::map<std::pair<int, int>, int> corner;  // (face, vertex) -> tiling vertex
    for (std::size_t f = 0; f < p.faces.size(); ++f) {
        Vec4 ainv = group_inv(p.poles[f], Model::S3);
        for (int s : p.faces[f]) {
            Vec4 w = side == ProjectionSide::Left ? group_mul(ainv, p.vertices[s], Model::S3)
                                                  : group_mul(p.vertices[s], ainv, Model::S3);
            corner[{static_cast<int>(f), s}] = static_cast<int>(t.vertices.size());
            t.vertices.push_back(e_part(w).normalized());
        }
    }
    for (int s = 0; s < nv; ++s) {
        TilingFace b{Color::Black, {}};
        for (int f : faces_around(p, s)) b.vertices.push_back(corner.at({f, s}));
        orient_ccw(t.vertices, b.vertices);
        t.faces.push_back(b);
    }
    for (std::size_t f = 0; f < p.faces.size(); ++f) {
        TilingFace w{Color::White, {}};
        for (int s : p.faces[f]) w.vertices.push_back(corner.at({static_cast<int>(f), s}));
        orient_ccw(t.vertices, w.vertices);
        t.faces.push_back(w);
    }
    for (const auto& pe : edges(p)) {
        const int F = pe.left_face, G = pe.right_face;
        const int fs = corner.at({F, pe.a}), gs = corner.at({G, pe.a});
        const int ft = corner.at({F, pe.b}), gt = corner.at({G, pe.b});
        const Vec3 o = t.vertices[fs];
        const Vec3 dir = tangent_toward(o, t.vertices[gs]);
        const double theta = arc_length(o, t.vertices[gs]);
        const double len = arc_length(o, t.vertices[ft]);
        const double sigma =
            (geodesic_point(o, dir, len) - t.vertices[ft]).norm() < (geodesic_point(o, dir, -len) - t.vertices[ft]).norm()
                ? 1.0
                : -1.0;
        const double lo = std::min(0.0, sigma * len);
        TilingEdge e;
        e.origin = geodesic_point(o, dir, lo);
        e.tangent = geodesic_point(o, dir, lo + 0.5 * pi);
        e.length = len + theta;
        e.ends = sigma > 0 ? std::array<int, 2>{fs, gt} : std::array<int, 2>{ft, gs};
        auto seg = [&](int face, double a, double b) {
            EdgeSegment s;
            s.face = face;
            s.t0 = std::min(a, b) - lo;
            s.t1 = std::max(a, b) - lo;
            return s;
        };
        e.segments = {seg(nv + F, 0, sigma * len), seg(nv + G, theta, theta + sigma * len), seg(pe.a, 0, theta),
                      seg(pe.b, sigma * len, sigma * len + theta)};
        assign_positions(e, t);
        t.edges.push_back(e);
    }
    return t;
}

ValidationReport validate_tiling(const SphericalTiling& t) {
    const double geo = tol().align;
    const int nv = static_cast<int>(t.vertices.size());
    // ---- structure
    for (int i = 0; i < nv; ++i)
        if (std::abs(t.vertices[i].norm() - 1.0) > tol().plane) return fail("structure", "vertex " + std::to_string(i) + " is not on S2");
    std::vector<int> black_use(nv, 0), white_use(nv, 0);
    int nblack = 0, nwhite = 0;
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        const auto& cyc = t.faces[f].vertices;
        if (cyc.size() < 3) return fail("structure", face_name(f) + " has fewer than three vertices");
        std::set<int> d(cyc.begin(), cyc.end());
        if (d.size() != cyc.size()) return fail("structure", face_name(f) + " repeats a vertex");
        for (int i : cyc) {
            if (i < 0 || i >= nv) return fail("structure", face_name(f) + " refers to a missing vertex");
            ++(t.faces[f].color == Color::Black ? black_use : white_use)[i];
        }
        ++(t.faces[f].color == Color::Black ? nblack : nwhite);
    }
    if (nblack == 0 || nwhite == 0) return fail("structure", "a flippable tiling has faces of both colors");
    for (int i = 0; i < nv; ++i)
        if (black_use[i] > 1 || white_use[i] > 1 || black_use[i] + white_use[i] == 0)
            return fail("structure", "vertex " + std::to_string(i) + " must be a corner of at most one face of each color");
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        const auto& cyc = t.faces[f].vertices;
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            bool is_true = face_corner(t, static_cast<int>(f), i) < pi - flat_eps;
            if (is_true && (black_use[cyc[i]] != 1 || white_use[cyc[i]] != 1))
                return fail("structure", "corner " + std::to_string(cyc[i]) + " of " + face_name(f) +
                                             " is not shared by one black and one white face");
        }
    }
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
        const auto& ed = t.edges[e];
        if (!(ed.length > 0) || ed.length >= 2 * pi + geo) return fail("structure", edge_name(e) + " has a bad length");
        if (std::abs(ed.origin.norm() - 1) > tol().plane || std::abs(ed.tangent.norm() - 1) > tol().plane ||
            std::abs(ed.origin.dot(ed.tangent)) > tol().plane)
            return fail("structure", edge_name(e) + " has a bad frame");
        if (ed.segments.size() != 4) return fail("structure", edge_name(e) + " does not have four segments");
        for (const auto& s : ed.segments) {
            if (s.face < 0 || s.face >= static_cast<int>(t.faces.size()))
                return fail("structure", edge_name(e) + " refers to a missing face");
            if (!(s.t0 >= -geo && s.t1 <= ed.length + geo && s.t0 < s.t1))
                return fail("structure", edge_name(e) + " has a segment outside the edge");
        }
        for (Side sd : {Side::Left, Side::Right}) {
            int black = 0, white = 0;
            for (const auto& s : ed.segments)
                if (s.side == sd) ++(t.faces[s.face].color == Color::Black ? black : white);
            if (black != 1 || white != 1)
                return fail("structure", edge_name(e) + " needs one black and one white segment per side");
        }
    }

    // ---- convexity
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        const auto& cyc = t.faces[f].vertices;
        const std::size_t m = cyc.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec3& a = t.vertices[cyc[i]];
            const Vec3& b = t.vertices[cyc[(i + 1) % m]];
            Vec3 n = a.cross(b);
            if (n.norm() < tol().plane) return fail("convexity", face_name(f) + " has a degenerate side");
            n.normalize();
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i || j == (i + 1) % m) continue;
                if (n.dot(t.vertices[cyc[j]]) < -geo) return fail("convexity", face_name(f) + " is not convex");
            }
        }
    }

    // ---- covering
    double total = 0;
    for (std::size_t f = 0; f < t.faces.size(); ++f) total += face_area(t, static_cast<int>(f));
    if (std::abs(total - 4 * pi) > tol().area)
        return fail("area", "faces cover area " + std::to_string(total) + " instead of 4 pi");

    // ---- segments against face sides
    std::vector<std::vector<int>> covered(t.faces.size());
    for (std::size_t f = 0; f < t.faces.size(); ++f) covered[f].assign(t.faces[f].vertices.size(), 0);
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
        const auto& ed = t.edges[e];
        const Vec3 n = ed.origin.cross(ed.tangent);
        for (const auto& s : ed.segments) {
            const auto& cyc = t.faces[s.face].vertices;
            const std::size_t m = cyc.size();
            // a face on the left runs along the edge direction
            Vec3 from = edge_point(ed, s.side == Side::Left ? s.t0 : s.t1);
            Vec3 to = edge_point(ed, s.side == Side::Left ? s.t1 : s.t0);
            std::size_t start = m;
            for (std::size_t i = 0; i < m && start == m; ++i)
                if ((t.vertices[cyc[i]] - from).norm() <= geo) start = i;
            if (start == m) return fail("segments", edge_name(e) + ": segment endpoint is not a corner of " + face_name(s.face));
            std::size_t i = start;
            double run = 0;
            bool reached = false;
            for (std::size_t k = 0; k < m && !reached; ++k) {
                std::size_t j = (i + 1) % m;
                const Vec3& q = t.vertices[cyc[j]];
                if (std::abs(n.dot(q)) > geo) break;
                if (covered[s.face][i]) return fail("segments", face_name(s.face) + " has a side on two edges");
                covered[s.face][i] = 1;
                run += arc_length(t.vertices[cyc[i]], q);
                reached = (q - to).norm() <= geo;
                i = j;
            }
            if (!reached || std::abs(run - (s.t1 - s.t0)) > geo)
                return fail("segments", edge_name(e) + ": segment does not follow the sides of " + face_name(s.face));
        }
        for (Side sd : {Side::Left, Side::Right}) {
            std::vector<const EdgeSegment*> on;
            for (const auto& s : ed.segments)
                if (s.side == sd) on.push_back(&s);
            const EdgeSegment* first = on[0]->t0 < on[1]->t0 ? on[0] : on[1];
            const EdgeSegment* second = first == on[0] ? on[1] : on[0];
            if (std::abs(first->t0) > geo || std::abs(second->t1 - ed.length) > geo || std::abs(first->t1 - second->t0) > geo)
                return fail("segments", edge_name(e) + ": segments on one side do not tile the edge");
        }
        for (Color c : {Color::Black, Color::White}) {
            std::vector<double> lens;
            for (const auto& s : ed.segments)
                if (t.faces[s.face].color == c) lens.push_back(s.t1 - s.t0);
            if (std::abs(lens[0] - lens[1]) > geo)
                return fail("segments", edge_name(e) + ": the two " + (c == Color::Black ? "black" : "white") +
                                            " segments have different lengths");
        }
    }
    for (std::size_t f = 0; f < t.faces.size(); ++f)
        for (int c : covered[f])
            if (!c) return fail("segments", face_name(f) + " has a side on no edge");

    // ---- handedness rule
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
        const auto& ed = t.edges[e];
        for (const auto& s : ed.segments) {
            bool black = t.faces[s.face].color == Color::Black;
            bool forward = s.position == Position::Forward;
            bool right = s.side == Side::Right;
            // right tilings: black forward on the right, backward on the left
            bool expect_forward = (black == right) == (t.handedness == Handedness::Right);
            if (forward != expect_forward)
                return fail("handedness", edge_name(e) + " violates the " +
                                              (t.handedness == Handedness::Right ? "right" : "left") + " tiling rule");
        }
    }

    // ---- labels against geometry
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
        const auto& ed = t.edges[e];
        for (const auto& s : ed.segments) {
            if (face_side(t, ed, s.face) != s.side) return fail("labels", edge_name(e) + ": side label disagrees with geometry");
            for (const auto& o : ed.segments)
                if (&o != &s && o.side == s.side && (s.t0 > o.t0) != (s.position == Position::Forward))
                    return fail("labels", edge_name(e) + ": position label disagrees with geometry");
        }
    }
    return {};
}

SphericalTiling recolor(const SphericalTiling& t) {
    SphericalTiling r = t;
    for (auto& f : r.faces) f.color = f.color == Color::Black ? Color::White : Color::Black;
    r.handedness = opposite(t.handedness);
    return r;
}

ConvexPolyhedron white_polyhedron(const SphericalTiling& t) {
    ValidationReport rep = validate_tiling(t);
    if (!rep.ok) throw GeometryError("invalid tiling (" + rep.check + "): " + rep.message);
    std::vector<int> black, white;
    for (std::size_t f = 0; f < t.faces.size(); ++f)
        (t.faces[f].color == Color::Black ? black : white).push_back(static_cast<int>(f));
    if (black.size() == 2) return ConvexPolyhedron{{}, {}, {}, Degeneracy::Hosohedron};
    if (white.size() == 2) return ConvexPolyhedron{{}, {}, {}, Degeneracy::Dihedron};

    // corner owners by tiling vertex
    const int nv = static_cast<int>(t.vertices.size());
    std::vector<int> black_owner(nv, -1), white_owner(nv, -1);
    std::vector<std::vector<int>> corners(t.faces.size());
    for (std::size_t f = 0; f < t.faces.size(); ++f)
        for (int i : true_corners(t, static_cast<int>(f))) {
            int v = t.faces[f].vertices[i];
            corners[f].push_back(v);
            (t.faces[f].color == Color::Black ? black_owner : white_owner)[v] = static_cast<int>(f);
        }

    // right tilings come from x -> a^{-1} x, so s = a w; left tilings: s = w a
    const bool left_type = t.handedness == Handedness::Right;
    auto mul = [](const Vec4& x, const Vec4& y) { return group_mul(x, y, Model::S3); };
    auto inv = [](const Vec4& x) { return group_inv(x, Model::S3); };

    std::vector<Vec4> pole(t.faces.size(), Vec4::Zero());
    std::vector<char> has_pole(t.faces.size(), 0), queued(t.faces.size(), 0);
    std::vector<Vec4> vertex_of(t.faces.size(), Vec4::Zero());
    const int b0 = black.front();
    pole[white_owner[corners[b0].front()]] = identity_coords(Model::S3);
    has_pole[white_owner[corners[b0].front()]] = 1;
    std::queue<int> todo;
    todo.push(b0);
    queued[b0] = 1;
    while (!todo.empty()) {
        const int b = todo.front();
        todo.pop();
        Vec4 s = Vec4::Zero();
        bool found = false;
        for (int v : corners[b]) {
            int w = white_owner[v];
            if (has_pole[w]) {
                s = left_type ? mul(pole[w], lift(t.vertices[v])) : mul(lift(t.vertices[v]), pole[w]);
                found = true;
                break;
            }
        }
        if (!found) throw GeometryError("development reached a black face with no placed white neighbour");
        vertex_of[b] = s;
        for (int v : corners[b]) {
            const int w = white_owner[v];
            const Vec4 lv = lift(t.vertices[v]);
            if (!has_pole[w]) {
                pole[w] = left_type ? mul(s, inv(lv)) : mul(inv(lv), s);
                has_pole[w] = 1;
                for (int v2 : corners[w]) {
                    int b2 = black_owner[v2];
                    if (!queued[b2]) {
                        queued[b2] = 1;
                        todo.push(b2);
                    }
                }
            } else {
                Vec4 s2 = left_type ? mul(pole[w], lv) : mul(lv, pole[w]);
                if ((s2 - s).norm() > tol().align)
                    throw GeometryError("development does not close up around black face " + std::to_string(b));
            }
        }
    }
    for (int b : black)
        if (!queued[b]) throw GeometryError("incidence graph of the tiling is not connected");

    std::vector<int> index(t.faces.size(), -1);
    std::vector<Vec4> verts;
    for (int b : black) {
        index[b] = static_cast<int>(verts.size());
        verts.push_back(vertex_of[b]);
    }
    // Recentre at e. The vertex centroid is preferred; the mean of the face
    // poles lies inside the dual and so always sees every vertex in front.
    auto margin = [&](const Vec4& c) {
        double m = 1;
        for (const auto& v : verts) m = std::min(m, c.dot(v));
        return m;
    };
    Vec4 c = Vec4::Zero(), cp = Vec4::Zero();
    for (const auto& v : verts) c += v;
    for (int w : white) cp += pole[w];
    c.normalize();
    cp.normalize();
    if (margin(cp) > margin(c)) c = cp;
    for (auto& v : verts) v = left_type ? mul(inv(c), v) : mul(v, inv(c));
    std::vector<std::vector<int>> faces;
    for (int w : white) {
        std::vector<int> cyc;
        for (int v : corners[w]) cyc.push_back(index[black_owner[v]]);
        faces.push_back(cyc);
    }
    return from_faces(verts, faces);
}

ConvexPolyhedron black_polyhedron(const SphericalTiling& t) { return white_polyhedron(recolor(t)); }

SphericalTiling flip(const SphericalTiling& t) {
    ConvexPolyhedron p = white_polyhedron(t);
    if (p.degeneracy != Degeneracy::None)
        throw UnsupportedError("flip of a tiling whose white polyhedron is a hosohedron or dihedron is not unique");
    return project(p, t.handedness == Handedness::Right ? ProjectionSide::Right : ProjectionSide::Left);
}

namespace {

ConeMetric cone_metric(const SphericalTiling& t, Color glued) {
    ConeMetric m;
    m.curvature = 1;
    const int nv = static_cast<int>(t.vertices.size());
    // corner angle of the glued color at each tiling vertex
    std::vector<double> glued_angle(nv, 0.0);
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        if (t.faces[f].color != glued) continue;
        m.glued_faces.push_back(static_cast<int>(f));
        for (std::size_t i = 0; i < t.faces[f].vertices.size(); ++i)
            glued_angle[t.faces[f].vertices[i]] = face_corner(t, static_cast<int>(f), i);
    }
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        if (t.faces[f].color == glued) continue;
        double sum = 0;
        for (int i : true_corners(t, static_cast<int>(f))) sum += glued_angle[t.faces[f].vertices[i]];
        m.cone_faces.push_back(static_cast<int>(f));
        m.cone_angles.push_back(sum);
    }
    return m;
}

}  // namespace

ConeMetric black_metric(const SphericalTiling& t) { return cone_metric(t, Color::Black); }
ConeMetric white_metric(const SphericalTiling& t) { return cone_metric(t, Color::White); }

namespace {

// Antipodal construction from the vertices v_i of P, the unit tangents t_i at
// v_i along the side towards v_{i+1}, and the side lengths l_i.
SphericalTiling antipodal_from_sides(const std::vector<Vec3>& v, const std::vector<Vec3>& tg, const std::vector<double>& len) {
    const int n = static_cast<int>(v.size());
    SphericalTiling t;
    auto add = [&](const Vec3& p) {
        t.vertices.push_back(p.normalized());
        return static_cast<int>(t.vertices.size()) - 1;
    };
    std::vector<int> vp(n), vn(n), ma(n), mb(n);
    for (int i = 0; i < n; ++i) {
        vp[i] = add(v[i]);
        vn[i] = add(-v[i]);
    }
    for (int i = 0; i < n; ++i) {
        const int prev = (i + n - 1) % n;
        ma[i] = add(geodesic_point(v[i], tg[i], 0.5 * pi));
        mb[i] = add(geodesic_point(v[prev], tg[prev], len[prev] + 0.5 * pi));
    }
    // sides of length pi (lunes) get a flat midpoint in P and -P
    TilingFace P{Color::Black, {}}, Q{Color::Black, {}};
    for (int i = 0; i < n; ++i) {
        P.vertices.push_back(vp[i]);
        Q.vertices.push_back(vn[i]);
        if (len[i] > pi - 1e-6) {
            Vec3 mid = geodesic_point(v[i], tg[i], 0.5 * len[i]);
            P.vertices.push_back(add(mid));
            Q.vertices.push_back(add(-mid));
        }
    }
    orient_ccw(t.vertices, P.vertices);
    orient_ccw(t.vertices, Q.vertices);
    t.faces.push_back(P);  // face 0
    t.faces.push_back(Q);  // face 1
    for (int i = 0; i < n; ++i) {
        TilingFace d{Color::White, {vp[i], ma[i], vn[i], mb[i]}};
        orient_ccw(t.vertices, d.vertices);
        t.faces.push_back(d);  // face 2 + i
    }
    for (int i = 0; i < n; ++i) {
        const int next = (i + 1) % n;
        TilingEdge e;
        e.origin = v[i];
        e.tangent = tg[i];
        e.length = pi + len[i];
        e.ends = {vp[i], vn[next]};
        auto seg = [](int face, double a, double b) {
            EdgeSegment s;
            s.face = face;
            s.t0 = a;
            s.t1 = b;
            return s;
        };
        e.segments = {seg(0, 0, len[i]), seg(2 + next, len[i], pi + len[i]), seg(2 + i, 0, pi), seg(1, pi, pi + len[i])};
        assign_positions(e, t);
        t.edges.push_back(e);
    }
    t.handedness = handedness_from_labels(t, t.edges.front());
    return t;
}

}  // namespace

SphericalTiling make_antipodal_tiling(const std::vector<Vec3>& polygon, Handedness h) {
    const std::size_t n = polygon.size();
    if (n < 3) throw GeometryError("antipodal tiling needs a polygon with at least three vertices");
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<Vec3> v = polygon;
        for (auto& x : v) x.normalize();
        if (attempt == 1) std::reverse(v.begin(), v.end());
        std::vector<Vec3> tg(n);
        std::vector<double> len(n);
        for (std::size_t i = 0; i < n; ++i) {
            tg[i] = tangent_toward(v[i], v[(i + 1) % n]);
            len[i] = arc_length(v[i], v[(i + 1) % n]);
        }
        SphericalTiling t = antipodal_from_sides(v, tg, len);
        if (t.handedness == h) return t;
    }
    throw GeometryError("antipodal tiling: could not reach the requested handedness");
}

SphericalTiling make_lune_tiling(double angle, Handedness h) {
    if (!(angle > 0 && angle < pi)) throw GeometryError("lune angle must lie in (0, pi)");
    const Vec3 north(0, 0, 1);
    const Vec3 u1(1, 0, 0), u2(std::cos(angle), std::sin(angle), 0);
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<Vec3> tg = attempt == 0 ? std::vector<Vec3>{u1, u2} : std::vector<Vec3>{u2, u1};
        SphericalTiling t = antipodal_from_sides({north, -north}, tg, {pi, pi});
        if (t.handedness == h) return t;
    }
    throw GeometryError("lune tiling: could not reach the requested handedness");
}

namespace {

Eigen::Matrix3d best_rotation(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < from.size(); ++i) h += from[i] * to[i].transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0) d(2, 2) = -1;
    return svd.matrixV() * d * svd.matrixU().transpose();
}

bool same_cycle(const std::vector<Vec3>& a, const std::vector<Vec3>& b, double tolerance) {
    if (a.size() != b.size()) return false;
    const std::size_t m = a.size();
    for (std::size_t s = 0; s < m; ++s) {
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) ok = (a[i] - b[(i + s) % m]).norm() <= tolerance;
        if (ok) return true;
    }
    return false;
}

bool congruent_under(const SphericalTiling& a, const SphericalTiling& b, const Eigen::Matrix3d& r, double tolerance) {
    std::vector<char> used(b.faces.size(), 0);
    for (const auto& fa : a.faces) {
        std::vector<Vec3> pa;
        for (int i : fa.vertices) pa.push_back(r * a.vertices[i]);
        bool matched = false;
        for (std::size_t g = 0; g < b.faces.size() && !matched; ++g) {
            if (used[g] || b.faces[g].color != fa.color) continue;
            std::vector<Vec3> pb;
            for (int i : b.faces[g].vertices) pb.push_back(b.vertices[i]);
            if (same_cycle(pa, pb, tolerance)) {
                used[g] = 1;
                matched = true;
            }
        }
        if (!matched) return false;
    }
    // edges: same supporting arc (either direction) and the same labelled segments
    std::vector<char> eused(b.edges.size(), 0);
    for (const auto& ea : a.edges) {
        bool matched = false;
        for (std::size_t k = 0; k < b.edges.size() && !matched; ++k) {
            const auto& eb = b.edges[k];
            if (eused[k] || std::abs(ea.length - eb.length) > tolerance) continue;
            Vec3 o = r * ea.origin, tg = r * ea.tangent;
            bool fwd = (o - eb.origin).norm() <= tolerance && (tg - eb.tangent).norm() <= tolerance;
            Vec3 end = r * edge_point(ea, ea.length);
            Vec3 end_tg = -(r * geodesic_point(ea.origin, ea.tangent, ea.length + 0.5 * pi));
            bool bwd = (end - eb.origin).norm() <= tolerance && (end_tg - eb.tangent).norm() <= tolerance;
            if (!fwd && !bwd) continue;
            // reversing an edge swaps sides and positions, so the color pattern by (side, position) swaps too
            std::multiset<std::tuple<int, int, int>> sa, sb;
            for (const auto& s : ea.segments) {
                int side = static_cast<int>(s.side), pos = static_cast<int>(s.position);
                if (bwd && !fwd) side = 1 - side, pos = 1 - pos;
                sa.insert({static_cast<int>(a.faces[s.face].color), side, pos});
            }
            for (const auto& s : eb.segments)
                sb.insert({static_cast<int>(b.faces[s.face].color), static_cast<int>(s.side), static_cast<int>(s.position)});
            if (sa == sb) {
                eused[k] = 1;
                matched = true;
            }
        }
        if (!matched) return false;
    }
    return true;
}

}  // namespace

bool tilings_congruent(const SphericalTiling& a, const SphericalTiling& b, double tolerance) {
    if (a.handedness != b.handedness || a.faces.size() != b.faces.size() || a.edges.size() != b.edges.size()) return false;
    // anchor: the face of a with the most corners
    int f0 = 0;
    for (std::size_t f = 0; f < a.faces.size(); ++f)
        if (a.faces[f].vertices.size() > a.faces[f0].vertices.size()) f0 = static_cast<int>(f);
    std::vector<Vec3> pa;
    for (int i : a.faces[f0].vertices) pa.push_back(a.vertices[i]);
    const std::size_t m = pa.size();
    for (const auto& fb : b.faces) {
        if (fb.color != a.faces[f0].color || fb.vertices.size() != m) continue;
        for (std::size_t s = 0; s < m; ++s) {
            std::vector<Vec3> pb;
            for (std::size_t i = 0; i < m; ++i) pb.push_back(b.vertices[fb.vertices[(i + s) % m]]);
            Eigen::Matrix3d r = best_rotation(pa, pb);
            bool close = true;
            for (std::size_t i = 0; i < m && close; ++i) close = (r * pa[i] - pb[i]).norm() <= tolerance;
            if (close && congruent_under(a, b, r, tolerance)) return true;
        }
    }
    return false;
}

SphericalTiling canonical_order(const SphericalTiling& t) {
    std::vector<int> order(t.faces.size());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int f) {
        return std::make_pair(static_cast<int>(t.faces[f].color),
                              *std::min_element(t.faces[f].vertices.begin(), t.faces[f].vertices.end()));
    };
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return key(x) < key(y); });
    std::vector<int> face_map(t.faces.size());
    for (std::size_t i = 0; i < order.size(); ++i) face_map[order[i]] = static_cast<int>(i);

    std::vector<int> vmap(t.vertices.size(), -1);
    SphericalTiling out;
    out.handedness = t.handedness;
    for (int f : order)
        for (int v : t.faces[f].vertices)
            if (vmap[v] < 0) {
                vmap[v] = static_cast<int>(out.vertices.size());
                out.vertices.push_back(t.vertices[v]);
            }
    for (std::size_t v = 0; v < t.vertices.size(); ++v)
        if (vmap[v] < 0) {
            vmap[v] = static_cast<int>(out.vertices.size());
            out.vertices.push_back(t.vertices[v]);
        }
    for (int f : order) {
        TilingFace nf{t.faces[f].color, {}};
        for (int v : t.faces[f].vertices) nf.vertices.push_back(vmap[v]);
        std::rotate(nf.vertices.begin(), std::min_element(nf.vertices.begin(), nf.vertices.end()), nf.vertices.end());
        out.faces.push_back(nf);
    }
    for (const auto& e : t.edges) {
        TilingEdge ne = e;
        ne.ends = {vmap[e.ends[0]], vmap[e.ends[1]]};
        for (auto& s : ne.segments) s.face = face_map[s.face];
        std::sort(ne.segments.begin(), ne.segments.end(),
                  [](const EdgeSegment& x, const EdgeSegment& y) { return std::tie(x.side, x.t0) < std::tie(y.side, y.t0); });
        out.edges.push_back(ne);
    }
    return out;
}

}  // namespace flipkit

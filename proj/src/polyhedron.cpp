#include "flipkit/polyhedron.hpp"

#include "flipkit/hull3.hpp"
#include "flipkit/tolerances.hpp"

#include <map>
#include <numbers>
#include <queue>
#include <set>
#include <string>

namespace flipkit {

namespace {

void check_hemisphere_point(const Vec4& x) {
    if (std::abs(x.norm() - 1.0) > tol().norm) throw GeometryError("polyhedron vertex is not a unit vector");
    if (x[0] < tol().hemisphere) throw GeometryError("polyhedron vertex is outside the open upper hemisphere");
}

// Unit normal of the best plane through the given points (smallest singular
// direction), oriented so that <pole, interior> > 0.
Vec4 fit_pole(const std::vector<Vec4>& pts, const Vec4& interior) {
    Eigen::MatrixXd m(pts.size(), 4);
    for (std::size_t i = 0; i < pts.size(); ++i) m.row(i) = pts[i].transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    Vec4 n = svd.matrixV().col(3);
    if (n.dot(interior) < 0) n = -n;
    return n;
}

Vec4 interior_point(const std::vector<Vec4>& verts) {
    Vec4 s = Vec4::Zero();
    for (const auto& v : verts) s += v;
    return s.normalized();
}

// Newell normal of a face in the chart.
Vec3 chart_normal(const std::vector<Vec4>& verts, const std::vector<int>& cyc) {
    Vec3 n = Vec3::Zero();
    for (std::size_t i = 0; i < cyc.size(); ++i) {
        Vec3 a = chart(verts[cyc[i]]);
        Vec3 b = chart(verts[cyc[(i + 1) % cyc.size()]]);
        n += a.cross(b);
    }
    return n;
}

void orient_outward(const std::vector<Vec4>& verts, std::vector<int>& cyc, const Vec3& chart_interior) {
    Vec3 c = Vec3::Zero();
    for (int i : cyc) c += chart(verts[i]);
    c /= static_cast<double>(cyc.size());
    if (chart_normal(verts, cyc).dot(c - chart_interior) < 0) std::reverse(cyc.begin(), cyc.end());
}

std::map<std::pair<int, int>, int> directed_edges(const std::vector<std::vector<int>>& faces) {
    std::map<std::pair<int, int>, int> out;
    for (std::size_t f = 0; f < faces.size(); ++f)
        for (std::size_t i = 0; i < faces[f].size(); ++i)
            out[{faces[f][i], faces[f][(i + 1) % faces[f].size()]}] = static_cast<int>(f);
    return out;
}

}  // namespace

std::vector<Vec4> face_points(const ConvexPolyhedron& p, int f) {
    std::vector<Vec4> out;
    for (int i : p.faces[f]) out.push_back(p.vertices[i]);
    return out;
}

ConvexPolyhedron from_faces(const std::vector<Vec4>& vertices, const std::vector<std::vector<int>>& faces) {
    const int nv = static_cast<int>(vertices.size());
    if (nv < 4 || faces.size() < 4) throw GeometryError("a convex polyhedron needs at least four vertices and faces");
    for (const auto& v : vertices) check_hemisphere_point(v);
    ConvexPolyhedron p;
    p.vertices = vertices;
    p.faces = faces;
    const Vec4 interior = interior_point(vertices);
    const Vec3 chart_interior = chart(interior);
    std::vector<int> uses(nv, 0);
    for (auto& cyc : p.faces) {
        if (cyc.size() < 3) throw GeometryError("face with fewer than three vertices");
        std::set<int> distinct(cyc.begin(), cyc.end());
        if (distinct.size() != cyc.size()) throw GeometryError("face repeats a vertex");
        for (int i : cyc) {
            if (i < 0 || i >= nv) throw GeometryError("face refers to a missing vertex");
            ++uses[i];
        }
        std::vector<Vec4> pts;
        for (int i : cyc) pts.push_back(vertices[i]);
        Vec4 pole = fit_pole(pts, interior);
        for (const auto& x : pts)
            if (std::abs(pole.dot(x)) > tol().plane) throw GeometryError("face is not planar");
        for (int w = 0; w < nv; ++w) {
            if (distinct.count(w)) continue;
            if (pole.dot(vertices[w]) <= tol().plane)
                throw GeometryError("polyhedron is not strictly convex at face " + std::to_string(&cyc - p.faces.data()));
        }
        orient_outward(vertices, cyc, chart_interior);
        p.poles.push_back(pole);
    }
    for (int u : uses)
        if (u < 3) throw GeometryError("vertex lies on fewer than three faces");
    auto de = directed_edges(p.faces);
    std::size_t total = 0;
    for (const auto& cyc : p.faces) total += cyc.size();
    if (de.size() != total) throw GeometryError("an oriented edge appears twice");
    for (const auto& [e, f] : de)
        if (!de.count({e.second, e.first})) throw GeometryError("face structure is not a closed surface");
    const long euler = nv - static_cast<long>(total / 2) + static_cast<long>(p.faces.size());
    if (euler != 2) throw GeometryError("Euler characteristic is not 2");
    return p;
}

ConvexPolyhedron hull(const std::vector<Vec4>& points) {
    for (const auto& x : points) check_hemisphere_point(x);
    std::vector<Vec3> pts;
    for (const auto& x : points) pts.push_back(chart(x));
    const auto tris = convex_hull_3d(pts);

    const Vec4 interior = interior_point(points);
    std::vector<Vec4> tri_poles;
    for (const auto& t : tris)
        tri_poles.push_back(fit_pole({points[t.v[0]], points[t.v[1]], points[t.v[2]]}, interior));
    auto merged = merge_coplanar(tris, [&](int i, int j) { return (tri_poles[i] - tri_poles[j]).norm() <= tol().merge; });

    // drop boundary points that sit in the middle of an edge
    std::vector<std::vector<int>> faces;
    for (auto& mf : merged) {
        std::vector<int> cyc;
        const std::size_t m = mf.cycle.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec4& v = points[mf.cycle[i]];
            double ang = corner_angle(v, points[mf.cycle[(i + m - 1) % m]], points[mf.cycle[(i + 1) % m]]);
            if (std::numbers::pi - ang > tol().plane) cyc.push_back(mf.cycle[i]);
        }
        faces.push_back(cyc);
    }
    std::vector<int> remap(points.size(), -1);
    std::vector<Vec4> verts;
    std::vector<int> count(points.size(), 0);
    for (const auto& f : faces)
        for (int i : f) ++count[i];
    for (std::size_t i = 0; i < points.size(); ++i)
        if (count[i] >= 3) {
            remap[i] = static_cast<int>(verts.size());
            verts.push_back(points[i]);
        }
    for (auto& f : faces) {
        std::vector<int> g;
        for (int i : f)
            if (remap[i] >= 0) g.push_back(remap[i]);
        f = g;
    }
    return from_faces(verts, faces);
}

std::vector<PolyEdge> edges(const ConvexPolyhedron& p) {
    auto de = directed_edges(p.faces);
    std::vector<PolyEdge> out;
    for (const auto& [e, f] : de) {
        if (e.first > e.second) continue;
        out.push_back({e.first, e.second, f, de.at({e.second, e.first})});
    }
    return out;
}

std::vector<int> faces_around(const ConvexPolyhedron& p, int v) {
    auto de = directed_edges(p.faces);
    int start = -1;
    for (std::size_t f = 0; f < p.faces.size() && start < 0; ++f)
        for (int i : p.faces[f])
            if (i == v) start = static_cast<int>(f);
    if (start < 0) throw GeometryError("vertex belongs to no face");
    std::vector<int> out;
    int f = start;
    do {
        out.push_back(f);
        const auto& cyc = p.faces[f];
        std::size_t k = std::find(cyc.begin(), cyc.end(), v) - cyc.begin();
        int w = cyc[(k + 1) % cyc.size()];
        f = de.at({w, v});
        if (out.size() > p.faces.size()) throw GeometryError("faces around a vertex do not close up");
    } while (f != start);
    return out;
}

double exterior_dihedral(const ConvexPolyhedron& p, const PolyEdge& e) {
    return arc_length(p.poles[e.left_face], p.poles[e.right_face]);
}

std::vector<Vec3> link(const ConvexPolyhedron& p, int v) {
    Mat4 frame = orthonormal_frame(p.vertices[v]);
    std::vector<Vec3> out;
    for (int f : faces_around(p, v)) {
        Vec4 c = -(frame.transpose() * p.poles[f]);  // outward normal
        out.push_back(Vec3(c[1], c[2], c[3]).normalized());
    }
    Vec3 centre = Vec3::Zero();
    for (const auto& x : out) centre += x;
    double turn = 0;
    for (std::size_t i = 0; i < out.size(); ++i) turn += orientation(centre, out[i], out[(i + 1) % out.size()]);
    if (turn < 0) std::reverse(out.begin(), out.end());
    return out;
}

double face_area(const ConvexPolyhedron& p, int f) { return spherical_polygon_area(face_points(p, f)); }

double cone_angle(const ConvexPolyhedron& p, int v) {
    double sum = 0;
    for (const auto& cyc : p.faces) {
        const std::size_t m = cyc.size();
        for (std::size_t i = 0; i < m; ++i)
            if (cyc[i] == v)
                sum += corner_angle(p.vertices[v], p.vertices[cyc[(i + m - 1) % m]], p.vertices[cyc[(i + 1) % m]]);
    }
    return sum;
}

ConvexPolyhedron polar_dual(const ConvexPolyhedron& p) {
    if (p.degeneracy != Degeneracy::None) throw GeometryError("polar dual of a degenerate polyhedron");
    for (const auto& a : p.poles)
        if (a[0] < tol().hemisphere)
            throw GeometryError("polar dual leaves the open hemisphere; recentre the polyhedron");
    ConvexPolyhedron d;
    d.vertices = p.poles;
    d.poles = p.vertices;
    const Vec3 chart_interior = chart(interior_point(d.vertices));
    for (std::size_t v = 0; v < p.vertices.size(); ++v) {
        auto cyc = faces_around(p, static_cast<int>(v));
        orient_outward(d.vertices, cyc, chart_interior);
        d.faces.push_back(cyc);
    }
    return d;
}

namespace {

// Tries to extend a face-to-face assignment to a full combinatorial
// isomorphism; returns the vertex map or an empty vector.
std::vector<int> propagate(const ConvexPolyhedron& p, const std::vector<std::vector<int>>& qfaces, int f0, int g0,
                           std::size_t shift) {
    const auto pe = directed_edges(p.faces);
    const auto qe = directed_edges(qfaces);
    std::vector<int> vmap(p.vertices.size(), -1), fmap(p.faces.size(), -1);
    std::vector<int> used(p.vertices.size(), 0);
    auto assign = [&](int f, int g, std::size_t s) {
        const auto& a = p.faces[f];
        const auto& b = qfaces[g];
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            int w = b[(i + s) % b.size()];
            if (vmap[a[i]] == -1) {
                if (w >= static_cast<int>(used.size()) || used[w]) return false;
                vmap[a[i]] = w;
                used[w] = 1;
            } else if (vmap[a[i]] != w) {
                return false;
            }
        }
        fmap[f] = g;
        return true;
    };
    if (!assign(f0, g0, shift)) return {};
    std::queue<int> todo;
    todo.push(f0);
    while (!todo.empty()) {
        int f = todo.front();
        todo.pop();
        const auto& cyc = p.faces[f];
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
            int pf = pe.at({b, a});
            auto it = qe.find({vmap[b], vmap[a]});
            if (it == qe.end()) return {};
            int qf = it->second;
            if (fmap[pf] != -1) {
                if (fmap[pf] != qf) return {};
                continue;
            }
            const auto& pc = p.faces[pf];
            const auto& qc = qfaces[qf];
            if (pc.size() != qc.size()) return {};
            std::size_t ip = std::find(pc.begin(), pc.end(), b) - pc.begin();
            std::size_t iq = std::find(qc.begin(), qc.end(), vmap[b]) - qc.begin();
            if (!assign(pf, qf, (iq + qc.size() - ip) % qc.size())) return {};
            todo.push(pf);
        }
    }
    for (int x : vmap)
        if (x < 0) return {};
    return vmap;
}

}  // namespace

bool congruent(const ConvexPolyhedron& p, const ConvexPolyhedron& q, double tolerance) {
    if (p.degeneracy != q.degeneracy) return false;
    if (p.degeneracy != Degeneracy::None) return true;
    if (p.vertices.size() != q.vertices.size() || p.faces.size() != q.faces.size()) return false;
    for (int mirror = 0; mirror < 2; ++mirror) {
        auto qfaces = q.faces;
        if (mirror)
            for (auto& c : qfaces) std::reverse(c.begin(), c.end());
        for (std::size_t g = 0; g < qfaces.size(); ++g) {
            if (qfaces[g].size() != p.faces[0].size()) continue;
            for (std::size_t s = 0; s < qfaces[g].size(); ++s) {
                auto vmap = propagate(p, qfaces, 0, static_cast<int>(g), s);
                if (vmap.empty()) continue;
                Mat4 h = Mat4::Zero();
                for (std::size_t i = 0; i < vmap.size(); ++i) h += p.vertices[i] * q.vertices[vmap[i]].transpose();
                Eigen::JacobiSVD<Mat4> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
                Mat4 r = svd.matrixV() * svd.matrixU().transpose();
                double worst = 0;
                for (std::size_t i = 0; i < vmap.size(); ++i)
                    worst = std::max(worst, (r * p.vertices[i] - q.vertices[vmap[i]]).norm());
                if (worst <= tolerance) return true;
            }
        }
    }
    return false;
}

}  // namespace flipkit

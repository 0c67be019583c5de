#include "flipkit/hull3.hpp"

#include "flipkit/errors.hpp"

#include <map>
#include <numeric>

namespace flipkit {

namespace {

struct WorkFace {
    std::array<int, 3> v;
    Eigen::Vector3d n;
    double d;
    bool alive;
};

}  // namespace

std::vector<HullTriangle> convex_hull_3d(const std::vector<Eigen::Vector3d>& pts, double rel_eps) {
    using V3 = Eigen::Vector3d;
    const int n = static_cast<int>(pts.size());
    if (n < 4) throw GeometryError("convex hull needs at least four points");

    V3 lo = pts[0], hi = pts[0];
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double eps = rel_eps * std::max((hi - lo).norm(), 1e-300);

    // initial tetrahedron from extreme points
    int i0 = 0, i1 = 0, i2 = -1, i3 = -1;
    double best = 0;
    for (int i = 0; i < n; ++i)
        if ((pts[i] - pts[i0]).norm() > best) best = (pts[i] - pts[i0]).norm(), i1 = i;
    if (best <= eps) throw GeometryError("convex hull: all points coincide");
    best = 0;
    V3 dir = (pts[i1] - pts[i0]).normalized();
    for (int i = 0; i < n; ++i) {
        V3 w = pts[i] - pts[i0];
        double dist = (w - w.dot(dir) * dir).norm();
        if (dist > best) best = dist, i2 = i;
    }
    if (best <= eps) throw GeometryError("convex hull: points are collinear");
    V3 pn = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
    best = 0;
    for (int i = 0; i < n; ++i) {
        double dist = std::abs(pn.dot(pts[i] - pts[i0]));
        if (dist > best) best = dist, i3 = i;
    }
    if (best <= eps) throw GeometryError("convex hull: points are coplanar");
    const V3 interior = 0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);

    std::vector<WorkFace> faces;
    std::map<std::pair<int, int>, int> edge_face;
    auto add_face = [&](int a, int b, int c) {
        V3 nrm = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
        if (nrm.dot(interior - pts[a]) > 0) {
            std::swap(b, c);
            nrm = -nrm;
        }
        nrm.normalize();
        faces.push_back({{a, b, c}, nrm, nrm.dot(pts[a]), true});
        int id = static_cast<int>(faces.size()) - 1;
        edge_face[{a, b}] = id;
        edge_face[{b, c}] = id;
        edge_face[{c, a}] = id;
    };
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    std::vector<char> visible;
    for (int p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        visible.assign(faces.size(), 0);
        bool any = false;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (faces[f].alive && faces[f].n.dot(pts[p]) - faces[f].d > eps) {
                visible[f] = 1;
                any = true;
            }
        }
        if (!any) continue;
        std::vector<std::pair<int, int>> horizon;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (!visible[f]) continue;
            for (int k = 0; k < 3; ++k) {
                int a = faces[f].v[k], b = faces[f].v[(k + 1) % 3];
                auto it = edge_face.find({b, a});
                if (it == edge_face.end() || !visible[it->second]) horizon.emplace_back(a, b);
            }
        }
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (!visible[f]) continue;
            faces[f].alive = false;
            for (int k = 0; k < 3; ++k) {
                auto it = edge_face.find({faces[f].v[k], faces[f].v[(k + 1) % 3]});
                if (it != edge_face.end() && it->second == static_cast<int>(f)) edge_face.erase(it);
            }
        }
        for (auto [a, b] : horizon) add_face(a, b, p);
    }

    std::vector<HullTriangle> out;
    for (const auto& f : faces)
        if (f.alive) out.push_back({f.v, f.n, f.d});
    return out;
}

std::vector<MergedFace> merge_coplanar(const std::vector<HullTriangle>& tris,
                                       const std::function<bool(int, int)>& same_plane) {
    const int m = static_cast<int>(tris.size());
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<std::pair<int, int>, int> edge_tri;
    for (int t = 0; t < m; ++t)
        for (int k = 0; k < 3; ++k) edge_tri[{tris[t].v[k], tris[t].v[(k + 1) % 3]}] = t;
    for (int t = 0; t < m; ++t)
        for (int k = 0; k < 3; ++k) {
            auto it = edge_tri.find({tris[t].v[(k + 1) % 3], tris[t].v[k]});
            if (it != edge_tri.end() && it->second > t && same_plane(t, it->second))
                parent[find(t)] = find(it->second);
        }

    std::map<int, MergedFace> groups;
    for (int t = 0; t < m; ++t) groups[find(t)].triangles.push_back(t);

    std::vector<MergedFace> out;
    for (auto& [root, g] : groups) {
        std::map<int, int> next;
        for (int t : g.triangles)
            for (int k = 0; k < 3; ++k) {
                int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
                auto it = edge_tri.find({b, a});
                bool interior = it != edge_tri.end() && find(it->second) == root;
                if (!interior) next[a] = b;
            }
        if (next.empty()) throw GeometryError("merge_coplanar: closed coplanar group");
        int start = next.begin()->first;
        int cur = start;
        do {
            g.cycle.push_back(cur);
            auto it = next.find(cur);
            if (it == next.end() || g.cycle.size() > next.size())
                throw GeometryError("merge_coplanar: coplanar group is not a disc");
            cur = it->second;
        } while (cur != start);
        if (g.cycle.size() != next.size()) throw GeometryError("merge_coplanar: coplanar group is not a disc");
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace flipkit

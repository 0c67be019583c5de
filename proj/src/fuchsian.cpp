#include "flipkit/fuchsian.hpp"

#include "flipkit/hull3.hpp"
#include "flipkit/polygons.hpp"
#include "flipkit/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace flipkit {

using std::numbers::pi;

namespace {

const Vec4 kNormal(0, 0, 0, 1);
const Vec4 kCentre(0, 0, 1, 0);

Vec4 ads_gram() { return gram_diagonal(Signature::AdS); }

double ads_ip(const Vec4& x, const Vec4& y) { return inner(x, y, Signature::AdS); }

Mat2 boost_lift(double d) {
    Mat2 m;
    m << std::exp(d / 2), 0, 0, std::exp(-d / 2);
    return m;
}

// Lift of the rotation by t about the octagon centre.
Mat2 rotation_lift(double t) {
    const double phi = -t / 2;
    Mat2 m;
    m << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return m;
}

Mat2 inverse2(const Mat2& g) {
    Mat2 r;
    r << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
    return r / g.determinant();
}

Vec4 check_h2_point(const Vec4& p, const char* what) {
    const double q = ads_ip(p, p);
    if (std::abs(p[3]) > tol().norm * p.norm() || std::abs(q + 1) > 1e3 * tol().norm * p.squaredNorm() || p[2] <= 0) {
        std::ostringstream os;
        os << what << " is not a point of the hyperbolic plane x4 = 0, x3 > 0";
        throw GeometryError(os.str());
    }
    return p;
}

// Lexicographic comparison with an absolute tolerance.
int compare_seq(const std::vector<double>& a, const std::vector<double>& b, double eps) {
    const std::size_t m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i] < b[i] - eps) return -1;
        if (a[i] > b[i] + eps) return 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

struct ElementCacheKey {
    int word_len;
    std::vector<double> generators;
    bool operator<(const ElementCacheKey& o) const {
        if (word_len != o.word_len) return word_len < o.word_len;
        return generators < o.generators;
    }
};

std::vector<GroupElement> enumerate_elements(const FuchsianGroup& g, int word_len) {
    std::vector<Mat2> steps = g.lifts;
    for (const Mat2& l : g.lifts) steps.push_back(inverse2(l));
    const double keep = truncation_radius(g, word_len);
    const double explore = keep + 2 * g.circumradius;

    std::vector<GroupElement> out(1);
    std::map<std::pair<long long, long long>, std::vector<int>> seen;
    auto key = [](const Vec4& c) {
        return std::make_pair(std::llround(c[0] * 1e4), std::llround(c[1] * 1e4));
    };
    auto centre_image = [](const Mat2& m) { return Vec4(conjugation_action(m) * kCentre); };
    seen[key(kCentre)].push_back(0);
    std::vector<GroupElement> all = out;
    std::vector<int> front = {0};
    for (int len = 1; len <= word_len; ++len) {
        std::vector<int> next;
        for (int f : front) {
            for (const Mat2& s : steps) {
                GroupElement e;
                e.lift = all[f].lift * s;
                e.action = conjugation_action(e.lift);
                e.word_length = len;
                Vec4 c = e.action * kCentre;
                if (std::acosh(std::max(1.0, c[2])) > explore) continue;
                bool dup = false;
                for (int other : seen[key(c)])
                    if ((centre_image(all[other].lift) - c).norm() < 1e-8 * c.norm()) dup = true;
                if (dup) continue;
                seen[key(c)].push_back(static_cast<int>(all.size()));
                next.push_back(static_cast<int>(all.size()));
                all.push_back(e);
            }
        }
        front = std::move(next);
    }
    for (std::size_t i = 1; i < all.size(); ++i) {
        Vec4 c = all[i].action * kCentre;
        if (std::acosh(std::max(1.0, c[2])) <= keep) out.push_back(all[i]);
    }
    return out;
}

// ------------------------------------------------------------ hull at one L

struct RawSurface {
    std::vector<GroupElement> elements;
    std::vector<Vec4> vertices;
    std::vector<SurfaceFace> faces;
    int face_orbits = 0;
    std::vector<PyramidStar> stars;

    Vec4 point(const VertexLabel& v) const { return elements[v.element].action * vertices[v.orbit]; }
};

std::vector<Vec4> fundamental_vertices(const FuchsianConfig& cfg) {
    std::vector<Vec4> v;
    for (std::size_t i = 0; i < cfg.base_points.size(); ++i) v.push_back(ray_point(cfg.base_points[i], cfg.heights[i]));
    return v;
}

RawSurface surface_at(const FuchsianConfig& cfg, int word_len) {
    RawSurface s;
    s.elements = orbit_elements(cfg.group, word_len);
    s.vertices = fundamental_vertices(cfg);
    const int n = static_cast<int>(s.vertices.size());
    const int ne = static_cast<int>(s.elements.size());

    std::vector<Vec4> pts;
    std::vector<Eigen::Vector3d> chart;
    for (int e = 0; e < ne; ++e)
        for (int i = 0; i < n; ++i) {
            Vec4 x = s.elements[e].action * s.vertices[i];
            pts.push_back(x);
            chart.emplace_back(x[0] / x[2], x[1] / x[2], x[3] / x[2]);
        }
    auto label = [&](int idx) { return VertexLabel{idx / n, idx % n}; };

    std::vector<HullTriangle> all = convex_hull_3d(chart);
    std::vector<HullTriangle> upper;
    for (const auto& t : all)
        if (t.normal[2] > 1e-12) upper.push_back(t);
    // coplanarity in the chart is coplanarity in AdS_3
    auto merged = merge_coplanar(upper, [&](int i, int j) {
        for (int k = 0; k < 3; ++k) {
            const Eigen::Vector3d& v = chart[upper[j].v[k]];
            if (std::abs(upper[i].normal.dot(v) - upper[i].offset) > tol().merge * (1 + v.norm())) return false;
        }
        return true;
    });

    // Faces incident to a fundamental vertex (flat index < n).
    std::vector<std::vector<int>> cycles;
    for (const auto& mf : merged) {
        bool touches = false;
        for (int v : mf.cycle) touches = touches || v < n;
        if (touches) cycles.push_back(mf.cycle);
    }
    for (int i = 0; i < n; ++i) {
        int count = 0;
        for (const auto& c : cycles) count += static_cast<int>(std::count(c.begin(), c.end(), i));
        if (count < 3) {
            std::ostringstream os;
            os << "vertex " << i << " is not in convex position (it is not a vertex of the orbit hull)";
            throw GeometryError(os.str());
        }
    }

    // Canonical start of each face: the rotation whose sequence of
    // (orbit, translated centre) is least after moving its first vertex to the
    // fundamental domain. It is invariant under the group.
    auto centre_of = [&](int e) { return Vec4(s.elements[e].action * kCentre); };
    std::vector<std::vector<double>> keys(cycles.size());
    for (std::size_t f = 0; f < cycles.size(); ++f) {
        auto& cyc = cycles[f];
        const std::size_t m = cyc.size();
        std::vector<double> best;
        std::size_t best_start = 0;
        for (std::size_t p = 0; p < m; ++p) {
            Mat4 back = conjugation_action(inverse2(s.elements[label(cyc[p]).element].lift));
            std::vector<double> seq;
            for (std::size_t q = 0; q < m; ++q) {
                VertexLabel l = label(cyc[(p + q) % m]);
                Vec4 c = back * centre_of(l.element);
                seq.insert(seq.end(), {static_cast<double>(l.orbit), c[0], c[1]});
            }
            if (p == 0 || compare_seq(seq, best, 1e-7) < 0) {
                best = seq;
                best_start = p;
            }
        }
        std::rotate(cyc.begin(), cyc.begin() + static_cast<long>(best_start), cyc.end());
        keys[f] = best;
    }

    // Orbits, numbered by their representative (first vertex in the
    // fundamental domain).
    std::vector<int> orbit_of(cycles.size(), -1);
    std::vector<int> rep_of_orbit;
    for (std::size_t f = 0; f < cycles.size(); ++f) {
        if (label(cycles[f][0]).element != 0) continue;
        bool known = false;
        for (int r : rep_of_orbit) known = known || compare_seq(keys[f], keys[r], 1e-7) == 0;
        if (known) throw GeometryError("orbit hull: duplicated face");
        orbit_of[f] = static_cast<int>(rep_of_orbit.size());
        rep_of_orbit.push_back(static_cast<int>(f));
    }
    for (std::size_t f = 0; f < cycles.size(); ++f) {
        if (orbit_of[f] >= 0) continue;
        for (std::size_t r = 0; r < rep_of_orbit.size(); ++r)
            if (compare_seq(keys[f], keys[rep_of_orbit[r]], 1e-7) == 0) orbit_of[f] = static_cast<int>(r);
        if (orbit_of[f] < 0) throw GeometryError("orbit hull: a face has no representative near the fundamental domain");
    }
    s.face_orbits = static_cast<int>(rep_of_orbit.size());

    std::vector<Vec4> rep_pole(rep_of_orbit.size());
    for (std::size_t r = 0; r < rep_of_orbit.size(); ++r) {
        const auto& cyc = cycles[rep_of_orbit[r]];
        const std::size_t m = cyc.size();
        Vec4 a = plane_through(pts[cyc[0]], pts[cyc[m / 3]], pts[cyc[(2 * m) / 3 == m / 3 ? m - 1 : (2 * m) / 3]],
                               Model::AdS3)
                     .pole;
        if (group_mul(group_inv(a, Model::AdS3), pts[cyc[0]], Model::AdS3)[2] < 0) a = -a;
        rep_pole[r] = a;
    }
    for (std::size_t f = 0; f < cycles.size(); ++f) {
        SurfaceFace face;
        for (int v : cycles[f]) face.vertices.push_back(label(v));
        face.orbit = orbit_of[f];
        face.element = face.vertices[0].element;
        face.pole = s.elements[face.element].action * rep_pole[face.orbit];
        s.faces.push_back(face);
    }

    // Stars of the triangulated surface: faces are fanned from their first
    // vertex.
    for (int i = 0; i < n; ++i) {
        std::map<std::pair<int, int>, std::pair<VertexLabel, bool>> next;  // a -> (b, x-a is a true edge)
        VertexLabel start{-1, -1};
        auto key = [](const VertexLabel& l) { return std::make_pair(l.element, l.orbit); };
        for (const auto& face : s.faces) {
            const auto& c = face.vertices;
            const int m = static_cast<int>(c.size());
            int q = -1;
            for (int k = 0; k < m; ++k)
                if (c[k] == VertexLabel{0, i}) q = k;
            if (q < 0) continue;
            // corner angle check: a flat corner means x is not a vertex
            double ang = hyperbolic_corner_angle(s.vertices[i], s.point(c[(q + m - 1) % m]), s.point(c[(q + 1) % m]), ads_gram());
            if (ang > pi - 1e-9) throw GeometryError("a fundamental vertex lies on an edge of the orbit hull");
            std::vector<std::pair<int, int>> tris;  // (a, b) with (x, a, b) counter-clockwise
            if (q == 0) {
                for (int k = 1; k + 1 < m; ++k) tris.emplace_back(k, k + 1);
            } else {
                if (q >= 2) tris.emplace_back(0, q - 1);      // triangle (0, q-1, q)
                if (q <= m - 2) tris.emplace_back(q + 1, 0);  // triangle (0, q, q+1)
            }
            for (auto [a, b] : tris) {
                const bool true_a = (a == (q + 1) % m) || (a == (q + m - 1) % m);
                if (next.count(key(c[a]))) throw GeometryError("orbit hull: star of a vertex is not a disc");
                next[key(c[a])] = {c[b], true_a};
                start = c[a];
            }
        }
        PyramidStar star;
        star.vertex = i;
        VertexLabel cur = start;
        for (std::size_t guard = 0; guard <= next.size(); ++guard) {
            auto it = next.find(key(cur));
            if (it == next.end()) throw GeometryError("vertex is not in convex position (its star is not closed)");
            star.neighbours.push_back({cur, it->second.second});
            cur = it->second.first;
            if (cur == start) break;
        }
        if (!(cur == start) || star.neighbours.size() != next.size())
            throw GeometryError("vertex is not in convex position (its star is not a single cycle)");
        s.stars.push_back(star);
    }
    return s;
}

// Combinatorial signature of the stars, independent of element numbering.
std::vector<std::vector<double>> star_signature(const RawSurface& s) {
    std::vector<std::vector<double>> sig;
    for (const auto& st : s.stars) {
        std::vector<std::vector<double>> items;
        for (const auto& nb : st.neighbours) {
            Vec4 c = s.elements[nb.label.element].action * kCentre;
            items.push_back({static_cast<double>(nb.label.orbit), std::round(c[0] * 1e6), std::round(c[1] * 1e6),
                             nb.true_edge ? 1.0 : 0.0});
        }
        std::sort(items.begin(), items.end());
        std::vector<double> flat;
        for (auto& it : items) flat.insert(flat.end(), it.begin(), it.end());
        sig.push_back(flat);
    }
    return sig;
}

void check_config(const FuchsianConfig& cfg) {
    if (cfg.base_points.empty()) throw GeometryError("at least one base point is required");
    if (cfg.base_points.size() != cfg.heights.size()) throw GeometryError("base points and heights differ in number");
    for (std::size_t i = 0; i < cfg.base_points.size(); ++i) {
        check_h2_point(cfg.base_points[i], "base point");
        if (!in_fundamental_domain(cfg.group, cfg.base_points[i]))
            throw GeometryError("base point is outside the fundamental octagon");
        const double h = cfg.heights[i];
        if (!(h > 0 && h < pi / 2)) throw GeometryError("heights must lie in (0, pi/2)");
        for (std::size_t j = 0; j < i; ++j)
            if (hyperbolic_distance(cfg.base_points[i], cfg.base_points[j], ads_gram()) < 1e-6)
                throw GeometryError("base points must be distinct");
    }
}

}  // namespace

// ------------------------------------------------------------------ group

FuchsianGroup genus2_group() {
    FuchsianGroup g;
    g.genus = 2;
    const double cot = 1.0 / std::tan(pi / 8);
    g.inradius = std::acosh(cot);
    g.circumradius = std::acosh(cot * cot);
    for (int k = 0; k < 4; ++k) {
        Mat2 l = rotation_lift(k * pi / 4) * boost_lift(2 * g.inradius) * rotation_lift(-k * pi / 4);
        g.lifts.push_back(l);
        g.generators.push_back(conjugation_action(l));
    }
    return g;
}

Mat2 surface_relation(const FuchsianGroup& g) {
    const auto& l = g.lifts;
    return l[0] * inverse2(l[1]) * l[2] * inverse2(l[3]) * inverse2(l[0]) * l[1] * inverse2(l[2]) * l[3];
}

std::vector<Vec4> fundamental_octagon(const FuchsianGroup& g) {
    std::vector<Vec4> v;
    const double r = g.circumradius;
    for (int j = 0; j < 8; ++j) {
        const double t = j * pi / 4 + pi / 8;
        v.emplace_back(std::sinh(r) * std::cos(t), std::sinh(r) * std::sin(t), std::cosh(r), 0);
    }
    return v;
}

double fundamental_domain_area(const FuchsianGroup& g) { return hyperbolic_polygon_area(fundamental_octagon(g), ads_gram()); }

bool in_fundamental_domain(const FuchsianGroup& g, const Vec4& p, double margin) {
    if (p[2] <= 0) return false;
    auto oct = fundamental_octagon(g);
    Vec2 q = klein(p);
    for (std::size_t j = 0; j < oct.size(); ++j) {
        Vec2 a = klein(oct[j]), b = klein(oct[(j + 1) % oct.size()]);
        Vec2 d = b - a, w = q - a;
        if ((d[0] * w[1] - d[1] * w[0]) / d.norm() <= margin) return false;
    }
    return true;
}

Vec4 h2_from_klein(double u, double v) {
    const double r2 = u * u + v * v;
    if (!(r2 < 1)) throw GeometryError("Klein coordinates must lie in the open unit disc");
    const double s = 1.0 / std::sqrt(1 - r2);
    return Vec4(u * s, v * s, s, 0);
}

Vec4 ray_point(const Vec4& base, double height) { return std::cos(height) * base + std::sin(height) * kNormal; }

double truncation_radius(const FuchsianGroup& g, int word_len) { return g.circumradius * (1.0 + word_len / 4.0) + 0.05; }

std::vector<GroupElement> orbit_elements(const FuchsianGroup& g, int word_len) {
    static std::mutex mu;
    static std::map<ElementCacheKey, std::vector<GroupElement>> cache;
    ElementCacheKey key{word_len, {}};
    for (const Mat2& l : g.lifts) key.generators.insert(key.generators.end(), l.data(), l.data() + 4);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto out = enumerate_elements(g, word_len);
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = out;
    return out;
}

// ------------------------------------------------------------------ hull

FuchsianSurface orbit_hull(const FuchsianConfig& cfg, int start_word_len) {
    check_config(cfg);
    const int cap = cfg.word_len_cap;
    RawSurface prev;
    std::vector<std::vector<double>> prev_sig;
    bool have_prev = false;
    for (int len = std::max(1, start_word_len); len <= cap; ++len) {
        RawSurface cur = surface_at(cfg, len);
        auto sig = star_signature(cur);
        if (have_prev && sig == prev_sig) {
            FuchsianSurface s;
            s.config = cfg;
            s.word_length = len - 1;
            s.elements = std::move(prev.elements);
            s.vertices = std::move(prev.vertices);
            s.faces = std::move(prev.faces);
            s.face_orbit_count = prev.face_orbits;
            s.stars = std::move(prev.stars);
            return s;
        }
        prev = std::move(cur);
        prev_sig = std::move(sig);
        have_prev = true;
    }
    std::ostringstream os;
    os << "orbit hull did not stabilise up to word length " << cap;
    throw ConvergenceError(os.str());
}

std::vector<int> faces_around(const FuchsianSurface& s, int x) {
    const auto& nbs = s.stars[x].neighbours;
    const VertexLabel centre{0, x};
    std::vector<int> cyc;
    for (std::size_t k = 0; k < nbs.size(); ++k) {
        const VertexLabel& a = nbs[k].label;
        const VertexLabel& b = nbs[(k + 1) % nbs.size()].label;
        for (std::size_t f = 0; f < s.faces.size(); ++f) {
            const auto& v = s.faces[f].vertices;
            auto has = [&](const VertexLabel& l) { return std::find(v.begin(), v.end(), l) != v.end(); };
            if (has(centre) && has(a) && has(b)) {
                if (cyc.empty() || cyc.back() != static_cast<int>(f)) cyc.push_back(static_cast<int>(f));
                break;
            }
        }
    }
    while (cyc.size() > 1 && cyc.front() == cyc.back()) cyc.pop_back();
    return cyc;
}

Eigen::VectorXd cone_angles(const FuchsianSurface& s) {
    const int n = static_cast<int>(s.size());
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (const auto& f : s.faces) {
        const int m = static_cast<int>(f.vertices.size());
        for (int k = 0; k < m; ++k) {
            const VertexLabel& v = f.vertices[k];
            if (v.element != 0) continue;
            w[v.orbit] += hyperbolic_corner_angle(s.vertices[v.orbit], s.point(f.vertices[(k + m - 1) % m]),
                                                  s.point(f.vertices[(k + 1) % m]), ads_gram());
        }
    }
    return w;
}

Eigen::VectorXd curvatures(const FuchsianSurface& s) {
    Eigen::VectorXd w = cone_angles(s);
    return Eigen::VectorXd::Constant(w.size(), 2 * pi) - w;
}

StarGeometry star_geometry(const FuchsianSurface& s, int x) {
    const auto& star = s.stars[x];
    const int m = static_cast<int>(star.neighbours.size());
    const Vec4& px = s.config.base_points[x];
    const double hx = s.config.heights[x];
    StarGeometry g;
    std::vector<Vec4> q;
    for (const auto& nb : star.neighbours) {
        q.push_back(s.base_point(nb.label));
        const double hy = s.config.heights[nb.label.orbit];
        const double apex = std::acosh(std::max(1.0, -ads_ip(px, q.back())));
        Triangle t = ads_timelike_solve(hy + pi / 2, hx + pi / 2, apex);
        g.rho.push_back(t.alpha);
        g.rho_back.push_back(t.gamma);
        g.ell.push_back(t.b);
    }
    for (int k = 0; k < m; ++k) {
        const int k2 = (k + 1) % m;
        const double d = hyperbolic_corner_angle(px, q[k], q[k2], ads_gram());
        Triangle t = hs2_laws(g.rho[k], g.rho[k2], d);
        g.apex_angle.push_back(d);
        g.wedge.push_back(t.a);
        g.sinh_alpha_first.push_back(std::sinh(t.gamma));
        g.sinh_alpha_second.push_back(std::sinh(t.beta));
        g.cone_angle += t.a;
    }
    return g;
}

Eigen::VectorXd cone_angles_from_kernels(const FuchsianSurface& s) {
    Eigen::VectorXd w(static_cast<int>(s.size()));
    for (int i = 0; i < w.size(); ++i) w[i] = star_geometry(s, i).cone_angle;
    return w;
}

std::vector<JacobianTerm> jacobian_terms(const FuchsianSurface& s) {
    std::vector<JacobianTerm> out;
    for (int x = 0; x < static_cast<int>(s.size()); ++x) {
        StarGeometry g = star_geometry(s, x);
        const auto& nbs = s.stars[x].neighbours;
        const int m = static_cast<int>(nbs.size());
        for (int k = 0; k < m; ++k) {
            // dihedral terms of the two triangles on either side of edge k
            double sinh_sum = g.sinh_alpha_first[k] + g.sinh_alpha_second[(k + m - 1) % m];
            const bool true_edge = nbs[k].true_edge;
            if (!true_edge) sinh_sum = 0;
            const int y = nbs[k].label.orbit;
            const double sl = std::sinh(g.ell[k]), cl = std::cosh(g.ell[k]);
            if (y == x) {
                out.push_back({x, x, k, true, true_edge, sinh_sum * std::cosh(g.rho[k]) * (1 - cl) / sl});
            } else {
                out.push_back({x, y, k, false, true_edge, sinh_sum * std::cosh(g.rho_back[k]) / sl});
                out.push_back({x, x, k, false, true_edge, -sinh_sum * cl * std::cosh(g.rho[k]) / sl});
            }
        }
    }
    return out;
}

Eigen::MatrixXd jacobian(const FuchsianSurface& s) {
    const int n = static_cast<int>(s.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& t : jacobian_terms(s)) a(t.row, t.col) += t.value;
    return a;
}

Eigen::VectorXd column_dominance_margin(const Eigen::MatrixXd& a) {
    Eigen::VectorXd m(a.cols());
    for (int c = 0; c < a.cols(); ++c) {
        double off = 0;
        for (int r = 0; r < a.rows(); ++r)
            if (r != c) off += std::abs(a(r, c));
        m[c] = std::abs(a(c, c)) - off;
    }
    return m;
}

double condition_number(const Eigen::MatrixXd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[sv.size() - 1] == 0) return std::numeric_limits<double>::infinity();
    return sv[0] / sv[sv.size() - 1];
}

// ------------------------------------------------------------------ solver

void check_targets(const FuchsianGroup& g, const Eigen::VectorXd& targets) {
    if (targets.size() == 0) throw GeometryError("no target curvatures");
    for (int i = 0; i < targets.size(); ++i)
        if (!(targets[i] < 0)) throw GeometryError("target curvatures must be negative");
    const double bound = 2 * pi * g.euler_characteristic();
    if (!(targets.sum() > bound)) {
        std::ostringstream os;
        os << "sum of target curvatures " << targets.sum() << " must exceed 2 pi chi = " << bound;
        throw GeometryError(os.str());
    }
}

namespace {

struct Evaluation {
    bool ok = false;
    Eigen::VectorXd k;
    Eigen::MatrixXd a;
};

class CurvatureMap {
public:
    CurvatureMap(const FuchsianGroup& g, const std::vector<Vec4>& base, int cap) {
        cfg_.group = g;
        cfg_.base_points = base;
        cfg_.word_len_cap = cap;
    }

    Evaluation operator()(const Eigen::VectorXd& h, bool with_jacobian) const {
        Evaluation ev;
        for (int i = 0; i < h.size(); ++i)
            if (!(h[i] > 1e-9 && h[i] < pi / 2 - 1e-9)) return ev;
        FuchsianConfig cfg = cfg_;
        cfg.heights.assign(h.data(), h.data() + h.size());
        try {
            FuchsianSurface s = orbit_hull(cfg);
            ev.k = curvatures(s);
            if (with_jacobian) ev.a = jacobian(s);
        } catch (const GeometryError&) {
            return ev;
        }
        ev.ok = true;
        return ev;
    }

private:
    FuchsianConfig cfg_;
};

struct NewtonOutcome {
    bool ok = false;
    Eigen::VectorXd h;
    int iterations = 0;
};

// Damped Newton on k(h) = target. d k / d h = -A.
NewtonOutcome newton(const CurvatureMap& f, Eigen::VectorXd h, const Eigen::VectorXd& target, const SolveOptions& opt) {
    NewtonOutcome out;
    Evaluation ev = f(h, true);
    if (!ev.ok) return out;
    double res = (ev.k - target).lpNorm<Eigen::Infinity>();
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (res < opt.tolerance) {
            out.ok = true;
            out.h = h;
            return out;
        }
        ++out.iterations;
        Eigen::VectorXd step = ev.a.colPivHouseholderQr().solve(ev.k - target);
        double lambda = 1;
        bool moved = false;
        for (int halvings = 0; halvings < 30; ++halvings, lambda /= 2) {
            Eigen::VectorXd trial = h + lambda * step;
            Evaluation e2 = f(trial, true);
            if (!e2.ok) continue;
            double r2 = (e2.k - target).lpNorm<Eigen::Infinity>();
            if (r2 < res) {
                h = trial;
                ev = e2;
                res = r2;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    out.ok = res < opt.tolerance;
    out.h = h;
    return out;
}

}  // namespace

SolveResult solve_prescribed_curvature(const FuchsianGroup& g, const std::vector<Vec4>& base_points,
                                       const Eigen::VectorXd& targets, const SolveOptions& opt) {
    if (static_cast<int>(base_points.size()) != targets.size())
        throw GeometryError("one target curvature per base point is required");
    check_targets(g, targets);
    const int n = static_cast<int>(base_points.size());
    Eigen::VectorXd h0 = Eigen::VectorXd::Constant(n, 0.5);
    if (!opt.initial_heights.empty()) {
        if (static_cast<int>(opt.initial_heights.size()) != n) throw GeometryError("initial heights: wrong count");
        for (int i = 0; i < n; ++i) h0[i] = opt.initial_heights[i];
    }
    {
        FuchsianConfig cfg;
        cfg.group = g;
        cfg.base_points = base_points;
        cfg.heights.assign(h0.data(), h0.data() + n);
        check_config(cfg);
    }
    CurvatureMap f(g, base_points, opt.word_len_cap);
    Evaluation start = f(h0, false);
    if (!start.ok) throw GeometryError("initial heights do not give a convex configuration");

    SolveResult r;
    NewtonOutcome direct = newton(f, h0, targets, opt);
    r.iterations = direct.iterations;
    Eigen::VectorXd h;
    if (direct.ok) {
        h = direct.h;
        r.stages = 1;
    } else {
        // straight line from the curvature of the start to the target; K(n)
        // is convex so every intermediate target is admissible
        r.used_continuation = true;
        const Eigen::VectorXd k0 = start.k;
        Eigen::VectorXd cur = h0;
        double t = 0, dt = 0.25;
        while (t < 1) {
            if (r.stages >= opt.max_stages || dt < 1e-6)
                throw ConvergenceError("prescribed curvature: continuation did not reach the target");
            ++r.stages;
            const double t1 = std::min(1.0, t + dt);
            NewtonOutcome step = newton(f, cur, (1 - t1) * k0 + t1 * targets, opt);
            r.iterations += step.iterations;
            if (step.ok) {
                cur = step.h;
                t = t1;
                dt *= 1.5;
            } else {
                dt /= 2;
            }
        }
        h = cur;
    }
    Evaluation fin = f(h, true);
    if (!fin.ok) throw ConvergenceError("prescribed curvature: final configuration is not convex");
    r.heights.assign(h.data(), h.data() + n);
    r.achieved = fin.k;
    r.residual = (fin.k - targets).lpNorm<Eigen::Infinity>();
    r.jacobian_condition = condition_number(fin.a);
    if (!(r.residual < opt.tolerance)) throw ConvergenceError("prescribed curvature: residual above tolerance");
    return r;
}

// ------------------------------------------------------------------ dual

DualSurface minkowski_dual(const FuchsianSurface& s) {
    DualSurface d;
    for (const auto& f : s.faces) d.vertices.push_back(f.pole);
    for (int i = 0; i < static_cast<int>(s.size()); ++i) {
        std::vector<int> cyc = faces_around(s, i);
        std::vector<Vec4> poly;
        for (int f : cyc) poly.push_back(d.vertices[f]);
        d.faces.push_back(cyc);
        d.areas.push_back(hyperbolic_polygon_area(poly, ads_gram()));
        const double h = s.config.heights[i];
        const Vec4& p = s.config.base_points[i];
        d.reflected_ray_feet.push_back(std::sin(h) * p - std::cos(h) * kNormal);
        d.reflected_ray_directions.push_back(-s.vertices[i]);
    }
    return d;
}

std::vector<Vec4> dual_of_dual(const DualSurface& d) {
    std::vector<Vec4> out;
    for (const auto& f : d.faces) {
        const std::size_t m = f.size();
        if (m < 3) throw GeometryError("dual face has fewer than three vertices");
        Vec4 a = plane_through(d.vertices[f[0]], d.vertices[f[m / 3]], d.vertices[f[(2 * m) / 3 == m / 3 ? m - 1 : (2 * m) / 3]],
                               Model::AdS3)
                     .pole;
        out.push_back(canonical_ads_representative(a));
    }
    return out;
}

}  // namespace flipkit

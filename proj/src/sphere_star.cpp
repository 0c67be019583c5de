#include "flipkit/sphere_star.hpp"

#include "flipkit/trig.hpp"

#include <cmath>

namespace flipkit {

namespace {

void check_star(const ConvexPolyhedron& p, const Vec4& apex) {
    if (p.degeneracy != Degeneracy::None) throw GeometryError("star Jacobian needs a polyhedron with vertices and faces");
    for (std::size_t f = 0; f < p.faces.size(); ++f) {
        if (p.faces[f].size() != 3) throw GeometryError("star Jacobian needs triangular faces");
        if (!(p.poles[f].dot(apex) > 0)) throw GeometryError("apex is not interior to the polyhedron");
    }
}

}  // namespace

Eigen::VectorXd star_heights(const ConvexPolyhedron& p, const Vec4& apex) {
    Eigen::VectorXd h(static_cast<int>(p.vertices.size()));
    for (int i = 0; i < h.size(); ++i) h[i] = arc_length(apex, p.vertices[i]);
    return h;
}

Eigen::MatrixXd sph_star_jacobian(const ConvexPolyhedron& p, const Vec4& apex) {
    check_star(p, apex);
    const int n = static_cast<int>(p.vertices.size());
    Eigen::VectorXd h = star_heights(p, apex);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        // neighbours s_k with triangles (x, s_k, s_k+1)
        std::vector<int> s;
        for (int f : faces_around(p, x)) {
            const auto& c = p.faces[f];
            int k = 0;
            while (c[k] != x) ++k;
            s.push_back(c[(k + 2) % 3]);
        }
        const int m = static_cast<int>(s.size());
        const Vec4 ux = tangent_toward(apex, p.vertices[x]);
        std::vector<Vec4> u;
        std::vector<double> rho(m), rho_back(m), ell(m);
        for (int k = 0; k < m; ++k) {
            u.push_back(tangent_toward(apex, p.vertices[s[k]]));
            Triangle t = sph_solve(h[s[k]], h[x], vector_angle(ux, u[k]));
            rho[k] = t.alpha;
            rho_back[k] = t.gamma;
            ell[k] = t.b;
        }
        std::vector<double> cos_sum(m, 0.0);
        for (int k = 0; k < m; ++k) {
            const int k2 = (k + 1) % m;
            Triangle t = sph_solve(rho[k], rho[k2], corner_angle(ux, u[k], u[k2]));
            cos_sum[k] += std::cos(t.gamma);
            cos_sum[k2] += std::cos(t.alpha);
        }
        for (int k = 0; k < m; ++k) {
            const double sl = std::sin(ell[k]);
            a(x, s[k]) += cos_sum[k] * std::sin(rho_back[k]) / sl;
            a(x, x) -= cos_sum[k] * std::sin(rho[k]) * std::cos(ell[k]) / sl;
        }
    }
    return a;
}

ConvexPolyhedron move_on_rays(const ConvexPolyhedron& p, const Vec4& apex, const Eigen::VectorXd& heights) {
    std::vector<Vec4> v;
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        Vec4 t = tangent_toward(apex, p.vertices[i]);
        v.push_back(std::cos(heights[static_cast<int>(i)]) * apex + std::sin(heights[static_cast<int>(i)]) * t);
    }
    return from_faces(v, p.faces);
}

}  // namespace flipkit

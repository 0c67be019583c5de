// Fuchsian polyhedral surfaces of AdS_3 over the genus-2 octagon group:
// truncated orbit hulls, cone angles, the analytic Jacobian of the cone
// angles with respect to the heights, the prescribed-curvature solver and the
// dual surface.
//
// Coordinates: H = AdS_3 with x4 = 0 and x3 > 0 is the hyperbolic plane fixed
// by the group, N = (0,0,0,1) its future unit normal. The vertex over the
// base point p at height h is cos(h) p + sin(h) N.
#pragma once

#include "flipkit/forms.hpp"
#include "flipkit/trig.hpp"

#include <Eigen/Dense>

#include <vector>

namespace flipkit {

struct FuchsianGroup {
    int genus = 2;
    // Side pairings as elements of SL(2,R); they act on AdS_3 by conjugation
    // x -> g x g^{-1}, which fixes N and preserves H.
    std::vector<Mat2> lifts;
    std::vector<Mat4> generators;  // conjugation_action(lifts[k])
    double inradius = 0;           // of the regular fundamental octagon
    double circumradius = 0;

    int euler_characteristic() const { return 2 - 2 * genus; }
};

// Regular octagon group: g_k translates by twice the inradius along the
// direction at angle k pi/4 (k = 0..3) and maps the side at angle
// k pi/4 + pi onto the side at angle k pi/4.
FuchsianGroup genus2_group();

// Product g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3 in SL(2,R) (+-identity).
Mat2 surface_relation(const FuchsianGroup& g);

// Vertices of the fundamental octagon in H, counter-clockwise in the Klein
// chart (x1, x2) / x3.
std::vector<Vec4> fundamental_octagon(const FuchsianGroup& g);
double fundamental_domain_area(const FuchsianGroup& g);
// Strictly inside the octagon, at Klein distance > margin from its sides.
bool in_fundamental_domain(const FuchsianGroup& g, const Vec4& p, double margin = 0);

// Point of H with Klein coordinates (u, v), u^2 + v^2 < 1.
Vec4 h2_from_klein(double u, double v);
Vec4 ray_point(const Vec4& base, double height);

struct GroupElement {
    Mat2 lift = Mat2::Identity();
    Mat4 action = Mat4::Identity();
    int word_length = 0;
};

// Elements reachable by words of length <= word_len whose image of the
// octagon centre stays within the truncation radius for that length. The
// identity comes first.
std::vector<GroupElement> orbit_elements(const FuchsianGroup& g, int word_len);
double truncation_radius(const FuchsianGroup& g, int word_len);

struct FuchsianConfig {
    FuchsianGroup group;
    std::vector<Vec4> base_points;  // in H, inside the fundamental octagon
    std::vector<double> heights;    // in (0, pi/2)
    int word_len_cap = 10;
};

// A vertex of the orbit: elements[element] applied to fundamental vertex
// `orbit`.
struct VertexLabel {
    int element = 0;
    int orbit = 0;
    bool operator==(const VertexLabel& o) const { return element == o.element && orbit == o.orbit; }
};

struct SurfaceFace {
    std::vector<VertexLabel> vertices;  // counter-clockwise seen from above H
    Vec4 pole = Vec4::Zero();           // time-like unit; pole^{-1} s lies in H for the vertices s
    int orbit = 0;                      // face orbit under the group
    int element = 0;                    // this face = elements[element] (representative of its orbit)
};

struct StarNeighbour {
    VertexLabel label;
    bool true_edge = true;  // false: a diagonal added to triangulate a face
};

// Star of a fundamental vertex in the triangulated surface: the triangles
// (x, s_k, s_k+1) in counter-clockwise order.
struct PyramidStar {
    int vertex = 0;
    std::vector<StarNeighbour> neighbours;
};

struct FuchsianSurface {
    FuchsianConfig config;
    int word_length = 0;  // truncation at which the stars stabilised
    std::vector<GroupElement> elements;
    std::vector<Vec4> vertices;  // fundamental vertices
    // Every face incident to a fundamental vertex.
    std::vector<SurfaceFace> faces;
    int face_orbit_count = 0;
    std::vector<PyramidStar> stars;

    Vec4 point(const VertexLabel& v) const { return elements[v.element].action * vertices[v.orbit]; }
    Vec4 base_point(const VertexLabel& v) const { return elements[v.element].action * config.base_points[v.orbit]; }
    std::size_t size() const { return vertices.size(); }
};

// Convex hull of the truncated orbit, restricted to the faces around the
// fundamental vertices. Starts at word length 4 and lengthens until the stars
// agree for two consecutive increments. Throws GeometryError when a vertex is
// not in convex position and ConvergenceError when the cap is reached.
FuchsianSurface orbit_hull(const FuchsianConfig& cfg, int start_word_len = 4);

// Indices in s.faces of the faces around fundamental vertex x, in the
// rotational order of its star.
std::vector<int> faces_around(const FuchsianSurface& s, int x);

// Sum of the face angles at each fundamental vertex.
Eigen::VectorXd cone_angles(const FuchsianSurface& s);
// 2 pi - cone angle.
Eigen::VectorXd curvatures(const FuchsianSurface& s);

// Quantities of the pyramid over the star of a fundamental vertex; the apex
// is o = -N. Per neighbour k: apex-edge angles rho (at x) and rho_back (at
// s_k), edge length ell. Per triangle (x, s_k, s_k+1): apex angle d, wedge
// angle omega and the two base dihedral terms (sinh alpha at s_k and at s_k+1).
struct StarGeometry {
    std::vector<double> rho, rho_back, ell;
    std::vector<double> apex_angle, wedge;
    std::vector<double> sinh_alpha_first, sinh_alpha_second;
    double cone_angle = 0;
};
StarGeometry star_geometry(const FuchsianSurface& s, int x);

// Cone angles through the HS^2 triangle kernels (sum of wedge angles).
Eigen::VectorXd cone_angles_from_kernels(const FuchsianSurface& s);

// One contribution a_xy^j to the Jacobian entry (row, col).
struct JacobianTerm {
    int row = 0, col = 0;
    int neighbour = 0;      // index j in the star of row
    bool same_orbit = false;
    bool true_edge = true;
    double value = 0;
};
std::vector<JacobianTerm> jacobian_terms(const FuchsianSurface& s);
// a_xy = d omega_x / d h_y.
Eigen::MatrixXd jacobian(const FuchsianSurface& s);
// |a_xx| - sum_{y != x} |a_yx| per column; positive means dominant.
Eigen::VectorXd column_dominance_margin(const Eigen::MatrixXd& a);
double condition_number(const Eigen::MatrixXd& a);

// ---- prescribed curvature

// Throws GeometryError unless every target is negative and their sum exceeds
// 2 pi chi.
void check_targets(const FuchsianGroup& g, const Eigen::VectorXd& targets);

struct SolveOptions {
    int max_iterations = 60;      // Newton steps per continuation stage
    int max_stages = 64;          // continuation stages
    double tolerance = 1e-8;      // max-norm residual on curvatures
    std::vector<double> initial_heights;  // empty: all 0.5
    int word_len_cap = 10;
};

struct SolveResult {
    std::vector<double> heights;
    Eigen::VectorXd achieved;
    double residual = 0;
    double jacobian_condition = 0;
    int iterations = 0;
    int stages = 0;
    bool used_continuation = false;
};

// Heights over the base points with the target curvatures. Throws
// GeometryError for targets outside K(n) and ConvergenceError when Newton
// with continuation does not reach the tolerance.
SolveResult solve_prescribed_curvature(const FuchsianGroup& g, const std::vector<Vec4>& base_points,
                                       const Eigen::VectorXd& targets, const SolveOptions& opt = {});

// ---- dual surface

// Vertices are the face poles, one per entry of s.faces; face i is dual to
// fundamental vertex i and lies in its plane x_i^*.
struct DualSurface {
    std::vector<Vec4> vertices;
    std::vector<std::vector<int>> faces;
    std::vector<double> areas;
    // Unit tangent of the reflected half-ray where it meets face i.
    std::vector<Vec4> reflected_ray_directions;
    std::vector<Vec4> reflected_ray_feet;
};
DualSurface minkowski_dual(const FuchsianSurface& s);

// Pole of the plane spanned by a dual face (the dual of the dual), one per
// fundamental vertex, canonical representative.
std::vector<Vec4> dual_of_dual(const DualSurface& d);

}  // namespace flipkit

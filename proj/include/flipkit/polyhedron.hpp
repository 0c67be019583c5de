// Convex polyhedra of the open upper hemisphere S^3_+ = {x in S^3 : x1 > 0}.
#pragma once

#include "flipkit/forms.hpp"
#include "flipkit/polygons.hpp"

#include <vector>

namespace flipkit {

enum class Degeneracy { None, Hosohedron, Dihedron };

struct ConvexPolyhedron {
    std::vector<Vec4> vertices;
    // Vertex cycles, counter-clockwise seen from outside in the projective
    // chart x -> (x2, x3, x4) / x1.
    std::vector<std::vector<int>> faces;
    // Inward unit normal of each face: <pole, x> >= 0 on the polyhedron.
    std::vector<Vec4> poles;
    // Hosohedra and dihedra (two antipodal vertices or two faces) cannot be
    // stored as vertex/face lists; they only carry this flag.
    Degeneracy degeneracy = Degeneracy::None;
};

struct PolyEdge {
    int a = 0, b = 0;        // a -> b is counter-clockwise in left_face
    int left_face = 0;
    int right_face = 0;
};

// Convex hull of points of S^3_+. Interior points are dropped; the output
// keeps the remaining points in input order. Coplanar faces (poles within
// tol().merge) are merged.
ConvexPolyhedron hull(const std::vector<Vec4>& points);

// Validates and completes a vertex/face description: computes the poles,
// fixes face orientation and checks planarity, strict convexity and Euler
// characteristic. Throws GeometryError.
ConvexPolyhedron from_faces(const std::vector<Vec4>& vertices, const std::vector<std::vector<int>>& faces);

// Vertex i of the dual is the pole of face i; face j of the dual is dual to
// vertex j. Throws if some pole leaves the open hemisphere.
ConvexPolyhedron polar_dual(const ConvexPolyhedron& p);

std::vector<PolyEdge> edges(const ConvexPolyhedron& p);

// Faces containing vertex v in rotational order.
std::vector<int> faces_around(const ConvexPolyhedron& p, int v);

// Exterior dihedral angle along an edge: cos = <pole_left, pole_right>.
double exterior_dihedral(const ConvexPolyhedron& p, const PolyEdge& e);

// Polar link of a vertex: the outward unit normals of the incident faces, as
// a polygon on the unit sphere of the tangent space (coordinates in
// orthonormal_frame(vertex)), counter-clockwise.
std::vector<Vec3> link(const ConvexPolyhedron& p, int v);

std::vector<Vec4> face_points(const ConvexPolyhedron& p, int f);
double face_area(const ConvexPolyhedron& p, int f);
// Sum of face angles at a vertex.
double cone_angle(const ConvexPolyhedron& p, int v);

// Congruence up to an isometry of S^3 (orientation reversing allowed).
// Vertices are matched through the face structure, then fitted by an
// orthogonal map; true when every vertex lands within tolerance.
bool congruent(const ConvexPolyhedron& p, const ConvexPolyhedron& q, double tolerance);

// Chart coordinates (x2, x3, x4) / x1.
inline Vec3 chart(const Vec4& x) { return Vec3(x[1], x[2], x[3]) / x[0]; }

}  // namespace flipkit

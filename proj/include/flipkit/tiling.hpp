// Flippable tilings of the round sphere S^2 = unit sphere of e* (coordinates
// x2, x3, x4 of R^4).
#pragma once

#include "flipkit/polygons.hpp"
#include "flipkit/polyhedron.hpp"

#include <array>
#include <string>
#include <vector>

namespace flipkit {

enum class Color { Black, White };
enum class Handedness { Left, Right };
enum class Side { Left, Right };
enum class Position { Forward, Backward };

// Which projection of a polyhedron is taken: x -> a^{-1} x (Left) or
// x -> x a^{-1} (Right). The left projection yields a right tiling.
enum class ProjectionSide { Left, Right };

Handedness opposite(Handedness h);

struct TilingFace {
    Color color = Color::White;
    // Counter-clockwise seen from outside the sphere. Corners of angle pi
    // (midpoints of digon sides) are allowed.
    std::vector<int> vertices;
};

// The part of a tiling edge bounding one face.
struct EdgeSegment {
    int face = 0;
    Side side = Side::Left;
    Position position = Position::Forward;
    double t0 = 0, t1 = 0;  // parameter interval along the edge, t0 < t1
};

// A tiling edge is the geodesic arc origin -> origin cos t + tangent sin t,
// t in [0, length]. Arcs of length >= pi occur in digon tilings.
struct TilingEdge {
    std::array<int, 2> ends{0, 0};  // vertex indices at t = 0 and t = length
    Vec3 origin = Vec3::UnitX();
    Vec3 tangent = Vec3::UnitY();
    double length = 0;
    std::vector<EdgeSegment> segments;  // two per side, one of each color
};

struct SphericalTiling {
    Handedness handedness = Handedness::Right;
    // A vertex is a corner of one black and one white face; two vertices may
    // share coordinates (e.g. the poles of a lune tiling).
    std::vector<Vec3> vertices;
    std::vector<TilingFace> faces;
    std::vector<TilingEdge> edges;
};

Vec3 edge_point(const TilingEdge& e, double t);

// Left/right projection of a convex polyhedron. Faces are emitted black
// first (one per vertex of P, in vertex order) then white (one per face of P,
// in face order). Face poles are the inward normals.
SphericalTiling project(const ConvexPolyhedron& p, ProjectionSide side);

struct ValidationReport {
    bool ok = true;
    std::string check;    // name of the failed check
    std::string message;
};

// Checks, in order: structure, face convexity, total area 4 pi, segment
// geometry (each face side lies on an edge, segments on each side are
// complementary, equal lengths per color), the handedness rule on the labels,
// and the labels against the geometry. Reports the first violation.
ValidationReport validate_tiling(const SphericalTiling& t);

// White polyhedron: develops the white faces around every black face and
// glues. Hosohedra (two black faces) and dihedra (two white faces) are
// returned flagged and empty. Throws GeometryError when the development does
// not close up or the result is not convex.
ConvexPolyhedron white_polyhedron(const SphericalTiling& t);
ConvexPolyhedron black_polyhedron(const SphericalTiling& t);

// Swaps the colors; the handedness reverses.
SphericalTiling recolor(const SphericalTiling& t);

// Flip: the projection of the white polyhedron on the other side.
SphericalTiling flip(const SphericalTiling& t);

struct ConeMetric {
    int curvature = 1;
    // One cone point per face of the collapsed color; cone_faces[i] is that face.
    std::vector<int> cone_faces;
    std::vector<double> cone_angles;
    // Faces glued to form the surface.
    std::vector<int> glued_faces;
};

// Black metric: black faces glued along the edges; the cone points are the
// white faces. The white metric is the reverse.
ConeMetric black_metric(const SphericalTiling& t);
ConeMetric white_metric(const SphericalTiling& t);

double face_area(const SphericalTiling& t, int f);
PolygonSpectrum face_spectrum(const SphericalTiling& t, int f);
// Indices of corners whose angle is less than pi (actual vertices of the face).
std::vector<int> true_corners(const SphericalTiling& t, int f);

// Black P and -P with white digons between them (P convex, counter-clockwise,
// in an open hemisphere). Right handedness draws each edge along the
// counter-clockwise side of P, left handedness along the clockwise side.
SphericalTiling make_antipodal_tiling(const std::vector<Vec3>& polygon, Handedness h);
// Two great circles through the poles at the given angle: two black and two
// white lunes, two full-circle edges.
SphericalTiling make_lune_tiling(double angle, Handedness h);

// Congruence under a rotation of S^2 preserving colors and labels up to the
// combinatorial correspondence; compares vertices within tolerance.
bool tilings_congruent(const SphericalTiling& a, const SphericalTiling& b, double tolerance);

// Faces sorted by color (black first) then least vertex index; vertices are
// renumbered in order of first appearance. Geometry is unchanged.
SphericalTiling canonical_order(const SphericalTiling& t);

}  // namespace flipkit

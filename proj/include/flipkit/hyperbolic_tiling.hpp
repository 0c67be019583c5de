// Equivariant flippable tilings of the hyperbolic plane H = {x4 = 0, x3 > 0}
// obtained by projecting a Fuchsian surface along its face planes, and the
// hyperbolic flip.
#pragma once

#include "flipkit/fuchsian.hpp"
#include "flipkit/tiling.hpp"

#include <array>
#include <vector>

namespace flipkit {

struct HTilingVertex {
    Vec4 point = Vec4(0, 0, 1, 0);
    VertexLabel black;  // surface vertex whose black face has this corner
    int white = 0;      // index of the white face having this corner
};

struct HTilingFace {
    Color color = Color::White;
    std::vector<int> vertices;  // counter-clockwise in the Klein chart
    // White: face orbit and group element; black: vertex orbit, element 0.
    int orbit = 0;
    int element = 0;
};

// One edge of the surface seen in the tiling: the corners (x, F), (x, G),
// (y, F), (y, G) for the edge x y between faces F and G. The four segments
// lie on one geodesic.
struct HTilingEdge {
    std::array<int, 4> corners{0, 0, 0, 0};
};

// Only the black faces of the fundamental vertices are stored; every white
// face incident to them is. The rest of the tiling is the image under the
// group.
struct HyperbolicTiling {
    Handedness handedness = Handedness::Right;
    FuchsianGroup group;
    std::vector<GroupElement> elements;
    int vertex_orbits = 0;
    int face_orbits = 0;
    std::vector<HTilingVertex> vertices;
    std::vector<HTilingFace> faces;
    std::vector<HTilingEdge> edges;
};

// x -> a_F^{-1} x (Left, giving a right tiling) or x -> x a_F^{-1} (Right).
HyperbolicTiling ads_project(const FuchsianSurface& s, ProjectionSide side);

// Checks: vertices on H, convex faces, equivariance of the white faces,
// collinear and equal segments along every edge, the handedness rule.
ValidationReport validate_hyperbolic_tiling(const HyperbolicTiling& t);

struct HyperbolicReconstruction {
    std::vector<Vec4> vertices;     // fundamental vertices of the surface, x4 > 0
    std::vector<Vec4> face_poles;   // one per face orbit
    int nullity = 0;                // dimension of the solution space of the linear system
    double residual = 0;
};

// Recovers the surface vertices and face poles from the tiling by solving the
// linear incidence system; throws GeometryError unless the solution is unique
// up to scale.
HyperbolicReconstruction reconstruct_surface(const HyperbolicTiling& t);

// Projection of the reconstructed surface on the other side.
HyperbolicTiling hyperbolic_flip(const HyperbolicTiling& t);

double h_face_area(const HyperbolicTiling& t, int f);
PolygonSpectrum h_face_spectrum(const HyperbolicTiling& t, int f);
// Sum over white face orbits / over black faces.
double white_area(const HyperbolicTiling& t);
double black_area(const HyperbolicTiling& t);

// Same combinatorics and vertex coordinates within tolerance.
bool hyperbolic_tilings_equal(const HyperbolicTiling& a, const HyperbolicTiling& b, double tolerance);

}  // namespace flipkit

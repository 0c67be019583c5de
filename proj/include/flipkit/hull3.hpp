// Incremental convex hull of points in R^3.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

namespace flipkit {

struct HullTriangle {
    std::array<int, 3> v;  // counter-clockwise seen from outside
    Eigen::Vector3d normal;  // outward unit normal
    double offset = 0;       // normal . x = offset on the plane
};

// Triangulated boundary of the convex hull. Points within eps (relative to the
// bounding-box diameter) of an existing face are not added as vertices.
// Throws GeometryError when the points are coplanar.
std::vector<HullTriangle> convex_hull_3d(const std::vector<Eigen::Vector3d>& pts, double rel_eps = 1e-11);

// Groups edge-adjacent triangles for which same_plane(i, j) holds into
// polygons. Each polygon is returned as a counter-clockwise vertex cycle
// together with the indices of its triangles.
struct MergedFace {
    std::vector<int> cycle;
    std::vector<int> triangles;
};
std::vector<MergedFace> merge_coplanar(const std::vector<HullTriangle>& tris,
                                       const std::function<bool(int, int)>& same_plane);

}  // namespace flipkit

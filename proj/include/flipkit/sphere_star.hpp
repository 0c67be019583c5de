// Spherical counterpart of the Fuchsian Jacobian: vertices of a convex
// polyhedron of S^3 with triangular faces move on the geodesic rays from an
// interior point o, and the cone angles are differentiated with respect to the
// distances to o.
#pragma once

#include "flipkit/polyhedron.hpp"

#include <Eigen/Dense>

namespace flipkit {

// Distance from o to each vertex.
Eigen::VectorXd star_heights(const ConvexPolyhedron& p, const Vec4& apex);

// a_xy = d omega_x / d h_y with the faces kept (triangles). Throws
// GeometryError for non-triangular faces or an apex outside P.
Eigen::MatrixXd sph_star_jacobian(const ConvexPolyhedron& p, const Vec4& apex = Vec4(1, 0, 0, 0));

// p with every vertex moved along its ray from the apex to the given height.
ConvexPolyhedron move_on_rays(const ConvexPolyhedron& p, const Vec4& apex, const Eigen::VectorXd& heights);

}  // namespace flipkit

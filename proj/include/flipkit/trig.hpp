// Triangle laws used by the two Jacobian assemblies: spherical triangles,
// de Sitter triangles with one time-like edge, time-like triangles of AdS_3
// and mixed H^2/dS^2 triangles. Every solver takes two sides and the angle
// between them.
#pragma once

#include "flipkit/errors.hpp"

namespace flipkit {

// Sides a, b, c; the angle opposite a side carries the matching Greek letter.
struct Triangle {
    double a = 0, b = 0, c = 0;
    double alpha = 0, beta = 0, gamma = 0;
};

// ---- spherical: sides and angles in (0, pi)
Triangle sph_solve(double a, double c, double beta);

struct SphPartials {
    double db_da = 0;      // cos gamma
    double dalpha_da = 0;  // sin gamma / sin b
    double dalpha_dc = 0;  // -sin alpha cos b / sin b
};
SphPartials sph_partials(double a, double c, double beta);

// ---- contractible triangle of dS^2: space-like sides a, c, time-like side
// i b, angles alpha, i beta, gamma. All six numbers are real.
Triangle ds_solve(double a, double c, double beta);

// ---- triangle of AdS_3 in a time-like plane: time-like sides i a, i c and a
// space-like side b between them; beta is the (hyperbolic) angle at the common
// endpoint of the time-like sides.
Triangle ads_timelike_solve(double a, double c, double beta);

struct AdsPartials {
    double dalpha_da = 0;          // cosh gamma / sinh b
    double dalpha_dc = 0;          // -cosh b cosh alpha / sinh b
    double isosceles_dalpha = 0;   // cosh alpha (1 - cosh b) / sinh b, meaningful for a = c
};
AdsPartials ads_partials(double a, double c, double beta);

// ---- triangle of HS^2: two de Sitter vertices joined by a space-like side a
// and a hyperbolic vertex with sides b, c and angle alpha.
double hs2_side(double b, double c, double alpha);
// Full triangle; throws DegenerateTriangle when sin a vanishes.
Triangle hs2_laws(double b, double c, double alpha);
// d a / d b = sinh gamma.
double hs2_partial_a_b(double b, double c, double alpha);

// Position of a time-like half-plane with respect to two space-like
// half-planes making dihedral angles alpha1, alpha2 with it.
enum class ConvexitySign { Coplanar, ConvexSide, NotConvexSide };
ConvexitySign convexity_sign(double alpha1, double alpha2);

}  // namespace flipkit

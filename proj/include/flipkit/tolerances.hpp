#pragma once

namespace flipkit {

// Numerical thresholds shared by all modules. The process-wide instance is
// multiplied by the FLIPKIT_TOL environment variable when it is set.
struct Tolerances {
    double norm = 1e-10;        // quadric membership, unit norms
    double zero_coord = 1e-12;  // "nonzero" test for canonical representatives
    double plane = 1e-9;        // point-on-plane tests
    double merge = 1e-8;        // coplanar faces: poles agree within this
    double hemisphere = 1e-8;   // minimum first coordinate in the open hemisphere
    double align = 1e-7;        // isometry alignment of tilings and polyhedra
    double law = 1e-10;         // trigonometric identities on solver output
    double degenerate = 1e-8;   // triangle degeneracy (sin of a side or angle)
    double convexity = 1e-10;   // strict convexity of configurations
    double solve = 1e-8;        // Newton residual (max norm)
    double area = 1e-8;         // covering test on total area

    Tolerances scaled(double factor) const;
};

// Defaults scaled by FLIPKIT_TOL (read once).
const Tolerances& tol();

}  // namespace flipkit

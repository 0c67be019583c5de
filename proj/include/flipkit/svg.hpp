// SVG pictures of tilings: spherical tilings in stereographic projection from
// the pole (0, 0, -1), hyperbolic tilings in the Poincare disk. Black faces
// are filled dark, white faces light, tiling edges stroked. Output is
// deterministic.
#pragma once

#include "flipkit/hyperbolic_tiling.hpp"
#include "flipkit/tiling.hpp"

#include <string>

namespace flipkit {

struct SvgStats {
    int faces = 0;  // face regions drawn
    int edges = 0;  // tiling edges drawn
};

// Geodesic arcs are sampled with steps of at most max_step (radians on the
// sphere, hyperbolic length on H).
std::string render_stereographic(const SphericalTiling& t, SvgStats* stats = nullptr, double max_step = 0.01);
std::string render_poincare(const HyperbolicTiling& t, SvgStats* stats = nullptr, double max_step = 0.01);

}  // namespace flipkit

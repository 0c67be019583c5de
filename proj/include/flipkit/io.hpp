// JSON documents polyhedron.v1, tiling.v1 (ambient S2 or H2), fuchsian.v1
// and solution.v1. Writers are deterministic: keys in a fixed order, numbers
// with 17 significant digits. Readers reject unknown fields and malformed
// structure with ParseError; geometric checks are left to the modules.
#pragma once

#include "flipkit/fuchsian.hpp"
#include "flipkit/hyperbolic_tiling.hpp"
#include "flipkit/polyhedron.hpp"
#include "flipkit/tiling.hpp"

#include <string>
#include <variant>
#include <vector>

namespace flipkit {

// %.17g; throws GeometryError on a non-finite value.
std::string format_number(double x);

std::string write_polyhedron(const ConvexPolyhedron& p);
// Faces optional: without them the polyhedron is the hull of the vertices.
ConvexPolyhedron read_polyhedron(const std::string& text);

using AnyTiling = std::variant<SphericalTiling, HyperbolicTiling>;
std::string write_tiling(const SphericalTiling& t);
std::string write_tiling(const HyperbolicTiling& t);
AnyTiling read_tiling(const std::string& text);

struct FuchsianDocument {
    int genus = 2;
    std::vector<Vec4> base_points;  // x4 = 0
    std::vector<std::string> labels;
    std::vector<double> heights;    // exactly one of heights / targets is set
    std::vector<double> targets;
    int word_len_cap = 10;
};
std::string write_fuchsian(const FuchsianDocument& d);
FuchsianDocument read_fuchsian(const std::string& text);
// Throws UnsupportedError for a genus other than 2.
FuchsianConfig to_config(const FuchsianDocument& d);

struct SolutionDocument {
    std::vector<double> heights;
    std::vector<double> achieved_curvatures;
    double residual = 0;
    double jacobian_condition = 0;
    int iterations = 0;
    int stages = 0;
    // Areas of the dual faces and max |area + k| over them.
    std::vector<double> dual_face_areas;
    double dual_area_error = 0;
    // Largest height difference over random restarts (0 without restarts).
    int restarts = 0;
    double restart_spread = 0;
};
std::string write_solution(const SolutionDocument& d);
SolutionDocument read_solution(const std::string& text);

enum class DocumentKind { Polyhedron, Tiling, Fuchsian, Solution };
// From the "schema" field, or from the characteristic keys when it is absent.
DocumentKind detect_kind(const std::string& text);

}  // namespace flipkit

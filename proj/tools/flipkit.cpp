// flipkit <project|flip|dual|reconstruct|solve|render|check> [flags]
//
// Exit status: 0 success, 2 parse or usage error, 3 geometry error or failed
// check, 4 no convergence.

#include "flipkit/fuchsian.hpp"
#include "flipkit/hyperbolic_tiling.hpp"
#include "flipkit/io.hpp"
#include "flipkit/polyhedron.hpp"
#include "flipkit/svg.hpp"
#include "flipkit/tiling.hpp"
#include "flipkit/tolerances.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

using namespace flipkit;

namespace {

constexpr double pi = std::numbers::pi;

struct RunConfig {
    std::string input = "-";
    std::vector<std::string> inputs;
    std::string output = "-";
    std::string side = "left";
    std::string projection;
    std::string reference;
    std::uint64_t seed = 1;
    int restarts = 0;
    std::optional<double> tol_scale;
};

std::string read_input(const std::string& path) {
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
}

ProjectionSide parse_side(const std::string& s) { return s == "right" ? ProjectionSide::Right : ProjectionSide::Left; }

// ---- commands

std::string cmd_project(const RunConfig& rc) {
    const std::string text = read_input(rc.input);
    if (detect_kind(text) == DocumentKind::Fuchsian) {
        FuchsianDocument d = read_fuchsian(text);
        if (d.heights.empty()) throw ParseError("project needs a fuchsian.v1 document with heights");
        return write_tiling(ads_project(orbit_hull(to_config(d)), parse_side(rc.side)));
    }
    return write_tiling(canonical_order(project(read_polyhedron(text), parse_side(rc.side))));
}

std::string cmd_flip(const RunConfig& rc) {
    AnyTiling t = read_tiling(read_input(rc.input));
    if (auto* s = std::get_if<SphericalTiling>(&t)) return write_tiling(canonical_order(flip(*s)));
    return write_tiling(hyperbolic_flip(std::get<HyperbolicTiling>(t)));
}

std::string cmd_dual(const RunConfig& rc) { return write_polyhedron(polar_dual(read_polyhedron(read_input(rc.input)))); }

std::string cmd_reconstruct(const RunConfig& rc) {
    AnyTiling t = read_tiling(read_input(rc.input));
    if (auto* s = std::get_if<SphericalTiling>(&t)) return write_polyhedron(white_polyhedron(*s));
    const HyperbolicTiling& h = std::get<HyperbolicTiling>(t);
    HyperbolicReconstruction r = reconstruct_surface(h);
    FuchsianDocument d;
    d.genus = h.group.genus;
    for (std::size_t i = 0; i < r.vertices.size(); ++i) {
        const Vec4& x = r.vertices[i];
        const double c = std::sqrt(x[2] * x[2] - x[0] * x[0] - x[1] * x[1]);
        d.base_points.push_back(Vec4(x[0] / c, x[1] / c, x[2] / c, 0));
        d.labels.push_back("r" + std::to_string(i));
        d.heights.push_back(std::atan2(x[3], c));
    }
    return write_fuchsian(d);
}

std::string cmd_solve(const RunConfig& rc) {
    FuchsianDocument d = read_fuchsian(read_input(rc.input));
    if (d.targets.empty()) throw ParseError("solve needs a fuchsian.v1 document with targets");
    FuchsianConfig cfg = to_config(d);
    Eigen::VectorXd k = Eigen::Map<const Eigen::VectorXd>(d.targets.data(), static_cast<Eigen::Index>(d.targets.size()));
    SolveOptions opt;
    opt.word_len_cap = d.word_len_cap;
    SolveResult r = solve_prescribed_curvature(cfg.group, cfg.base_points, k, opt);

    SolutionDocument out;
    out.heights = r.heights;
    out.achieved_curvatures.assign(r.achieved.data(), r.achieved.data() + r.achieved.size());
    out.residual = r.residual;
    out.jacobian_condition = r.jacobian_condition;
    out.iterations = r.iterations;
    out.stages = r.stages;

    cfg.heights = r.heights;
    DualSurface dual = minkowski_dual(orbit_hull(cfg));
    out.dual_face_areas = dual.areas;
    for (std::size_t i = 0; i < dual.areas.size(); ++i)
        out.dual_area_error = std::max(out.dual_area_error, std::abs(dual.areas[i] + r.achieved[static_cast<Eigen::Index>(i)]));

    // uniqueness probe from random starting heights
    std::mt19937_64 rng(rc.seed);
    std::uniform_real_distribution<double> h0(0.2, 1.3);
    for (int j = 0; j < rc.restarts; ++j) {
        SolveOptions o = opt;
        // starting heights must put the orbit in convex position
        FuchsianConfig start = cfg;
        for (;;) {
            for (auto& h : start.heights) h = h0(rng);
            try {
                orbit_hull(start);
                break;
            } catch (const GeometryError&) {
            }
        }
        o.initial_heights = start.heights;
        SolveResult s = solve_prescribed_curvature(cfg.group, cfg.base_points, k, o);
        for (std::size_t i = 0; i < s.heights.size(); ++i)
            out.restart_spread = std::max(out.restart_spread, std::abs(s.heights[i] - r.heights[i]));
    }
    out.restarts = rc.restarts;
    return write_solution(out);
}

std::string cmd_render(const RunConfig& rc) {
    AnyTiling t = read_tiling(read_input(rc.input));
    const bool sphere = std::holds_alternative<SphericalTiling>(t);
    const std::string proj = rc.projection.empty() ? (sphere ? "stereographic" : "poincare") : rc.projection;
    if (sphere != (proj == "stereographic"))
        throw ParseError("projection " + proj + " does not apply to a " + (sphere ? "spherical" : "hyperbolic") + " tiling");
    SvgStats st;
    std::string svg = sphere ? render_stereographic(std::get<SphericalTiling>(t), &st) : render_poincare(std::get<HyperbolicTiling>(t), &st);
    std::cerr << "rendered " << st.faces << " faces, " << st.edges << " edges\n";
    return svg;
}

// ---- check

struct Check {
    std::string name;
    bool ok = true;
    std::string detail;
};

void add(std::vector<Check>& out, const std::string& name, double error, double bound) {
    out.push_back({name, error <= bound, "error " + format_number(error) + ", bound " + format_number(bound)});
}

template <class F>
void guarded(std::vector<Check>& out, const std::string& name, F&& f) {
    try {
        f();
    } catch (const UnsupportedError& e) {
        out.push_back({name, true, std::string("skipped: ") + e.what()});
    } catch (const Error& e) {
        out.push_back({name, false, e.what()});
    }
}

std::vector<Check> check_polyhedron(const ConvexPolyhedron& p) {
    std::vector<Check> out;
    if (p.degeneracy != Degeneracy::None) {
        out.push_back({"degenerate", true, "hosohedron or dihedron: no further checks"});
        return out;
    }
    const int e = static_cast<int>(edges(p).size());
    const int chi = static_cast<int>(p.vertices.size()) - e + static_cast<int>(p.faces.size());
    out.push_back({"euler", chi == 2, "V - E + F = " + std::to_string(chi)});
    guarded(out, "duality_involution", [&] {
        ConvexPolyhedron q = polar_dual(polar_dual(p));
        double err = 0;
        for (std::size_t i = 0; i < p.vertices.size(); ++i) err = std::max(err, (q.vertices[i] - p.vertices[i]).norm());
        add(out, "duality_involution", err, 1e-9);
    });
    double area = 0;
    for (std::size_t f = 0; f < p.faces.size(); ++f) area += face_area(p, static_cast<int>(f));
    for (std::size_t v = 0; v < p.vertices.size(); ++v) area += spherical_polygon_area(link(p, static_cast<int>(v)));
    add(out, "faces_and_links_cover_sphere", std::abs(area - 4 * pi), 1e-8);
    for (auto side : {ProjectionSide::Left, ProjectionSide::Right}) {
        const std::string name = side == ProjectionSide::Left ? "left_projection" : "right_projection";
        guarded(out, name, [&] {
            ValidationReport r = validate_tiling(project(p, side));
            out.push_back({name, r.ok, r.ok ? "valid tiling" : r.check + ": " + r.message});
        });
    }
    return out;
}

std::vector<Check> check_spherical(const SphericalTiling& t, const std::optional<SphericalTiling>& reference) {
    std::vector<Check> out;
    ValidationReport r = validate_tiling(t);
    out.push_back({"valid", r.ok, r.ok ? "valid tiling" : r.check + ": " + r.message});
    if (!r.ok) return out;
    guarded(out, "flip_twice", [&] {
        const bool ok = tilings_congruent(flip(flip(t)), t, tol().align);
        out.push_back({"flip_twice", ok, ok ? "congruent to the input" : "not congruent to the input"});
    });
    ConeMetric m = black_metric(t);
    double err = 0;
    for (std::size_t i = 0; i < m.cone_faces.size(); ++i)
        err = std::max(err, std::abs(m.cone_angles[i] - (2 * pi - face_area(t, m.cone_faces[i]))));
    add(out, "black_metric_cone_angles", err, 1e-8);
    if (reference) {
        const bool ok = tilings_congruent(t, *reference, tol().align);
        out.push_back({"reference", ok, ok ? "congruent to the reference" : "not congruent to the reference"});
    }
    return out;
}

std::vector<Check> check_hyperbolic(const HyperbolicTiling& t) {
    std::vector<Check> out;
    ValidationReport r = validate_hyperbolic_tiling(t);
    out.push_back({"valid", r.ok, r.ok ? "valid tiling" : r.check + ": " + r.message});
    if (!r.ok) return out;
    guarded(out, "flip_twice", [&] {
        const bool ok = hyperbolic_tilings_equal(hyperbolic_flip(hyperbolic_flip(t)), t, 1e-7);
        out.push_back({"flip_twice", ok, ok ? "equal to the input" : "differs from the input"});
    });
    add(out, "area", std::abs(white_area(t) + black_area(t) - fundamental_domain_area(t.group)), 1e-8);
    return out;
}

std::vector<Check> check_fuchsian(const FuchsianDocument& d) {
    std::vector<Check> out;
    FuchsianConfig cfg = to_config(d);
    if (d.heights.empty()) {
        guarded(out, "targets", [&] {
            check_targets(cfg.group, Eigen::Map<const Eigen::VectorXd>(d.targets.data(), static_cast<Eigen::Index>(d.targets.size())));
            out.push_back({"targets", true, "negative, total above 2 pi chi"});
        });
        return out;
    }
    FuchsianSurface s;
    try {
        s = orbit_hull(cfg);
    } catch (const GeometryError& e) {
        out.push_back({"convex_position", false, e.what()});
        return out;
    }
    out.push_back({"convex_position", true, "orbit hull stable at word length " + std::to_string(s.word_length)});
    Eigen::VectorXd k = curvatures(s);
    out.push_back({"negative_curvature", k.maxCoeff() < 0, "max curvature " + format_number(k.maxCoeff())});
    Eigen::MatrixXd a = jacobian(s);
    const double margin = column_dominance_margin(a).minCoeff();
    out.push_back({"diagonal_dominance", margin > 0, "least column margin " + format_number(margin)});
    bool signs = true;
    for (const auto& term : jacobian_terms(s))
        if (!term.same_orbit && term.true_edge && term.row != term.col && !(term.value < 0)) signs = false;
    out.push_back({"cross_orbit_signs", signs, signs ? "negative on true edges" : "a true cross-orbit term is not negative"});
    DualSurface dual = minkowski_dual(s);
    double err = 0;
    for (std::size_t i = 0; i < dual.areas.size(); ++i) err = std::max(err, std::abs(dual.areas[i] + k[static_cast<Eigen::Index>(i)]));
    add(out, "dual_face_areas", err, 1e-7);
    return out;
}

std::vector<Check> check_solution(const SolutionDocument& d) {
    std::vector<Check> out;
    add(out, "residual", d.residual, tol().solve);
    add(out, "dual_face_areas", d.dual_area_error, 1e-7);
    if (d.restarts > 0) add(out, "restarts", d.restart_spread, 1e-6);
    return out;
}

nlohmann::ordered_json check_file(const std::string& path, const std::optional<SphericalTiling>& reference, int& status) {
    nlohmann::ordered_json rep;
    rep["file"] = path;
    std::vector<Check> checks;
    try {
        const std::string text = read_input(path);
        switch (detect_kind(text)) {
            case DocumentKind::Polyhedron:
                rep["schema"] = "polyhedron.v1";
                checks = check_polyhedron(read_polyhedron(text));
                break;
            case DocumentKind::Tiling: {
                rep["schema"] = "tiling.v1";
                AnyTiling t = read_tiling(text);
                if (auto* s = std::get_if<SphericalTiling>(&t))
                    checks = check_spherical(*s, reference);
                else
                    checks = check_hyperbolic(std::get<HyperbolicTiling>(t));
                break;
            }
            case DocumentKind::Fuchsian:
                rep["schema"] = "fuchsian.v1";
                checks = check_fuchsian(read_fuchsian(text));
                break;
            case DocumentKind::Solution:
                rep["schema"] = "solution.v1";
                checks = check_solution(read_solution(text));
                break;
        }
    } catch (const Error& e) {
        rep["ok"] = false;
        rep["error"] = e.what();
        status = e.exit_code();
        return rep;
    }
    bool ok = true;
    rep["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        ok = ok && c.ok;
        rep["checks"].push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    }
    rep["ok"] = ok;
    status = ok ? 0 : 3;
    return rep;
}

int cmd_check(const RunConfig& rc, bool batch) {
    std::optional<SphericalTiling> reference;
    if (!rc.reference.empty()) {
        AnyTiling t = read_tiling(read_input(rc.reference));
        if (!std::holds_alternative<SphericalTiling>(t)) throw ParseError("the reference must be a spherical tiling");
        reference = std::get<SphericalTiling>(t);
    }
    std::vector<std::string> files = rc.inputs.empty() ? std::vector<std::string>{"-"} : rc.inputs;
    if (!batch && files.size() > 1) throw ParseError("several inputs need --batch");
    std::vector<int> status(files.size(), 0);
    std::vector<std::future<nlohmann::ordered_json>> jobs;
    for (std::size_t i = 0; i < files.size(); ++i)
        jobs.push_back(std::async(batch ? std::launch::async : std::launch::deferred,
                                  [&, i] { return check_file(files[i], reference, status[i]); }));
    nlohmann::ordered_json report = nlohmann::ordered_json::array();
    for (auto& j : jobs) report.push_back(j.get());
    write_output(rc.output, (batch ? report : report[0]).dump(2) + "\n");
    int worst = 0;
    for (int s : status) worst = std::max(worst, s);
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flipkit: flippable tilings of the sphere and of hyperbolic surfaces"};
    app.require_subcommand(1);
    RunConfig rc;
    bool batch = false;
    app.add_option("--tol", rc.tol_scale, "scale all tolerances (overrides FLIPKIT_TOL)")->check(CLI::PositiveNumber);

    auto io = [&](CLI::App* sub) {
        sub->add_option("input", rc.input, "input document, - for stdin");
        sub->add_option("-o,--out", rc.output, "output file, - for stdout");
    };
    auto* project = app.add_subcommand("project", "projection of a polyhedron.v1 or fuchsian.v1 document to a tiling.v1");
    io(project);
    project->add_option("--side", rc.side, "left or right")->check(CLI::IsMember({"left", "right"}));
    auto* flip_cmd = app.add_subcommand("flip", "flip of a tiling.v1 document");
    io(flip_cmd);
    auto* dual_cmd = app.add_subcommand("dual", "polar dual of a polyhedron.v1 document");
    io(dual_cmd);
    auto* reconstruct = app.add_subcommand("reconstruct", "white polyhedron (or Fuchsian surface) of a tiling.v1 document");
    io(reconstruct);
    auto* solve = app.add_subcommand("solve", "heights with prescribed curvatures for a fuchsian.v1 document");
    io(solve);
    solve->add_option("--restarts", rc.restarts, "extra solves from random heights")->check(CLI::NonNegativeNumber);
    solve->add_option("--seed", rc.seed, "seed of the random restarts");
    auto* render = app.add_subcommand("render", "SVG picture of a tiling.v1 document");
    io(render);
    render->add_option("--projection", rc.projection, "stereographic or poincare")
        ->check(CLI::IsMember({"stereographic", "poincare"}));
    auto* check = app.add_subcommand("check", "validators and invariants on documents of any schema");
    check->add_option("inputs", rc.inputs, "documents, - for stdin");
    check->add_option("-o,--out", rc.output, "report file, - for stdout");
    check->add_option("--reference", rc.reference, "spherical tiling the input must be congruent to");
    check->add_flag("--batch", batch, "check several documents concurrently, report an array");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (rc.tol_scale) setenv("FLIPKIT_TOL", format_number(*rc.tol_scale).c_str(), 1);

    try {
        if (check->parsed()) return cmd_check(rc, batch);
        std::string out;
        if (project->parsed()) out = cmd_project(rc);
        if (flip_cmd->parsed()) out = cmd_flip(rc);
        if (dual_cmd->parsed()) out = cmd_dual(rc);
        if (reconstruct->parsed()) out = cmd_reconstruct(rc);
        if (solve->parsed()) out = cmd_solve(rc);
        if (render->parsed()) out = cmd_render(rc);
        write_output(rc.output, out);
    } catch (const Error& e) {
        std::cerr << "flipkit: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "flipkit: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

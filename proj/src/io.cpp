#include "flipkit/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace flipkit {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// ---- writing

bool is_scalar(const ojson& j) { return !j.is_array() && !j.is_object(); }

bool is_flat(const ojson& j) {
    if (is_scalar(j)) return true;
    for (const auto& v : j) {
        if (is_scalar(v)) continue;
        if (j.is_object() && v.is_array() && std::all_of(v.begin(), v.end(), is_scalar)) continue;
        return false;
    }
    return true;
}

void dump(const ojson& j, std::string& out, int depth) {
    const std::string pad(2 * depth, ' '), inner(2 * depth + 2, ' ');
    switch (j.type()) {
        case ojson::value_t::number_float: out += format_number(j.get<double>()); return;
        case ojson::value_t::number_integer:
        case ojson::value_t::number_unsigned:
        case ojson::value_t::boolean:
        case ojson::value_t::string:
        case ojson::value_t::null: out += j.dump(); return;
        default: break;
    }
    const bool obj = j.is_object();
    const char open = obj ? '{' : '[', close = obj ? '}' : ']';
    if (j.empty()) {
        out += open;
        out += close;
        return;
    }
    const bool flat = is_flat(j);
    out += open;
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) out += "\n" + inner;
        if (obj) out += json(it.key()).dump() + ": ";
        dump(*it, out, depth + 1);
    }
    if (!flat) out += "\n" + pad;
    out += close;
}

std::string to_text(const ojson& j) {
    std::string out;
    dump(j, out, 0);
    out += "\n";
    return out;
}

template <class V>
ojson vec(const V& v) {
    ojson a = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(static_cast<double>(v[i]));
    return a;
}

ojson numbers(const std::vector<double>& v) {
    ojson a = ojson::array();
    for (double x : v) a.push_back(x);
    return a;
}

ojson ints(const std::vector<int>& v) {
    ojson a = ojson::array();
    for (int x : v) a.push_back(x);
    return a;
}

const char* color_name(Color c) { return c == Color::Black ? "black" : "white"; }
const char* handedness_name(Handedness h) { return h == Handedness::Left ? "left" : "right"; }

// ---- reading

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

class Obj {
public:
    Obj(const json& j, std::string path, std::initializer_list<const char*> keys) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) throw ParseError(path_ + ": expected an object");
        std::set<std::string> known(keys.begin(), keys.end());
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!known.count(it.key())) throw ParseError(path_ + ": unknown field \"" + it.key() + "\"");
    }
    bool has(const char* key) const { return j_.contains(key); }
    const json& at(const char* key) const {
        if (!has(key)) throw ParseError(path_ + ": missing field \"" + key + "\"");
        return j_.at(key);
    }
    std::string path(const char* key) const { return path_ + "." + key; }

private:
    const json& j_;
    std::string path_;
};

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path + ": expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
    const auto v = j.get<long long>();
    if (v < -(1LL << 30) || v > (1LL << 30)) throw ParseError(path + ": integer out of range");
    return static_cast<int>(v);
}

std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ParseError(path + ": expected a string");
    return j.get<std::string>();
}

const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path + ": expected an array");
    return j;
}

std::vector<double> numbers(const json& j, const std::string& path, int size = -1) {
    array(j, path);
    if (size >= 0 && static_cast<int>(j.size()) != size)
        throw ParseError(path + ": expected " + std::to_string(size) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<int> indices(const json& j, const std::string& path, int bound) {
    array(j, path);
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        int v = integer(j[i], p);
        if (v < 0 || v >= bound) throw ParseError(p + ": index out of range");
        out.push_back(v);
    }
    return out;
}

template <class V>
V fixed(const json& j, const std::string& path) {
    std::vector<double> v = numbers(j, path, static_cast<int>(V::RowsAtCompileTime));
    V out;
    for (int i = 0; i < out.size(); ++i) out[i] = v[i];
    return out;
}

template <class E>
E choice(const json& j, const std::string& path, std::initializer_list<std::pair<const char*, E>> options) {
    const std::string s = string(j, path);
    for (const auto& [name, value] : options)
        if (s == name) return value;
    throw ParseError(path + ": unexpected value \"" + s + "\"");
}

void expect_schema(const Obj& o, const char* schema) {
    if (o.has("schema") && string(o.at("schema"), o.path("schema")) != schema)
        throw ParseError("expected schema " + std::string(schema));
}

Color read_color(const json& j, const std::string& path) {
    return choice<Color>(j, path, {{"black", Color::Black}, {"white", Color::White}});
}

Handedness read_handedness(const json& j, const std::string& path) {
    return choice<Handedness>(j, path, {{"left", Handedness::Left}, {"right", Handedness::Right}});
}

SphericalTiling read_spherical(const json& j) {
    Obj o(j, "tiling", {"schema", "ambient", "handedness", "vertices", "faces", "edges"});
    SphericalTiling t;
    t.handedness = read_handedness(o.at("handedness"), o.path("handedness"));
    const json& vs = array(o.at("vertices"), o.path("vertices"));
    for (std::size_t i = 0; i < vs.size(); ++i) t.vertices.push_back(fixed<Vec3>(vs[i], "vertices[" + std::to_string(i) + "]"));
    const int nv = static_cast<int>(t.vertices.size());
    const json& fs = array(o.at("faces"), o.path("faces"));
    for (std::size_t f = 0; f < fs.size(); ++f) {
        const std::string p = "faces[" + std::to_string(f) + "]";
        Obj fo(fs[f], p, {"color", "vertices"});
        t.faces.push_back({read_color(fo.at("color"), fo.path("color")), indices(fo.at("vertices"), fo.path("vertices"), nv)});
    }
    const int nf = static_cast<int>(t.faces.size());
    const json& es = array(o.at("edges"), o.path("edges"));
    for (std::size_t e = 0; e < es.size(); ++e) {
        const std::string p = "edges[" + std::to_string(e) + "]";
        Obj eo(es[e], p, {"ends", "origin", "tangent", "length", "segments"});
        TilingEdge edge;
        std::vector<int> ends = indices(eo.at("ends"), eo.path("ends"), nv);
        if (ends.size() != 2) throw ParseError(eo.path("ends") + ": expected two vertices");
        edge.ends = {ends[0], ends[1]};
        edge.origin = fixed<Vec3>(eo.at("origin"), eo.path("origin"));
        edge.tangent = fixed<Vec3>(eo.at("tangent"), eo.path("tangent"));
        edge.length = number(eo.at("length"), eo.path("length"));
        const json& ss = array(eo.at("segments"), eo.path("segments"));
        for (std::size_t s = 0; s < ss.size(); ++s) {
            const std::string q = p + ".segments[" + std::to_string(s) + "]";
            Obj so(ss[s], q, {"face", "side", "position", "t0", "t1"});
            EdgeSegment seg;
            seg.face = integer(so.at("face"), so.path("face"));
            if (seg.face < 0 || seg.face >= nf) throw ParseError(so.path("face") + ": index out of range");
            seg.side = choice<Side>(so.at("side"), so.path("side"), {{"left", Side::Left}, {"right", Side::Right}});
            seg.position = choice<Position>(so.at("position"), so.path("position"),
                                            {{"forward", Position::Forward}, {"backward", Position::Backward}});
            seg.t0 = number(so.at("t0"), so.path("t0"));
            seg.t1 = number(so.at("t1"), so.path("t1"));
            edge.segments.push_back(seg);
        }
        t.edges.push_back(edge);
    }
    return t;
}

HyperbolicTiling read_hyperbolic(const json& j) {
    Obj o(j, "tiling", {"schema", "ambient", "handedness", "genus", "vertex_orbits", "face_orbits", "elements", "vertices",
                        "faces", "edges"});
    HyperbolicTiling t;
    t.handedness = read_handedness(o.at("handedness"), o.path("handedness"));
    if (integer(o.at("genus"), o.path("genus")) != 2) throw UnsupportedError("only genus 2 groups are implemented");
    t.group = genus2_group();
    t.vertex_orbits = integer(o.at("vertex_orbits"), o.path("vertex_orbits"));
    t.face_orbits = integer(o.at("face_orbits"), o.path("face_orbits"));
    if (t.vertex_orbits < 1 || t.face_orbits < 1) throw ParseError("tiling: orbit counts must be positive");
    const json& es = array(o.at("elements"), o.path("elements"));
    for (std::size_t e = 0; e < es.size(); ++e) {
        const std::string p = "elements[" + std::to_string(e) + "]";
        Obj eo(es[e], p, {"lift", "word_length"});
        std::vector<double> m = numbers(eo.at("lift"), eo.path("lift"), 4);
        GroupElement g;
        g.lift << m[0], m[1], m[2], m[3];
        g.action = conjugation_action(g.lift);
        g.word_length = integer(eo.at("word_length"), eo.path("word_length"));
        t.elements.push_back(g);
    }
    const int ne = static_cast<int>(t.elements.size());
    if (ne == 0) throw ParseError("tiling: no group elements");
    const json& vs = array(o.at("vertices"), o.path("vertices"));
    const json& fs = array(o.at("faces"), o.path("faces"));
    const int nv = static_cast<int>(vs.size()), nf = static_cast<int>(fs.size());
    for (int i = 0; i < nv; ++i) {
        const std::string p = "vertices[" + std::to_string(i) + "]";
        Obj vo(vs[i], p, {"point", "black", "white"});
        HTilingVertex v;
        v.point = fixed<Vec4>(vo.at("point"), vo.path("point"));
        std::vector<int> b = indices(vo.at("black"), vo.path("black"), std::max(ne, t.vertex_orbits));
        if (b.size() != 2 || b[0] >= ne || b[1] >= t.vertex_orbits) throw ParseError(vo.path("black") + ": expected [element, orbit]");
        v.black = {b[0], b[1]};
        v.white = integer(vo.at("white"), vo.path("white"));
        if (v.white < 0 || v.white >= nf) throw ParseError(vo.path("white") + ": index out of range");
        t.vertices.push_back(v);
    }
    for (int f = 0; f < nf; ++f) {
        const std::string p = "faces[" + std::to_string(f) + "]";
        Obj fo(fs[f], p, {"color", "vertices", "orbit", "element"});
        HTilingFace face;
        face.color = read_color(fo.at("color"), fo.path("color"));
        face.vertices = indices(fo.at("vertices"), fo.path("vertices"), nv);
        face.orbit = integer(fo.at("orbit"), fo.path("orbit"));
        face.element = integer(fo.at("element"), fo.path("element"));
        const int orbits = face.color == Color::Black ? t.vertex_orbits : t.face_orbits;
        if (face.orbit < 0 || face.orbit >= orbits || face.element < 0 || face.element >= ne)
            throw ParseError(p + ": orbit or element out of range");
        t.faces.push_back(face);
    }
    const json& ed = array(o.at("edges"), o.path("edges"));
    for (std::size_t e = 0; e < ed.size(); ++e) {
        const std::string p = "edges[" + std::to_string(e) + "]";
        Obj eo(ed[e], p, {"corners"});
        std::vector<int> c = indices(eo.at("corners"), eo.path("corners"), nv);
        if (c.size() != 4) throw ParseError(eo.path("corners") + ": expected four vertices");
        t.edges.push_back({{c[0], c[1], c[2], c[3]}});
    }
    return t;
}

}  // namespace

std::string format_number(double x) {
    if (!std::isfinite(x)) throw GeometryError("cannot write a non-finite number");
    if (x == 0) return "0";  // "-0" would read back as an integer
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string write_polyhedron(const ConvexPolyhedron& p) {
    ojson j;
    j["schema"] = "polyhedron.v1";
    j["model"] = "S3";
    if (p.degeneracy != Degeneracy::None) j["degenerate"] = p.degeneracy == Degeneracy::Hosohedron ? "hosohedron" : "dihedron";
    j["vertices"] = ojson::array();
    for (const auto& v : p.vertices) j["vertices"].push_back(vec(v));
    j["faces"] = ojson::array();
    for (const auto& f : p.faces) j["faces"].push_back(ints(f));
    return to_text(j);
}

ConvexPolyhedron read_polyhedron(const std::string& text) {
    json j = parse(text);
    Obj o(j, "polyhedron", {"schema", "model", "degenerate", "vertices", "faces"});
    expect_schema(o, "polyhedron.v1");
    if (string(o.at("model"), o.path("model")) != "S3") throw ParseError("polyhedron: model must be \"S3\"");
    const json& vs = array(o.at("vertices"), o.path("vertices"));
    if (o.has("degenerate")) {
        Degeneracy d = choice<Degeneracy>(o.at("degenerate"), o.path("degenerate"),
                                          {{"hosohedron", Degeneracy::Hosohedron}, {"dihedron", Degeneracy::Dihedron}});
        if (!vs.empty() || (o.has("faces") && !array(o.at("faces"), o.path("faces")).empty()))
            throw ParseError("polyhedron: a degenerate polyhedron carries no vertices or faces");
        return ConvexPolyhedron{{}, {}, {}, d};
    }
    std::vector<Vec4> verts;
    for (std::size_t i = 0; i < vs.size(); ++i) verts.push_back(fixed<Vec4>(vs[i], "vertices[" + std::to_string(i) + "]"));
    if (!o.has("faces")) return hull(verts);
    const json& fs = array(o.at("faces"), o.path("faces"));
    std::vector<std::vector<int>> faces;
    for (std::size_t f = 0; f < fs.size(); ++f)
        faces.push_back(indices(fs[f], "faces[" + std::to_string(f) + "]", static_cast<int>(verts.size())));
    return from_faces(verts, faces);
}

std::string write_tiling(const SphericalTiling& t) {
    ojson j;
    j["schema"] = "tiling.v1";
    j["ambient"] = "S2";
    j["handedness"] = handedness_name(t.handedness);
    j["vertices"] = ojson::array();
    for (const auto& v : t.vertices) j["vertices"].push_back(vec(v));
    j["faces"] = ojson::array();
    for (const auto& f : t.faces) {
        ojson fo;
        fo["color"] = color_name(f.color);
        fo["vertices"] = ints(f.vertices);
        j["faces"].push_back(fo);
    }
    j["edges"] = ojson::array();
    for (const auto& e : t.edges) {
        ojson eo;
        eo["ends"] = ints({e.ends[0], e.ends[1]});
        eo["origin"] = vec(e.origin);
        eo["tangent"] = vec(e.tangent);
        eo["length"] = e.length;
        eo["segments"] = ojson::array();
        for (const auto& s : e.segments) {
            ojson so;
            so["face"] = s.face;
            so["side"] = s.side == Side::Left ? "left" : "right";
            so["position"] = s.position == Position::Forward ? "forward" : "backward";
            so["t0"] = s.t0;
            so["t1"] = s.t1;
            eo["segments"].push_back(so);
        }
        j["edges"].push_back(eo);
    }
    return to_text(j);
}

std::string write_tiling(const HyperbolicTiling& t) {
    ojson j;
    j["schema"] = "tiling.v1";
    j["ambient"] = "H2";
    j["handedness"] = handedness_name(t.handedness);
    j["genus"] = t.group.genus;
    j["vertex_orbits"] = t.vertex_orbits;
    j["face_orbits"] = t.face_orbits;
    j["elements"] = ojson::array();
    for (const auto& g : t.elements) {
        ojson eo;
        eo["lift"] = numbers({g.lift(0, 0), g.lift(0, 1), g.lift(1, 0), g.lift(1, 1)});
        eo["word_length"] = g.word_length;
        j["elements"].push_back(eo);
    }
    j["vertices"] = ojson::array();
    for (const auto& v : t.vertices) {
        ojson vo;
        vo["point"] = vec(v.point);
        vo["black"] = ints({v.black.element, v.black.orbit});
        vo["white"] = v.white;
        j["vertices"].push_back(vo);
    }
    j["faces"] = ojson::array();
    for (const auto& f : t.faces) {
        ojson fo;
        fo["color"] = color_name(f.color);
        fo["vertices"] = ints(f.vertices);
        fo["orbit"] = f.orbit;
        fo["element"] = f.element;
        j["faces"].push_back(fo);
    }
    j["edges"] = ojson::array();
    for (const auto& e : t.edges) {
        ojson eo;
        eo["corners"] = ints({e.corners[0], e.corners[1], e.corners[2], e.corners[3]});
        j["edges"].push_back(eo);
    }
    return to_text(j);
}

AnyTiling read_tiling(const std::string& text) {
    json j = parse(text);
    if (!j.is_object()) throw ParseError("tiling: expected an object");
    if (j.contains("schema") && string(j["schema"], "tiling.schema") != "tiling.v1") throw ParseError("expected schema tiling.v1");
    if (!j.contains("ambient")) throw ParseError("tiling: missing field \"ambient\"");
    const std::string ambient = string(j["ambient"], "tiling.ambient");
    if (ambient == "S2") return read_spherical(j);
    if (ambient == "H2") return read_hyperbolic(j);
    throw ParseError("tiling.ambient: unexpected value \"" + ambient + "\"");
}

std::string write_fuchsian(const FuchsianDocument& d) {
    ojson j;
    j["schema"] = "fuchsian.v1";
    j["genus"] = d.genus;
    j["rays"] = ojson::array();
    for (std::size_t i = 0; i < d.base_points.size(); ++i) {
        ojson r;
        r["p"] = vec(Vec3(d.base_points[i].head<3>()));
        r["label"] = i < d.labels.size() ? d.labels[i] : "r" + std::to_string(i);
        j["rays"].push_back(r);
    }
    if (!d.targets.empty())
        j["targets"] = numbers(d.targets);
    else
        j["heights"] = numbers(d.heights);
    j["word_len_cap"] = d.word_len_cap;
    return to_text(j);
}

FuchsianDocument read_fuchsian(const std::string& text) {
    json j = parse(text);
    Obj o(j, "fuchsian", {"schema", "genus", "rays", "heights", "targets", "word_len_cap"});
    expect_schema(o, "fuchsian.v1");
    FuchsianDocument d;
    d.genus = integer(o.at("genus"), o.path("genus"));
    const json& rs = array(o.at("rays"), o.path("rays"));
    if (rs.empty()) throw ParseError("fuchsian: no rays");
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const std::string p = "rays[" + std::to_string(i) + "]";
        Obj ro(rs[i], p, {"p", "label"});
        Vec3 x = fixed<Vec3>(ro.at("p"), ro.path("p"));
        d.base_points.push_back(Vec4(x[0], x[1], x[2], 0));
        d.labels.push_back(ro.has("label") ? string(ro.at("label"), ro.path("label")) : "r" + std::to_string(i));
    }
    if (o.has("heights") == o.has("targets")) throw ParseError("fuchsian: exactly one of \"heights\" and \"targets\" is required");
    const int n = static_cast<int>(d.base_points.size());
    if (o.has("heights"))
        d.heights = numbers(o.at("heights"), o.path("heights"), n);
    else
        d.targets = numbers(o.at("targets"), o.path("targets"), n);
    if (o.has("word_len_cap")) {
        d.word_len_cap = integer(o.at("word_len_cap"), o.path("word_len_cap"));
        if (d.word_len_cap < 1) throw ParseError("fuchsian.word_len_cap: must be positive");
    }
    return d;
}

FuchsianConfig to_config(const FuchsianDocument& d) {
    if (d.genus != 2) throw UnsupportedError("only genus 2 groups are implemented");
    FuchsianConfig cfg;
    cfg.group = genus2_group();
    cfg.base_points = d.base_points;
    cfg.heights = d.heights;
    cfg.word_len_cap = d.word_len_cap;
    return cfg;
}

std::string write_solution(const SolutionDocument& d) {
    ojson j;
    j["schema"] = "solution.v1";
    j["heights"] = numbers(d.heights);
    j["achieved_curvatures"] = numbers(d.achieved_curvatures);
    j["residual"] = d.residual;
    j["jacobian_condition"] = d.jacobian_condition;
    j["iterations"] = d.iterations;
    j["stages"] = d.stages;
    j["dual_face_areas"] = numbers(d.dual_face_areas);
    j["dual_area_error"] = d.dual_area_error;
    j["restarts"] = d.restarts;
    j["restart_spread"] = d.restart_spread;
    return to_text(j);
}

SolutionDocument read_solution(const std::string& text) {
    json j = parse(text);
    Obj o(j, "solution", {"schema", "heights", "achieved_curvatures", "residual", "jacobian_condition", "iterations", "stages",
                          "dual_face_areas", "dual_area_error", "restarts", "restart_spread"});
    expect_schema(o, "solution.v1");
    SolutionDocument d;
    d.heights = numbers(o.at("heights"), o.path("heights"));
    d.achieved_curvatures = numbers(o.at("achieved_curvatures"), o.path("achieved_curvatures"), static_cast<int>(d.heights.size()));
    d.residual = number(o.at("residual"), o.path("residual"));
    d.jacobian_condition = number(o.at("jacobian_condition"), o.path("jacobian_condition"));
    d.iterations = integer(o.at("iterations"), o.path("iterations"));
    if (o.has("stages")) d.stages = integer(o.at("stages"), o.path("stages"));
    if (o.has("dual_face_areas")) d.dual_face_areas = numbers(o.at("dual_face_areas"), o.path("dual_face_areas"));
    if (o.has("dual_area_error")) d.dual_area_error = number(o.at("dual_area_error"), o.path("dual_area_error"));
    if (o.has("restarts")) d.restarts = integer(o.at("restarts"), o.path("restarts"));
    if (o.has("restart_spread")) d.restart_spread = number(o.at("restart_spread"), o.path("restart_spread"));
    return d;
}

DocumentKind detect_kind(const std::string& text) {
    json j = parse(text);
    if (!j.is_object()) throw ParseError("expected a JSON object");
    if (j.contains("schema")) {
        const std::string s = string(j["schema"], "schema");
        if (s == "polyhedron.v1") return DocumentKind::Polyhedron;
        if (s == "tiling.v1") return DocumentKind::Tiling;
        if (s == "fuchsian.v1") return DocumentKind::Fuchsian;
        if (s == "solution.v1") return DocumentKind::Solution;
        throw ParseError("unknown schema \"" + s + "\"");
    }
    if (j.contains("model")) return DocumentKind::Polyhedron;
    if (j.contains("ambient")) return DocumentKind::Tiling;
    if (j.contains("rays")) return DocumentKind::Fuchsian;
    if (j.contains("achieved_curvatures")) return DocumentKind::Solution;
    throw ParseError("cannot tell the schema of the document");
}

}  // namespace flipkit

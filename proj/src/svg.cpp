#include "flipkit/svg.hpp"

#include "flipkit/polygons.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

namespace flipkit {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kView = 2.5;  // half-width of the stereographic picture
constexpr double kFar = 25.0;  // samples projecting beyond this radius count as at infinity

const char* kBlackFill = "#303030";
const char* kWhiteFill = "#ececec";
const char* kEdgeStroke = "#c83c1e";

struct Pt {
    double x = 0, y = 0;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}

// SVG has y pointing down.
std::string coords(const Pt& p) { return fmt(p.x) + "," + fmt(-p.y); }

std::string loop_path(const std::vector<Pt>& pts) {
    std::string d;
    for (std::size_t i = 0; i < pts.size(); ++i) d += (i == 0 ? "M" : " L") + coords(pts[i]);
    return d + " Z";
}

double signed_area(const std::vector<Pt>& pts) {
    double a = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Pt& p = pts[i];
        const Pt& q = pts[(i + 1) % pts.size()];
        a += p.x * q.y - p.y * q.x;
    }
    return a / 2;
}

std::vector<Pt> circle(double r) {
    std::vector<Pt> out;
    const int n = 720;
    for (int k = 0; k < n; ++k) out.push_back({r * std::cos(2 * pi * k / n), r * std::sin(2 * pi * k / n)});
    return out;
}

// ---- stereographic

bool at_pole(const Vec3& p) { return 1 + p[2] < 1e-12; }
bool far(const Vec3& p) { return at_pole(p) || std::hypot(p[0], p[1]) > kFar * (1 + p[2]); }
Pt stereo(const Vec3& p) { return {p[0] / (1 + p[2]), p[1] / (1 + p[2])}; }

std::vector<Vec3> sample_arc(const Vec3& a, const Vec3& b, double step) {
    const double len = arc_length(a, b);
    const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    std::vector<Vec3> out;
    if (len < 1e-15) return {a};
    const Vec3 t = tangent_toward(a, b);
    for (int k = 0; k < n; ++k) out.push_back(geodesic_point(a, t, len * k / n));
    return out;
}

double wrap(double a) {
    a = std::fmod(a, 2 * pi);
    if (a > pi) a -= 2 * pi;
    if (a <= -pi) a += 2 * pi;
    return a;
}

// Closed planar image of a closed curve on the sphere. Stretches beyond kFar
// are replaced by arcs of radius kFar turning by the angle the curve sweeps
// out there; a pass exactly through the pole turns counter-clockwise, which
// keeps the region on the left.
std::vector<Pt> project_loop(const std::vector<Vec3>& s) {
    const std::size_t m = s.size();
    std::size_t start = m;
    for (std::size_t i = 0; i < m; ++i)
        if (!far(s[i])) {
            start = i;
            break;
        }
    if (start == m) return {};
    std::vector<Pt> out;
    std::size_t i = 0;
    while (i < m) {
        const Vec3& p = s[(start + i) % m];
        if (!far(p)) {
            out.push_back(stereo(p));
            ++i;
            continue;
        }
        // far run from the previous near sample to the next near one
        const Vec3& exit = s[(start + i - 1 + m) % m];
        double last = std::atan2(exit[1], exit[0]);
        const double from = last;
        double sweep = 0;
        bool bridged = false;
        while (i < m && far(s[(start + i) % m])) {
            const Vec3& q = s[(start + i) % m];
            ++i;
            if (at_pole(q)) {
                bridged = true;
                continue;
            }
            const double ang = std::atan2(q[1], q[0]);
            double d = wrap(ang - last);
            if (bridged) d = d < 0 ? d + 2 * pi : d;
            sweep += d;
            bridged = false;
            last = ang;
        }
        const Vec3& entry = s[(start + i) % m];
        const double ang = std::atan2(entry[1], entry[0]);
        double d = wrap(ang - last);
        if (bridged) d = d < 0 ? d + 2 * pi : d;
        sweep += d;
        const int n = std::max(1, static_cast<int>(std::ceil(std::abs(sweep) / 0.01)));
        for (int k = 0; k <= n; ++k) {
            const double a = from + sweep * k / n;
            out.push_back({kFar * std::cos(a), kFar * std::sin(a)});
        }
    }
    return out;
}

// Pieces of an open curve that stay within kFar.
std::vector<std::vector<Pt>> project_open(const std::vector<Vec3>& s) {
    std::vector<std::vector<Pt>> runs(1);
    for (const auto& p : s) {
        if (far(p)) {
            if (!runs.back().empty()) runs.emplace_back();
            continue;
        }
        runs.back().push_back(stereo(p));
    }
    std::vector<std::vector<Pt>> out;
    for (auto& r : runs)
        if (r.size() >= 2) out.push_back(std::move(r));
    return out;
}

std::string header(double lo, double size) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt(lo) + " " +
           fmt(lo) + " " + fmt(size) + " " + fmt(size) + "\" width=\"800\" height=\"800\">\n";
}

std::string face_element(Color c, const std::string& d) {
    return std::string("<path class=\"face ") + (c == Color::Black ? "black" : "white") + "\" fill=\"" +
           (c == Color::Black ? kBlackFill : kWhiteFill) + "\" stroke=\"none\" fill-rule=\"nonzero\" d=\"" + d + "\"/>\n";
}

std::string edge_element(const std::string& d, double width) {
    return std::string("<path class=\"edge\" fill=\"none\" stroke=\"") + kEdgeStroke + "\" stroke-width=\"" + fmt(width) +
           "\" stroke-linecap=\"round\" d=\"" + d + "\"/>\n";
}

// ---- Poincare disk

Pt poincare(const Vec4& p) { return {p[0] / (1 + p[2]), p[1] / (1 + p[2])}; }

std::vector<Vec4> sample_h_segment(const Vec4& a, const Vec4& b, double step, bool closed_end) {
    const double d = hyperbolic_distance(a, b, h2_gram());
    const int n = std::max(1, static_cast<int>(std::ceil(d / step)));
    std::vector<Vec4> out;
    const int last = closed_end ? n : n - 1;
    for (int k = 0; k <= last; ++k) {
        const double s = static_cast<double>(k) / n;
        if (d < 1e-14) {
            out.push_back(a);
            continue;
        }
        out.push_back((std::sinh((1 - s) * d) * a + std::sinh(s * d) * b) / std::sinh(d));
    }
    return out;
}

}  // namespace

std::string render_stereographic(const SphericalTiling& t, SvgStats* stats, double max_step) {
    SvgStats st;
    std::string svg = header(-kView, 2 * kView);
    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        const auto& cyc = t.faces[f].vertices;
        std::vector<Vec3> boundary;
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            auto arc = sample_arc(t.vertices[cyc[i]], t.vertices[cyc[(i + 1) % cyc.size()]], max_step);
            boundary.insert(boundary.end(), arc.begin(), arc.end());
        }
        std::vector<Pt> loop = project_loop(boundary);
        std::string d;
        if (loop.empty()) {
            d = loop_path(circle(2 * kFar));
        } else {
            if (signed_area(loop) < 0) d = loop_path(circle(2 * kFar)) + " ";
            d += loop_path(loop);
        }
        svg += face_element(t.faces[f].color, d);
        ++st.faces;
    }
    for (const auto& e : t.edges) {
        const int n = std::max(1, static_cast<int>(std::ceil(e.length / max_step)));
        std::vector<Vec3> pts;
        for (int k = 0; k <= n; ++k) pts.push_back(edge_point(e, e.length * k / n));
        std::string d;
        for (const auto& run : project_open(pts))
            for (std::size_t i = 0; i < run.size(); ++i) d += (d.empty() ? "M" : i == 0 ? " M" : " L") + coords(run[i]);
        if (d.empty()) continue;
        svg += edge_element(d, 0.012);
        ++st.edges;
    }
    svg += "</svg>\n";
    if (stats) *stats = st;
    return svg;
}

std::string render_poincare(const HyperbolicTiling& t, SvgStats* stats, double max_step) {
    SvgStats st;
    std::string svg = header(-1.05, 2.1);
    svg += "<circle class=\"boundary\" cx=\"0\" cy=\"0\" r=\"1\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"0.004\"/>\n";
    for (const auto& face : t.faces) {
        std::vector<Pt> loop;
        const std::size_t m = face.vertices.size();
        for (std::size_t i = 0; i < m; ++i)
            for (const auto& p : sample_h_segment(t.vertices[face.vertices[i]].point, t.vertices[face.vertices[(i + 1) % m]].point,
                                                  max_step, false))
                loop.push_back(poincare(p));
        svg += face_element(face.color, loop_path(loop));
        ++st.faces;
    }
    for (const auto& e : t.edges) {
        // the two corners farthest apart span the four segments
        int a = 0, b = 1;
        double best = -1;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                double d = hyperbolic_distance(t.vertices[e.corners[i]].point, t.vertices[e.corners[j]].point, h2_gram());
                if (d > best) best = d, a = i, b = j;
            }
        std::string d;
        for (const auto& p : sample_h_segment(t.vertices[e.corners[a]].point, t.vertices[e.corners[b]].point, max_step, true))
            d += (d.empty() ? "M" : " L") + coords(poincare(p));
        svg += edge_element(d, 0.004);
        ++st.edges;
    }
    std::string d;
    const auto octagon = fundamental_octagon(t.group);
    for (std::size_t i = 0; i < octagon.size(); ++i)
        for (const auto& p : sample_h_segment(octagon[i], octagon[(i + 1) % octagon.size()], max_step, false))
            d += (d.empty() ? "M" : " L") + coords(poincare(p));
    svg += "<path class=\"domain\" fill=\"none\" stroke=\"#1e50c8\" stroke-width=\"0.004\" stroke-dasharray=\"0.02,0.01\" d=\"" + d +
           " Z\"/>\n";
    svg += "</svg>\n";
    if (stats) *stats = st;
    return svg;
}

}  // namespace flipkit

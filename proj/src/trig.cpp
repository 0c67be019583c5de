#include "flipkit/trig.hpp"

#include "flipkit/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace flipkit {

namespace {

constexpr double pi = std::numbers::pi;

void require_open_interval(double v, double lo, double hi, const char* what) {
    if (!(v > lo && v < hi)) throw DegenerateTriangle(std::string(what) + " out of range");
}

// sinh^2(b/2) for the common law cosh b = cos a cos c + sin a sin c cosh beta,
// written without cancellation.
double half_sinh_sq(double a, double c, double beta) {
    double s = std::sin(0.5 * (a - c));
    double t = std::sinh(0.5 * beta);
    return std::sin(a) * std::sin(c) * t * t - s * s;
}

}  // namespace

Triangle sph_solve(double a, double c, double beta) {
    require_open_interval(a, 0, pi, "side a");
    require_open_interval(c, 0, pi, "side c");
    require_open_interval(beta, 0, pi, "angle beta");
    Triangle t{a, 0, c, 0, beta, 0};
    // haversine form of cos b = cos c cos a + sin c sin a cos beta
    double s = std::sin(0.5 * (a - c));
    double u = std::sin(0.5 * beta);
    double hav = s * s + std::sin(a) * std::sin(c) * u * u;
    t.b = 2.0 * std::asin(std::sqrt(std::clamp(hav, 0.0, 1.0)));
    if (std::sin(t.b) < tol().degenerate) throw DegenerateTriangle("spherical side b is 0 or pi");
    const double num = std::sin(a) * std::sin(c) * std::sin(beta);
    t.alpha = std::atan2(num, std::cos(a) - std::cos(t.b) * std::cos(c));
    t.gamma = std::atan2(num, std::cos(c) - std::cos(a) * std::cos(t.b));
    return t;
}

SphPartials sph_partials(double a, double c, double beta) {
    Triangle t = sph_solve(a, c, beta);
    const double sb = std::sin(t.b);
    return {std::cos(t.gamma), std::sin(t.gamma) / sb, -std::sin(t.alpha) * std::cos(t.b) / sb};
}

Triangle ds_solve(double a, double c, double beta) {
    require_open_interval(a, 0, pi, "side a");
    require_open_interval(c, 0, pi, "side c");
    if (!(beta > 0)) throw DegenerateTriangle("angle beta must be positive");
    double q = half_sinh_sq(a, c, beta);
    if (q <= 0) throw DegenerateTriangle("de Sitter triangle has no time-like side");
    Triangle t{a, 2.0 * std::asinh(std::sqrt(q)), c, 0, beta, 0};
    if (std::sinh(t.b) < tol().degenerate) throw DegenerateTriangle("time-like side is too short");
    const double shb = std::sinh(t.b), chb = std::cosh(t.b);
    t.alpha = std::asinh((std::cos(a) - chb * std::cos(c)) / (shb * std::sin(c)));
    t.gamma = std::asinh((std::cos(c) - std::cos(a) * chb) / (std::sin(a) * shb));
    return t;
}

Triangle ads_timelike_solve(double a, double c, double beta) {
    require_open_interval(a, 0, pi, "time-like side a");
    require_open_interval(c, 0, pi, "time-like side c");
    if (!(beta > 0)) throw DegenerateTriangle("angle beta must be positive");
    double q = half_sinh_sq(a, c, beta);
    if (q <= 0) throw DegenerateTriangle("AdS triangle has no space-like side");
    Triangle t{a, 2.0 * std::asinh(std::sqrt(q)), c, 0, beta, 0};
    const double shb = std::sinh(t.b);
    if (shb < tol().degenerate) throw DegenerateTriangle("space-like side is too short");
    const double chbeta = std::cosh(beta);
    t.alpha = std::asinh((std::sin(a) * std::cos(c) * chbeta - std::cos(a) * std::sin(c)) / shb);
    t.gamma = std::asinh((std::sin(c) * std::cos(a) * chbeta - std::cos(c) * std::sin(a)) / shb);
    return t;
}

AdsPartials ads_partials(double a, double c, double beta) {
    Triangle t = ads_timelike_solve(a, c, beta);
    const double shb = std::sinh(t.b), chb = std::cosh(t.b);
    return {std::cosh(t.gamma) / shb, -chb * std::cosh(t.alpha) / shb, std::cosh(t.alpha) * (1.0 - chb) / shb};
}

double hs2_side(double b, double c, double alpha) {
    // sin^2(a/2) = cosh b cosh c sin^2(alpha/2) - sinh^2((b - c)/2)
    double s = std::sin(0.5 * alpha);
    double d = std::sinh(0.5 * (b - c));
    double hav = std::cosh(b) * std::cosh(c) * s * s - d * d;
    if (hav < -tol().law || hav > 1.0 + tol().law)
        throw DegenerateTriangle("HS2 cosine law gives |cos a| > 1");
    hav = std::clamp(hav, 0.0, 1.0);
    if (hav < 0.5) return 2.0 * std::asin(std::sqrt(hav));
    return std::acos(1.0 - 2.0 * hav);
}

Triangle hs2_laws(double b, double c, double alpha) {
    Triangle t{hs2_side(b, c, alpha), b, c, alpha, 0, 0};
    const double sa = std::sin(t.a), ca = std::cos(t.a);
    if (sa < tol().degenerate) throw DegenerateTriangle("HS2 side a is 0 or pi");
    t.beta = std::asinh((std::sinh(b) - ca * std::sinh(c)) / (sa * std::cosh(c)));
    t.gamma = std::asinh((std::sinh(c) - ca * std::sinh(b)) / (sa * std::cosh(b)));
    return t;
}

double hs2_partial_a_b(double b, double c, double alpha) { return std::sinh(hs2_laws(b, c, alpha).gamma); }

ConvexitySign convexity_sign(double alpha1, double alpha2) {
    double s = std::sinh(alpha1) + std::sinh(alpha2);
    if (std::abs(s) <= tol().convexity) return ConvexitySign::Coplanar;
    return s < 0 ? ConvexitySign::ConvexSide : ConvexitySign::NotConvexSide;
}

}  // namespace flipkit

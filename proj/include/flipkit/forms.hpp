// Bilinear forms on R^4, the two quadric models (round S^3 and AdS_3) with
// their group structures, projective duality and angles in HS^n.
#pragma once

#include "flipkit/errors.hpp"

#include <Eigen/Dense>

#include <complex>

namespace flipkit {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

// Diagonal signatures:
//   Sphere (+,+,+,+)   AdS (+,+,-,-)   Mink31 (+,+,+,-)   Mink21 (+,-,-) on the first three coordinates
enum class Signature { Sphere, AdS, Mink31, Mink21 };

Vec4 gram_diagonal(Signature sig);
double inner(const Vec4& x, const Vec4& y, Signature sig);

// Square root of <x,x> with the branch used throughout: time-like vectors
// get a positive multiple of i.
std::complex<double> pseudo_norm(const Vec4& x, Signature sig);

enum class Model { S3, AdS3 };

Signature signature_of(Model m);

// Point of S^3 (<x,x> = 1) or AdS_3 (<x,x>_2 = -1).
class QuadricPoint {
public:
    QuadricPoint() = default;
    // Checks membership to within tol().norm; throws GeometryError otherwise.
    QuadricPoint(Model model, const Vec4& coords);

    Model model() const { return model_; }
    const Vec4& coords() const { return x_; }
    double operator[](int i) const { return x_[i]; }

private:
    Model model_ = Model::S3;
    Vec4 x_ = Vec4(1, 0, 0, 0);
};

// Rescales v onto the quadric. AdS requires <v,v>_2 < 0.
QuadricPoint normalize(const Vec4& v, Model m);

// Identity element: (1,0,0,0) on S^3, (0,0,0,1) on AdS_3.
Vec4 identity_coords(Model m);

// Group law through SU(2) (sphere) or SL(2,R) (AdS).
Vec4 group_mul(const Vec4& x, const Vec4& y, Model m);
Vec4 group_inv(const Vec4& x, Model m);
QuadricPoint group_mul(const QuadricPoint& x, const QuadricPoint& y);
QuadricPoint group_inv(const QuadricPoint& x);

Eigen::Matrix2cd su2_matrix(const Vec4& x);
Vec4 from_su2(const Eigen::Matrix2cd& m);
Mat2 sl2_matrix(const Vec4& x);
Vec4 from_sl2(const Mat2& m);

// Linear action x -> g x g^{-1} of g in SL(2,R) on R^4 (AdS coordinates).
Mat4 conjugation_action(const Mat2& g);

// Representative of a point of AdS_3 / {+-1}: the first coordinate with
// |x_i| > tol().zero_coord is made positive.
Vec4 canonical_ads_representative(const Vec4& x);

// The totally geodesic plane x* = {y : <x,y> = 0}, stored by its pole.
struct DualPlane {
    Model model = Model::S3;
    Vec4 pole = Vec4(1, 0, 0, 0);
};

DualPlane dual(const QuadricPoint& x);
// Pole of a plane: the point of the open upper hemisphere (S^3) or the
// canonical representative in AdS_3/{+-1}. An AdS plane must be space-like.
QuadricPoint dual(const DualPlane& plane);

// Plane through three points; the pole is returned up to sign (sphere: unit,
// AdS: normalised time-like). Throws on collinear input or light-like poles.
DualPlane plane_through(const Vec4& a, const Vec4& b, const Vec4& c, Model m);

// Geodesic distance. Sphere: arc length. AdS: length of a space-like segment;
// throws for time-like or light-like pairs (use ads_timelike_distance).
double distance(const Vec4& x, const Vec4& y, Model m);
double ads_timelike_distance(const Vec4& x, const Vec4& y);

// Angle between two non light-like vectors of R^{3,1} (Mink31). The kind
// records which of the three shapes the complex angle takes.
struct HSAngle {
    enum class Kind { Real, PureImaginary, PiMinusImaginary };
    Kind kind = Kind::Real;
    // Real: the angle itself. It is signed when exactly one vector is
    // time-like (oriented distance); otherwise it is >= 0.
    // PureImaginary: theta = i*value. PiMinusImaginary: theta = pi - i*value.
    double value = 0;

    std::complex<double> as_complex() const;
};

HSAngle hs_angle(const Vec4& u, const Vec4& v);

}  // namespace flipkit

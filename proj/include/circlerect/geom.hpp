#pragma once

// Spheres, circles, inversions and the Moebius form on sphere 5-vectors.
//
// A sphere equation is a*|x|^2 + <b,x> + c = 0, stored as (a, b, c). The
// representation is projective: (s*a, s*b, s*c) is the same surface for any
// s != 0. Planes are the a == 0 case.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <variant>
#include <vector>

#include "circlerect/error.hpp"

namespace circlerect {

using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;

struct SphereEq {
  double a = 0.0;
  Vec3 b = Vec3::Zero();
  double c = 0.0;

  SphereEq() = default;
  SphereEq(double a_, const Vec3& b_, double c_) : a(a_), b(b_), c(c_) {}

  /// (a, b1, b2, b3, c)
  Vec5 coeffs() const;
  static SphereEq from_coeffs(const Vec5& v);

  /// |b|^2 - 4ac; equals mobius_inner(*this, *this).
  double disc() const { return b.squaredNorm() - 4.0 * a * c; }

  /// Representative with unit 5-vector norm and first nonzero coefficient positive.
  SphereEq normalized() const;
};

/// Up-to-scale equality after unit normalization.
bool projectively_equal(const SphereEq& s, const SphereEq& t, double rel_tol = 1e-12);

struct Plane {
  Vec3 normal;  // unit
  double offset;  // <normal, x> = offset
};
struct RealSphere {
  Vec3 center;
  double radius;
};
struct PointSphere {
  Vec3 center;
};
struct ImaginarySphere {};

using SphereGeometry = std::variant<Plane, RealSphere, PointSphere, ImaginarySphere>;

struct Circle {
  Vec3 center;
  double radius;
  Vec3 normal;  // unit, first nonzero component positive
};

struct Line {
  Vec3 point;  // foot of the perpendicular from the origin
  Vec3 direction;  // unit, first nonzero component positive
};

using CircleOrLine = std::variant<Circle, Line>;

/// Normalizes and canonicalizes the normal. Throws NonPositiveRadius.
Circle make_circle(const Vec3& center, double radius, const Vec3& normal);
/// Normalizes the direction and moves the anchor to the foot point.
Line make_line(const Vec3& point, const Vec3& direction);

inline bool is_circle(const CircleOrLine& c) { return std::holds_alternative<Circle>(c); }
inline bool is_line(const CircleOrLine& c) { return std::holds_alternative<Line>(c); }

struct Inversion {
  Vec3 center;
  double radius;

  Inversion(const Vec3& center_, double radius_);
};

double sphere_eval(const SphereEq& s, const Vec3& x);
SphereEq sphere_from_center_radius(const Vec3& q, double r);
SphereGeometry sphere_geometry(const SphereEq& s);

/// b.b' - 2(ac' + a'c); signature (4,1), zero iff the surfaces meet orthogonally.
double mobius_inner(const SphereEq& s, const SphereEq& t);

/// |x - q|^2 - r^2 for a real sphere. Throws NotRealSphere.
double power_of_point(const SphereEq& s, const Vec3& x);

/// q + r^2 (x - q)/|x - q|^2. Throws CenterSingularity at the center.
Vec3 invert_point(const Inversion& inv, const Vec3& x);
SphereEq invert_sphere(const Inversion& inv, const SphereEq& s);

// Linear actions on sphere 5-vectors: the image equation of the surface
// under x -> x + t and x -> s*x respectively.
SphereEq translate_sphere(const SphereEq& s, const Vec3& t);
SphereEq scale_sphere(const SphereEq& s, double factor);

/// Intersection curve of two surfaces. Throws Disjoint, Tangent or Identical.
CircleOrLine circle_from_sphere_pair(const SphereEq& s, const SphereEq& t);

/// Throws CoincidentPoints.
CircleOrLine circle_through_points(const Vec3& p1, const Vec3& p2, const Vec3& p3);

double point_circle_distance(const CircleOrLine& curve, const Vec3& x);

/// Point at parameter t: angle for circles, signed arc length for lines.
Vec3 curve_point(const CircleOrLine& curve, double t);

/// Unit tangent at parameter t (counterclockwise about the normal for circles).
Vec3 curve_tangent(const CircleOrLine& curve, double t);

/// n equally spaced points; lines are sampled on [-half_span, half_span].
std::vector<Vec3> sample_curve(const CircleOrLine& curve, std::size_t n, double half_span = 1.0);

/// Two orthonormal vectors spanning the plane orthogonal to unit vector n.
std::pair<Vec3, Vec3> orthonormal_frame(const Vec3& n);

}  // namespace circlerect

#include "circlerect/geom.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace circlerect {

namespace {

// Coefficients below this (on the unit-norm representative) count as zero.
constexpr double kZeroCoeff = 1e-14;
// Sphere-plane tangency threshold relative to the squared geometric scale.
constexpr double kTangencyRel = 1e-10;
constexpr double kCollinearRel = 1e-12;
constexpr double kUnitTol = 1e-12;

Vec3 canonical_sign(const Vec3& v) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v[i]) > kUnitTol) return v[i] < 0 ? Vec3(-v) : v;
  }
  return v;
}

}  // namespace

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveRadius: return "NonPositiveRadius";
    case Errc::NotRealSphere: return "NotRealSphere";
    case Errc::CenterSingularity: return "CenterSingularity";
    case Errc::Disjoint: return "Disjoint";
    case Errc::Tangent: return "Tangent";
    case Errc::Identical: return "Identical";
    case Errc::CoincidentPoints: return "CoincidentPoints";
    case Errc::ChartDegenerate: return "ChartDegenerate";
    case Errc::MemberDegenerate: return "MemberDegenerate";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::FewerThanThreeCircles: return "FewerThanThreeCircles";
    case Errc::NearParallelImages: return "NearParallelImages";
    case Errc::AllSamplesNearCenter: return "AllSamplesNearCenter";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::ZeroDivisor: return "ZeroDivisor";
    case Errc::NonInvertibleLeading: return "NonInvertibleLeading";
    case Errc::NewtonDivergence: return "NewtonDivergence";
    case Errc::IllConditionedStencil: return "IllConditionedStencil";
    case Errc::DegenerateGrid: return "DegenerateGrid";
    case Errc::DegreeTooHigh: return "DegreeTooHigh";
    case Errc::RankDeficientNet: return "RankDeficientNet";
    case Errc::BasePoint: return "BasePoint";
    case Errc::BasePointHit: return "BasePointHit";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::SingularMetric: return "SingularMetric";
    case Errc::DegeneratePlane: return "DegeneratePlane";
    case Errc::MapSingular: return "MapSingular";
    case Errc::UnsupportedClass: return "UnsupportedClass";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::DegenerateCloud: return "DegenerateCloud";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::ZeroDenominator: return "ZeroDenominator";
  }
  return "Unknown";
}

Vec5 SphereEq::coeffs() const {
  Vec5 v;
  v << a, b[0], b[1], b[2], c;
  return v;
}

SphereEq SphereEq::from_coeffs(const Vec5& v) { return {v[0], Vec3(v[1], v[2], v[3]), v[4]}; }

SphereEq SphereEq::normalized() const {
  Vec5 v = coeffs();
  const double n = v.norm();
  if (n == 0.0) return *this;
  v /= n;
  for (int i = 0; i < 5; ++i) {
    if (std::abs(v[i]) > kZeroCoeff) {
      if (v[i] < 0) v = -v;
      break;
    }
  }
  return from_coeffs(v);
}

bool projectively_equal(const SphereEq& s, const SphereEq& t, double rel_tol) {
  const Vec5 u = s.normalized().coeffs();
  const Vec5 v = t.normalized().coeffs();
  return (u - v).norm() <= rel_tol || (u + v).norm() <= rel_tol;
}

Circle make_circle(const Vec3& center, double radius, const Vec3& normal) {
  if (!(radius > 0.0)) throw Error(Errc::NonPositiveRadius, "circle radius must be positive");
  return Circle{center, radius, canonical_sign(normal.normalized())};
}

Line make_line(const Vec3& point, const Vec3& direction) {
  const Vec3 d = canonical_sign(direction.normalized());
  return Line{point - point.dot(d) * d, d};
}

Inversion::Inversion(const Vec3& center_, double radius_) : center(center_), radius(radius_) {
  if (!(radius_ > 0.0)) throw Error(Errc::NonPositiveRadius, "inversion radius must be positive");
}

double sphere_eval(const SphereEq& s, const Vec3& x) { return s.a * x.squaredNorm() + s.b.dot(x) + s.c; }

SphereEq sphere_from_center_radius(const Vec3& q, double r) {
  if (!(r > 0.0)) throw Error(Errc::NonPositiveRadius, "sphere radius must be positive");
  return {1.0, -2.0 * q, q.squaredNorm() - r * r};
}

SphereGeometry sphere_geometry(const SphereEq& s) {
  const SphereEq n = s.normalized();
  if (std::abs(n.a) <= kZeroCoeff) {
    const double bn = n.b.norm();
    if (bn <= kZeroCoeff) return ImaginarySphere{};  // constant equation: no finite points
    return Plane{n.b / bn, -n.c / bn};
  }
  const double disc = n.disc();
  const Vec3 center = -n.b / (2.0 * n.a);
  if (std::abs(disc) <= kZeroCoeff) return PointSphere{center};
  if (disc < 0.0) return ImaginarySphere{};
  return RealSphere{center, std::sqrt(disc) / (2.0 * std::abs(n.a))};
}

double mobius_inner(const SphereEq& s, const SphereEq& t) {
  return s.b.dot(t.b) - 2.0 * (s.a * t.c + t.a * s.c);
}

double power_of_point(const SphereEq& s, const Vec3& x) {
  if (!std::holds_alternative<RealSphere>(sphere_geometry(s))) {
    throw Error(Errc::NotRealSphere, "power of a point needs a real sphere");
  }
  return sphere_eval(s, x) / s.a;
}

Vec3 invert_point(const Inversion& inv, const Vec3& x) {
  const Vec3 d = x - inv.center;
  const double d2 = d.squaredNorm();
  if (d2 == 0.0) throw Error(Errc::CenterSingularity, "point at the inversion center");
  return inv.center + (inv.radius * inv.radius / d2) * d;
}

SphereEq translate_sphere(const SphereEq& s, const Vec3& t) {
  return {s.a, s.b - 2.0 * s.a * t, s.a * t.squaredNorm() - s.b.dot(t) + s.c};
}

SphereEq scale_sphere(const SphereEq& s, double factor) {
  return {s.a, factor * s.b, factor * factor * s.c};
}

SphereEq invert_sphere(const Inversion& inv, const SphereEq& s) {
  // Conjugate the unit inversion at the origin, (a,b,c) -> (c,b,a).
  SphereEq u = scale_sphere(translate_sphere(s, -inv.center), 1.0 / inv.radius);
  std::swap(u.a, u.c);
  return translate_sphere(scale_sphere(u, inv.radius), inv.center);
}

CircleOrLine circle_from_sphere_pair(const SphereEq& s_in, const SphereEq& t_in) {
  const SphereEq s = s_in.normalized();
  const SphereEq t = t_in.normalized();
  if (projectively_equal(s, t)) throw Error(Errc::Identical, "the two surfaces coincide");

  const bool s_plane = std::abs(s.a) <= kZeroCoeff;
  const bool t_plane = std::abs(t.a) <= kZeroCoeff;

  if (s_plane && t_plane) {
    const Vec3 dir = s.b.cross(t.b);
    if (dir.norm() <= kCollinearRel * s.b.norm() * t.b.norm()) {
      throw Error(Errc::Disjoint, "parallel planes");
    }
    Eigen::Matrix3d m;
    m.row(0) = s.b.transpose();
    m.row(1) = t.b.transpose();
    m.row(2) = dir.transpose();
    const Vec3 p = m.partialPivLu().solve(Vec3(-s.c, -t.c, 0.0));
    return make_line(p, dir);
  }

  // Reduce to sphere-and-plane via the radical plane.
  const SphereEq& sph = std::abs(s.a) >= std::abs(t.a) ? s : t;
  const SphereEq& oth = std::abs(s.a) >= std::abs(t.a) ? t : s;
  SphereEq plane{0.0, oth.a * sph.b - sph.a * oth.b, oth.a * sph.c - sph.a * oth.c};
  const double bn = plane.b.norm();
  if (bn <= kZeroCoeff) throw Error(Errc::Disjoint, "concentric spheres");

  const Vec3 n = plane.b / bn;
  const double offset = -plane.c / bn;
  const Vec3 q = -sph.b / (2.0 * sph.a);
  const double rho2 = sph.disc() / (4.0 * sph.a * sph.a);
  const double dist = n.dot(q) - offset;
  const double h2 = rho2 - dist * dist;
  const double scale2 = std::max(std::abs(rho2), dist * dist);
  if (std::abs(h2) <= kTangencyRel * scale2) throw Error(Errc::Tangent, "surfaces touch at a single point");
  if (h2 < 0.0) throw Error(Errc::Disjoint, "surfaces do not meet");
  return make_circle(q - dist * n, std::sqrt(h2), n);
}

CircleOrLine circle_through_points(const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  const double scale = std::max({1.0, p1.norm(), p2.norm(), p3.norm()});
  const double eps = 1e-15 * scale;
  if ((p1 - p2).norm() <= eps || (p1 - p3).norm() <= eps || (p2 - p3).norm() <= eps) {
    throw Error(Errc::CoincidentPoints, "circle needs three distinct points");
  }
  const Vec3 a = p2 - p1;
  const Vec3 b = p3 - p1;
  const Vec3 w = a.cross(b);
  if (w.norm() <= kCollinearRel * a.norm() * b.norm()) {
    const Vec3 dir = a.norm() >= b.norm() ? a : b;
    return make_line(p1, dir);
  }
  const Vec3 center = p1 + (a.squaredNorm() * b - b.squaredNorm() * a).cross(w) / (2.0 * w.squaredNorm());
  return make_circle(center, (p1 - center).norm(), w);
}

double point_circle_distance(const CircleOrLine& curve, const Vec3& x) {
  if (const auto* c = std::get_if<Circle>(&curve)) {
    const Vec3 v = x - c->center;
    const double h = v.dot(c->normal);
    const double rho = (v - h * c->normal).norm();
    return std::hypot(rho - c->radius, h);
  }
  const auto& l = std::get<Line>(curve);
  const Vec3 v = x - l.point;
  return (v - v.dot(l.direction) * l.direction).norm();
}

std::pair<Vec3, Vec3> orthonormal_frame(const Vec3& n) {
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  const Vec3 u = n.cross(Vec3::Unit(axis)).normalized();
  return {u, n.cross(u)};
}

Vec3 curve_point(const CircleOrLine& curve, double t) {
  if (const auto* c = std::get_if<Circle>(&curve)) {
    const auto [u, w] = orthonormal_frame(c->normal);
    return c->center + c->radius * (std::cos(t) * u + std::sin(t) * w);
  }
  const auto& l = std::get<Line>(curve);
  return l.point + t * l.direction;
}

Vec3 curve_tangent(const CircleOrLine& curve, double t) {
  if (const auto* c = std::get_if<Circle>(&curve)) {
    const auto [u, w] = orthonormal_frame(c->normal);
    return -std::sin(t) * u + std::cos(t) * w;
  }
  return std::get<Line>(curve).direction;
}

std::vector<Vec3> sample_curve(const CircleOrLine& curve, std::size_t n, double half_span) {
  std::vector<Vec3> pts;
  pts.reserve(n);
  if (is_circle(curve)) {
    for (std::size_t j = 0; j < n; ++j) {
      pts.push_back(curve_point(curve, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n)));
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      const double t = n == 1 ? 0.0 : -half_span + 2.0 * half_span * static_cast<double>(j) / static_cast<double>(n - 1);
      pts.push_back(curve_point(curve, t));
    }
  }
  return pts;
}

}  // namespace circlerect

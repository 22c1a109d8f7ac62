#pragma once

// Closed-form Riemannian metrics on regions of R^3 whose geodesics are lines
// or circles, with finite-difference Christoffel symbols and sectional
// curvature, RK4 geodesics, circle fitting, pullbacks and gnomonic lifts.

#include <Eigen/Core>

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "circlerect/geom.hpp"
#include "circlerect/nets.hpp"

namespace circlerect {

using Mat3 = Eigen::Matrix3d;

enum class MetricKind { Euclidean, KleinHyperbolic, GnomonicElliptic, CircularHyperbolic, CircularElliptic };

std::string_view metric_name(MetricKind kind);
/// "euclidean", "klein-hyperbolic", "gnomonic-elliptic", "circular-hyperbolic", "circular-elliptic".
MetricKind parse_metric(std::string_view name);

struct MetricField {
  MetricKind kind;
  double domain_radius;  // open ball about the origin; infinity for all of R^3

  bool contains(const Vec3& x) const { return x.norm() < domain_radius; }
  /// Expected constant sectional curvature: 0, -1 or +1.
  double expected_curvature() const;
};

MetricField metric_field(MetricKind kind);

/// Throws OutOfDomain.
Mat3 metric_eval(const MetricField& metric, const Vec3& x);

/// Gamma[i](j, k) = Gamma^i_{jk}.
using Christoffel = std::array<Mat3, 3>;

/// Central-difference step used when h is not given: 1e-5 * (1 + |x|).
double default_christoffel_step(const Vec3& x);

/// Throws OutOfDomain (ball of radius 2h must fit) or SingularMetric.
Christoffel christoffel(const MetricField& metric, const Vec3& x, double h);
inline Christoffel christoffel(const MetricField& metric, const Vec3& x) {
  return christoffel(metric, x, default_christoffel_step(x));
}

struct GeodesicSample {
  double t;
  Vec3 x;
  Vec3 v;
};

enum class GeodesicStop {
  Completed,
  LeftDomain,     // the next state (or an RK stage) fell outside the domain
  EnergyDrift,    // relative drift of g(v,v) would exceed kGeodesicEnergyGuard
};

std::string_view geodesic_stop_name(GeodesicStop s);

/// Fixed steps cannot follow a geodesic running into a degenerate boundary
/// (speed blows up in finite time); the path is cut before accuracy is lost.
inline constexpr double kGeodesicEnergyGuard = 1e-8;

struct GeodesicPath {
  std::vector<GeodesicSample> samples;  // ends at the last accepted state
  double step = 0.0;
  GeodesicStop stop = GeodesicStop::Completed;

  bool truncated() const { return stop != GeodesicStop::Completed; }
};

/// Fixed-step classical RK4 on x' = v, v' = -Gamma(x)(v, v) with n steps
/// over [0, T]. Throws OutOfDomain if x0 is outside, DegeneratePlane for
/// v0 = 0 and TooFewSamples for n < 16.
GeodesicPath geodesic_integrate(const MetricField& metric, const Vec3& x0, const Vec3& v0, double T, std::size_t n);

double energy(const MetricField& metric, const Vec3& x, const Vec3& v);

struct CircleFit {
  CircleOrLine curve;
  double rms;
};

/// Plane by principal directions, algebraic circle fit in that plane,
/// Gauss-Newton refinement on geometric distance; falls back to a line when
/// the fitted curvature is negligible. Throws TooFewPoints or DegenerateCloud.
CircleFit circle_fit(std::span<const Vec3> points);

/// K(u, v) = g(R(u,v)v, u) / (g(u,u) g(v,v) - g(u,v)^2), with R from
/// central differences of the Christoffel symbols. Throws DegeneratePlane.
double sectional_curvature(const MetricField& metric, const Vec3& x, const Vec3& u, const Vec3& v);

struct AffineChar {
  int sign;  // x -> x / (1 + sign |x|^2)
};
struct InversionMap {
  Inversion inv;
};
struct IdentityMap {};

using SpaceMap = std::variant<AffineChar, InversionMap, IdentityMap>;

/// Throws MapSingular where the map is undefined.
Vec3 apply_map(const SpaceMap& map, const Vec3& x);
/// Closed-form Jacobian. Throws MapSingular.
Mat3 map_jacobian(const SpaceMap& map, const Vec3& x);

/// J^T g(map(x)) J. Throws MapSingular or OutOfDomain.
Mat3 pullback_metric(const MetricField& metric, const SpaceMap& map, const Vec3& x);

/// Hyperbolic: (y, 1)/sqrt(1 - |y|^2) on the hyperboloid; elliptic:
/// (y, 1)/sqrt(1 + |y|^2) on the unit sphere. Throws OutOfDomain or
/// UnsupportedClass.
Vec4 gnomonic_lift(const Vec3& y, GeometryClass cls);

/// The net whose characteristic map straightens this metric's geodesics.
SphereNet straightening_net(MetricKind kind);

}  // namespace circlerect

#pragma once

// Circle bundles through a center point: generation from the two-sphere
// normal form, simplicity and 54-line genericity, second-common-point
// detection, and the rectifying inversion.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "circlerect/geom.hpp"
#include "circlerect/poly.hpp"

namespace circlerect {

/// Tangent direction (1, k, m) at the bundle center.
struct TangentParam {
  double k = 0.0;
  double m = 0.0;
};

struct BundleMember {
  TangentParam dir;
  CircleOrLine curve;
};

struct CircleBundle {
  Vec3 center = Vec3::Zero();
  std::vector<BundleMember> members;
};

/// Carries the direction whose member could not be built.
class BundleMemberError : public Error {
 public:
  BundleMemberError(TangentParam dir, const std::string& what)
      : Error(Errc::MemberDegenerate, what), dir_(dir) {}
  TangentParam dir() const { return dir_; }

 private:
  TangentParam dir_;
};

/// Slopes beyond this are rejected: the (1,k,m) chart degenerates.
inline constexpr double kMaxSlope = 1e6;
inline constexpr double kDefaultBundleTol = 1e-7;

/// Member for (k,m) is the intersection of
///   A(k,m)|x|^2 + k x - y = 0  and  B(k,m)|x|^2 + m x - z = 0,
/// centered at the origin.
CircleBundle bundle_from_AB(const BivarPoly& A, const BivarPoly& B, std::span<const TangentParam> dirs);

/// Same construction from already-evaluated A(k,m), B(k,m).
CircleBundle bundle_from_values(std::span<const TangentParam> dirs, std::span<const double> a_vals,
                                std::span<const double> b_vals);

bool is_simple(const CircleBundle& bundle);

/// Rank test on the 54x55 matrix of degree-9 monomials at (1,k,m).
/// Throws CountMismatch unless exactly 54 directions are given.
bool is_generic_54(std::span<const TangentParam> dirs);

/// Singular values of the (row-normalized, Bombieri-weighted) 54x55 monomial matrix.
std::vector<double> genericity_spectrum(std::span<const TangentParam> dirs);

/// Median radius of the circle members, or 1 when there are none.
double bundle_scale(const CircleBundle& bundle);

/// Image of a member through the bundle center under the unit inversion at that center.
Line inverted_member(const CircleOrLine& curve, const Vec3& center);

/// The point other than the center shared by every member, if any.
/// tol is relative to bundle_scale(). Throws FewerThanThreeCircles when the
/// bundle has fewer than three members and NearParallelImages when the first
/// two inverted members are (nearly) parallel.
std::optional<Vec3> second_common_point(const CircleBundle& bundle, double tol = kDefaultBundleTol);

Inversion build_rectifier(const Vec3& q);

struct RectificationReport {
  std::optional<Vec3> second_point;
  std::vector<double> per_circle_residual;
  double max_residual = 0.0;
  bool passed = false;  // max_residual < tol
};

/// Samples strictly closer than this to the inversion center are skipped.
inline constexpr double kCenterExclusion = 1e-3;

/// RMS distance of the inverted samples of one member to their total
/// least-squares line. Returns nullopt when fewer than two samples survive the
/// center exclusion.
std::optional<double> member_line_residual(const CircleOrLine& curve, const Inversion& inv,
                                           std::size_t samples, double line_half_span);

/// RMS orthogonal distance of points to their total least-squares line.
double line_fit_rms(std::span<const Vec3> points);

RectificationReport verify_rectification(const CircleBundle& bundle, const Inversion& inv,
                                         std::size_t samples_per_circle, double tol = kDefaultBundleTol);

/// Detection, rectifier construction and verification in one pass. A bundle
/// of lines passes with no second point; any other bundle without a common
/// second point fails with an empty residual list.
RectificationReport rectify_bundle(const CircleBundle& bundle, std::size_t samples_per_circle = 64,
                                   double tol = kDefaultBundleTol);

}  // namespace circlerect

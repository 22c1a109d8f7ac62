#pragma once

// Nets of spheres (four independent sphere equations), their characteristic
// maps x -> [S1(x):S2(x):S3(x):S4(x)] into RP^3, degenerate points, and the
// hyperbolic / Euclidean / elliptic classification.

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "circlerect/geom.hpp"

namespace circlerect {

using Vec4 = Eigen::Vector4d;

class SphereNet {
 public:
  /// Throws RankDeficientNet unless the 4x5 coefficient matrix has rank 4.
  explicit SphereNet(const std::array<SphereEq, 4>& basis);

  const std::array<SphereEq, 4>& basis() const { return basis_; }
  const SphereEq& operator[](std::size_t i) const { return basis_[i]; }

 private:
  std::array<SphereEq, 4> basis_;
};

/// Homogeneous point of RP^3 in canonical form: unit norm, first nonzero
/// coordinate positive.
struct ProjPoint3 {
  Vec4 coords;

  static ProjPoint3 canonical(const Vec4& v);
};

enum class GeometryClass { Hyperbolic, Euclidean, Elliptic };

std::string_view geometry_name(GeometryClass g);
GeometryClass parse_geometry(std::string_view name);

/// Throws BasePoint when all four equations vanish at x.
ProjPoint3 char_map_eval(const SphereNet& net, const Vec3& x);

/// det of the 4x4 matrix with rows (dS_i/dx, dS_i/dy, dS_i/dz, S_i).
double degeneracy_determinant(const SphereNet& net, const Vec3& x);

/// |det| below 1e-10 times the product of the row norms.
bool degenerate_test(const SphereNet& net, const Vec3& x);

/// The sphere orthogonal (Moebius form) to every basis sphere, unit-normalized.
SphereEq orthogonal_complement(const SphereNet& net);

struct NetClassification {
  GeometryClass cls;
  SphereEq complement;
  double disc;
};

inline constexpr double kClassifyTau = 1e-10;

NetClassification classify_net_detailed(const SphereNet& net);
GeometryClass classify_net(const SphereNet& net);

/// {x, y, z, 1+|x|^2}, {x, y, z, 1}, {x, y, z, 1-|x|^2}.
SphereNet canonical_net(GeometryClass cls);

/// {x, y, z, |x|^2}: the Euclidean class presented by the pencil through the
/// origin; its degenerate locus is the origin.
SphereNet origin_pencil_net();

/// sigma_3 + sigma_4 of the n x 4 matrix of unit-normalized images; zero iff
/// the images lie on a projective line. Throws BasePointHit.
double projective_line_residual(const SphereNet& net, std::span<const Vec3> points);

/// Samples the curve (lines on [-1, 1]) and applies projective_line_residual.
double image_line_residual(const SphereNet& net, const CircleOrLine& curve, std::size_t n_samples);

/// Image of the net under a surface map acting linearly on sphere 5-vectors.
template <typename F>
SphereNet transform_net(const SphereNet& net, F&& f) {
  return SphereNet({f(net[0]), f(net[1]), f(net[2]), f(net[3])});
}

}  // namespace circlerect

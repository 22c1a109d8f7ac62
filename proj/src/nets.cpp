#include "circlerect/nets.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace circlerect {

namespace {

constexpr double kNetRankRel = 1e-12;
constexpr double kDegenerateRel = 1e-10;
constexpr double kBasePointRel = 1e-14;

Eigen::Matrix<double, 4, 5> coefficient_matrix(const std::array<SphereEq, 4>& basis) {
  Eigen::Matrix<double, 4, 5> m;
  for (int i = 0; i < 4; ++i) m.row(i) = basis[static_cast<std::size_t>(i)].coeffs().transpose();
  return m;
}

Vec4 raw_values(const SphereNet& net, const Vec3& x) {
  return {sphere_eval(net[0], x), sphere_eval(net[1], x), sphere_eval(net[2], x), sphere_eval(net[3], x)};
}

double value_scale(const SphereNet& net, const Vec3& x) {
  double s = 0.0;
  const double r2 = x.squaredNorm();
  for (const auto& sp : net.basis()) s += std::abs(sp.a) * r2 + sp.b.norm() * x.norm() + std::abs(sp.c);
  return s;
}

}  // namespace

SphereNet::SphereNet(const std::array<SphereEq, 4>& basis) : basis_(basis) {
  Eigen::Matrix<double, 4, 5> m = coefficient_matrix(basis);
  for (int i = 0; i < 4; ++i) {
    const double n = m.row(i).norm();
    if (n == 0.0) throw Error(Errc::RankDeficientNet, "zero sphere equation in net");
    m.row(i) /= n;
  }
  const Eigen::JacobiSVD<Eigen::Matrix<double, 4, 5>> svd(m);
  const auto& sv = svd.singularValues();
  if (sv[3] <= kNetRankRel * sv[0]) throw Error(Errc::RankDeficientNet, "net equations are dependent");
}

ProjPoint3 ProjPoint3::canonical(const Vec4& v) {
  Vec4 u = v.normalized();
  for (int i = 0; i < 4; ++i) {
    if (std::abs(u[i]) > 1e-14) {
      if (u[i] < 0) u = -u;
      break;
    }
  }
  return ProjPoint3{u};
}

std::string_view geometry_name(GeometryClass g) {
  switch (g) {
    case GeometryClass::Hyperbolic: return "hyperbolic";
    case GeometryClass::Euclidean: return "euclidean";
    case GeometryClass::Elliptic: return "elliptic";
  }
  return "?";
}

GeometryClass parse_geometry(std::string_view name) {
  if (name == "hyperbolic") return GeometryClass::Hyperbolic;
  if (name == "euclidean") return GeometryClass::Euclidean;
  if (name == "elliptic") return GeometryClass::Elliptic;
  throw Error(Errc::UnsupportedClass, "unknown geometry '" + std::string(name) + "'");
}

ProjPoint3 char_map_eval(const SphereNet& net, const Vec3& x) {
  const Vec4 v = raw_values(net, x);
  if (v.norm() <= kBasePointRel * value_scale(net, x)) {
    throw Error(Errc::BasePoint, "all four net equations vanish");
  }
  return ProjPoint3::canonical(v);
}

double degeneracy_determinant(const SphereNet& net, const Vec3& x) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i) {
    const auto& s = net[static_cast<std::size_t>(i)];
    const Vec3 grad = 2.0 * s.a * x + s.b;
    m.row(i) << grad[0], grad[1], grad[2], sphere_eval(s, x);
  }
  return m.determinant();
}

bool degenerate_test(const SphereNet& net, const Vec3& x) {
  double hadamard = 1.0;
  for (const auto& s : net.basis()) {
    const Vec3 grad = 2.0 * s.a * x + s.b;
    hadamard *= std::sqrt(grad.squaredNorm() + std::pow(sphere_eval(s, x), 2));
  }
  return std::abs(degeneracy_determinant(net, x)) <= kDegenerateRel * hadamard;
}

SphereEq orthogonal_complement(const SphereNet& net) {
  // Null vector of M G, with G the Gram matrix of the Moebius form.
  Eigen::Matrix<double, 5, 5> gram = Eigen::Matrix<double, 5, 5>::Zero();
  gram(0, 4) = -2.0;
  gram(4, 0) = -2.0;
  gram(1, 1) = gram(2, 2) = gram(3, 3) = 1.0;
  Eigen::Matrix<double, 4, 5> m = coefficient_matrix(net.basis());
  for (int i = 0; i < 4; ++i) m.row(i).normalize();
  const Eigen::Matrix<double, 4, 5> mg = m * gram;
  const Eigen::JacobiSVD<Eigen::Matrix<double, 4, 5>> svd(mg, Eigen::ComputeFullV);
  const Vec5 null = svd.matrixV().col(4);
  return SphereEq::from_coeffs(null).normalized();
}

NetClassification classify_net_detailed(const SphereNet& net) {
  const SphereEq s0 = orthogonal_complement(net);
  const double disc = s0.disc();
  GeometryClass cls = GeometryClass::Euclidean;
  if (disc > kClassifyTau) cls = GeometryClass::Hyperbolic;
  if (disc < -kClassifyTau) cls = GeometryClass::Elliptic;
  return {cls, s0, disc};
}

GeometryClass classify_net(const SphereNet& net) { return classify_net_detailed(net).cls; }

SphereNet canonical_net(GeometryClass cls) {
  const SphereEq sx{0.0, Vec3::UnitX(), 0.0};
  const SphereEq sy{0.0, Vec3::UnitY(), 0.0};
  const SphereEq sz{0.0, Vec3::UnitZ(), 0.0};
  switch (cls) {
    case GeometryClass::Hyperbolic: return SphereNet({sx, sy, sz, SphereEq{1.0, Vec3::Zero(), 1.0}});
    case GeometryClass::Euclidean: return SphereNet({sx, sy, sz, SphereEq{0.0, Vec3::Zero(), 1.0}});
    case GeometryClass::Elliptic: return SphereNet({sx, sy, sz, SphereEq{-1.0, Vec3::Zero(), 1.0}});
  }
  throw Error(Errc::UnsupportedClass, "unknown geometry class");
}

SphereNet origin_pencil_net() {
  return SphereNet({SphereEq{0.0, Vec3::UnitX(), 0.0}, SphereEq{0.0, Vec3::UnitY(), 0.0},
                    SphereEq{0.0, Vec3::UnitZ(), 0.0}, SphereEq{1.0, Vec3::Zero(), 0.0}});
}

double projective_line_residual(const SphereNet& net, std::span<const Vec3> points) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(points.size()), 4);
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      rows.row(static_cast<Eigen::Index>(i)) = char_map_eval(net, points[i]).coords.transpose();
    } catch (const Error&) {
      throw Error(Errc::BasePointHit, "sample lies on a base point of the net");
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  const auto& sv = svd.singularValues();
  double res = 0.0;
  for (Eigen::Index i = 2; i < sv.size(); ++i) res += sv[i];
  return res;
}

double image_line_residual(const SphereNet& net, const CircleOrLine& curve, std::size_t n_samples) {
  if (n_samples < 6) throw Error(Errc::TooFewSamples, "line test needs at least six samples");
  const std::vector<Vec3> pts = sample_curve(curve, n_samples, 1.0);
  return projective_line_residual(net, pts);
}

}  // namespace circlerect

#include "circlerect/metric.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace circlerect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCurvatureStepRel = 1e-4;
constexpr std::size_t kMinGeodesicSteps = 16;
constexpr int kGaussNewtonIters = 50;

void require_domain(const MetricField& metric, const Vec3& x, double margin) {
  if (!(x.norm() + margin < metric.domain_radius)) {
    throw Error(Errc::OutOfDomain, std::string(metric_name(metric.kind)) + " evaluated outside its domain");
  }
}

using Derivs = std::array<Mat3, 3>;  // d[l] = dg/dx_l

Christoffel christoffel_from(const Mat3& g, const Derivs& dg) {
  const Eigen::LLT<Mat3> llt(g);
  if (llt.info() != Eigen::Success) throw Error(Errc::SingularMetric, "metric is not positive definite");
  const Mat3 ginv = llt.solve(Mat3::Identity());
  Christoffel out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = j; k < 3; ++k) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += ginv(i, l) * (dg[j](l, k) + dg[k](j, l) - dg[l](j, k));
        out[i](j, k) = out[i](k, j) = 0.5 * s;
      }
    }
  }
  return out;
}

Vec3 geodesic_accel(const Christoffel& gam, const Vec3& v) {
  Vec3 a;
  for (int i = 0; i < 3; ++i) a[i] = -v.dot(gam[i] * v);
  return a;
}

}  // namespace

std::string_view metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::KleinHyperbolic: return "klein-hyperbolic";
    case MetricKind::GnomonicElliptic: return "gnomonic-elliptic";
    case MetricKind::CircularHyperbolic: return "circular-hyperbolic";
    case MetricKind::CircularElliptic: return "circular-elliptic";
  }
  return "?";
}

MetricKind parse_metric(std::string_view name) {
  for (MetricKind k : {MetricKind::Euclidean, MetricKind::KleinHyperbolic, MetricKind::GnomonicElliptic,
                       MetricKind::CircularHyperbolic, MetricKind::CircularElliptic}) {
    if (metric_name(k) == name) return k;
  }
  throw Error(Errc::UnsupportedClass, "unknown metric '" + std::string(name) + "'");
}

double MetricField::expected_curvature() const {
  switch (kind) {
    case MetricKind::Euclidean: return 0.0;
    case MetricKind::KleinHyperbolic:
    case MetricKind::CircularHyperbolic: return -1.0;
    case MetricKind::GnomonicElliptic:
    case MetricKind::CircularElliptic: return 1.0;
  }
  return 0.0;
}

MetricField metric_field(MetricKind kind) {
  switch (kind) {
    case MetricKind::Euclidean:
    case MetricKind::GnomonicElliptic: return {kind, kInf};
    case MetricKind::KleinHyperbolic:
    case MetricKind::CircularHyperbolic:
    case MetricKind::CircularElliptic: return {kind, 1.0};
  }
  return {kind, kInf};
}

Mat3 metric_eval(const MetricField& metric, const Vec3& x) {
  require_domain(metric, x, 0.0);
  const double r2 = x.squaredNorm();
  const Mat3 id = Mat3::Identity();
  const Mat3 xx = x * x.transpose();
  switch (metric.kind) {
    case MetricKind::Euclidean: return id;
    case MetricKind::KleinHyperbolic: {
      const double w = 1.0 - r2;
      return (w * id + xx) / (w * w);
    }
    case MetricKind::GnomonicElliptic: {
      const double p = 1.0 + r2;
      return id / p - xx / (p * p);
    }
    case MetricKind::CircularHyperbolic: {
      // Split into tangential and radial parts: the radial eigenvalue
      // (1 - r^2)^2 / d^2 would cancel catastrophically in 1 - 3 r^2 / d.
      const double d = 1.0 + r2 + r2 * r2;
      if (r2 == 0.0) return id;
      const Mat3 radial = xx / r2;
      const double w = 1.0 - r2;
      return (id - radial) / d + (w * w / (d * d)) * radial;
    }
    case MetricKind::CircularElliptic: {
      const double d = 1.0 - r2 + r2 * r2;
      return (id + 3.0 * xx / d) / d;
    }
  }
  return id;
}

std::string_view geodesic_stop_name(GeodesicStop s) {
  switch (s) {
    case GeodesicStop::Completed: return "completed";
    case GeodesicStop::LeftDomain: return "left-domain";
    case GeodesicStop::EnergyDrift: return "energy-drift";
  }
  return "?";
}

double default_christoffel_step(const Vec3& x) { return 1e-5 * (1.0 + x.norm()); }

Christoffel christoffel(const MetricField& metric, const Vec3& x, double h) {
  require_domain(metric, x, 2.0 * h);
  Derivs dg;
  for (int l = 0; l < 3; ++l) {
    // Five-point central stencil; the three-point one leaves ~1e-9 relative
    // error, enough to drift geodesic energy past the guard.
    const Vec3 e = h * Vec3::Unit(l);
    dg[l] = (8.0 * (metric_eval(metric, x + e) - metric_eval(metric, x - e)) -
             (metric_eval(metric, x + 2.0 * e) - metric_eval(metric, x - 2.0 * e))) /
            (12.0 * h);
  }
  return christoffel_from(metric_eval(metric, x), dg);
}

double energy(const MetricField& metric, const Vec3& x, const Vec3& v) { return v.dot(metric_eval(metric, x) * v); }

GeodesicPath geodesic_integrate(const MetricField& metric, const Vec3& x0, const Vec3& v0, double T, std::size_t n) {
  if (n < kMinGeodesicSteps) throw Error(Errc::TooFewSamples, "geodesic needs at least 16 steps");
  if (v0.norm() == 0.0) throw Error(Errc::DegeneratePlane, "zero initial velocity");
  require_domain(metric, x0, 0.0);

  GeodesicPath path;
  path.step = T / static_cast<double>(n);
  path.samples.reserve(n + 1);
  path.samples.push_back({0.0, x0, v0});
  const double h = path.step;
  const double e0 = energy(metric, x0, v0);
  Vec3 x = x0;
  Vec3 v = v0;
  auto acc = [&](const Vec3& p, const Vec3& w) { return geodesic_accel(christoffel(metric, p), w); };
  for (std::size_t s = 1; s <= n; ++s) {
    try {
      const Vec3 k1x = v;
      const Vec3 k1v = acc(x, v);
      const Vec3 k2x = v + 0.5 * h * k1v;
      const Vec3 k2v = acc(x + 0.5 * h * k1x, k2x);
      const Vec3 k3x = v + 0.5 * h * k2v;
      const Vec3 k3v = acc(x + 0.5 * h * k2x, k3x);
      const Vec3 k4x = v + h * k3v;
      const Vec3 k4v = acc(x + h * k3x, k4x);
      const Vec3 xn = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      const Vec3 vn = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      if (std::abs(energy(metric, xn, vn) - e0) > kGeodesicEnergyGuard * e0) {
        path.stop = GeodesicStop::EnergyDrift;
        break;
      }
      x = xn;
      v = vn;
    } catch (const Error& e) {
      if (e.code() != Errc::OutOfDomain && e.code() != Errc::SingularMetric) throw;
      path.stop = GeodesicStop::LeftDomain;
      break;
    }
    path.samples.push_back({static_cast<double>(s) * h, x, v});
  }
  return path;
}

CircleFit circle_fit(std::span<const Vec3> points) {
  const std::size_t n = points.size();
  if (n < 5) throw Error(Errc::TooFewPoints, "circle fit needs at least five points");
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(n);
  Eigen::MatrixXd centered(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < n; ++i) centered.row(static_cast<Eigen::Index>(i)) = (points[i] - centroid).transpose();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv[0] <= 1e-14 * (1.0 + centroid.norm())) throw Error(Errc::DegenerateCloud, "points coincide");

  const double spread = sv[0] / std::sqrt(static_cast<double>(n));
  auto rms_of = [&](const CircleOrLine& c) {
    double s = 0.0;
    for (const auto& p : points) s += std::pow(point_circle_distance(c, p), 2);
    return std::sqrt(s / static_cast<double>(n));
  };
  const CircleOrLine line = make_line(centroid, svd.matrixV().col(0));
  if (sv[1] <= 1e-12 * sv[0]) return {line, rms_of(line)};

  const Vec3 e1 = svd.matrixV().col(0);
  const Vec3 e2 = svd.matrixV().col(1);
  const Vec3 normal = svd.matrixV().col(2);

  // Algebraic (Kasa) fit on coordinates scaled by the spread.
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  std::vector<Eigen::Vector2d> uv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d = points[i] - centroid;
    uv[i] = Eigen::Vector2d(d.dot(e1), d.dot(e2)) / spread;
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = uv[i][0];
    a(r, 1) = uv[i][1];
    a(r, 2) = 1.0;
    rhs[r] = -uv[i].squaredNorm();
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(rhs);
  Eigen::Vector2d c2(-0.5 * sol[0], -0.5 * sol[1]);
  double rad2 = c2.squaredNorm() - sol[2];
  if (!std::isfinite(rad2) || rad2 <= 0.0 || std::sqrt(rad2) > 1e9) return {line, rms_of(line)};
  double rad = std::sqrt(rad2);

  // Gauss-Newton on the geometric residuals |uv - c| - rad.
  for (int it = 0; it < kGaussNewtonIters; ++it) {
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), 3);
    Eigen::VectorXd res(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d d = uv[i] - c2;
      const double dist = d.norm();
      const auto r = static_cast<Eigen::Index>(i);
      res[r] = dist - rad;
      if (dist > 0.0) {
        jac(r, 0) = -d[0] / dist;
        jac(r, 1) = -d[1] / dist;
      } else {
        jac(r, 0) = jac(r, 1) = 0.0;
      }
      jac(r, 2) = -1.0;
    }
    const Eigen::Vector3d delta = jac.colPivHouseholderQr().solve(-res);
    c2 += delta.head<2>();
    rad += delta[2];
    if (delta.norm() <= 1e-15 * (1.0 + rad)) break;
  }
  // Curvature below 1e-9 per unit spread counts as straight.
  if (!(rad > 0.0) || rad > 1e9) return {line, rms_of(line)};

  const Vec3 center = centroid + spread * (c2[0] * e1 + c2[1] * e2);
  const CircleOrLine circ = make_circle(center, spread * rad, normal);
  return {circ, rms_of(circ)};
}

double sectional_curvature(const MetricField& metric, const Vec3& x, const Vec3& u, const Vec3& v) {
  if (u.cross(v).norm() <= 1e-12 * u.norm() * v.norm()) {
    throw Error(Errc::DegeneratePlane, "u and v are linearly dependent");
  }
  const double h2 = kCurvatureStepRel * (1.0 + x.norm());
  require_domain(metric, x, h2 + 2.0 * default_christoffel_step(x) * 2.0);

  const Christoffel gam = christoffel(metric, x);
  std::array<Christoffel, 3> dgam;  // dgam[l][i](j,k) = d_l Gamma^i_{jk}
  for (int l = 0; l < 3; ++l) {
    const Vec3 e = h2 * Vec3::Unit(l);
    const Christoffel plus = christoffel(metric, x + e);
    const Christoffel minus = christoffel(metric, x - e);
    for (int i = 0; i < 3; ++i) dgam[l][i] = (plus[i] - minus[i]) / (2.0 * h2);
  }

  // R^i_{jkl} = d_k G^i_{lj} - d_l G^i_{kj} + G^i_{kp} G^p_{lj} - G^i_{lp} G^p_{kj}
  using Tensor4 = std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3>;
  Tensor4 up{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          double r = dgam[k][i](l, j) - dgam[l][i](k, j);
          for (int p = 0; p < 3; ++p) r += gam[i](k, p) * gam[p](l, j) - gam[i](l, p) * gam[p](k, j);
          up[i][j][k][l] = r;
        }
      }
    }
  }
  const Mat3 g = metric_eval(metric, x);
  Tensor4 low{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m) s += g(i, m) * up[m][j][k][l];
          low[i][j][k][l] = s;
        }
      }
    }
  }
  // Differencing noise breaks the pair antisymmetries and the pair exchange
  // symmetry; restoring them makes K a function of the plane u^v alone.
  auto anti = [&](int i, int j, int k, int l) {
    return 0.25 * (low[i][j][k][l] - low[j][i][k][l] - low[i][j][l][k] + low[j][i][l][k]);
  };
  double num = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          num += 0.5 * (anti(i, j, k, l) + anti(k, l, i, j)) * u[i] * v[j] * u[k] * v[l];
        }
      }
    }
  }
  const double guu = u.dot(g * u);
  const double gvv = v.dot(g * v);
  const double guv = u.dot(g * v);
  const double den = guu * gvv - guv * guv;
  if (!(den > 0.0)) throw Error(Errc::DegeneratePlane, "plane has zero metric area");
  return num / den;
}

Vec3 apply_map(const SpaceMap& map, const Vec3& x) {
  if (const auto* a = std::get_if<AffineChar>(&map)) {
    const double q = 1.0 + a->sign * x.squaredNorm();
    if (std::abs(q) <= 1e-14) throw Error(Errc::MapSingular, "affine characteristic map undefined on |x| = 1");
    return x / q;
  }
  if (const auto* im = std::get_if<InversionMap>(&map)) {
    try {
      return invert_point(im->inv, x);
    } catch (const Error&) {
      throw Error(Errc::MapSingular, "inversion undefined at its center");
    }
  }
  return x;
}

Mat3 map_jacobian(const SpaceMap& map, const Vec3& x) {
  if (const auto* a = std::get_if<AffineChar>(&map)) {
    const double s = a->sign;
    const double q = 1.0 + s * x.squaredNorm();
    if (std::abs(q) <= 1e-14) throw Error(Errc::MapSingular, "affine characteristic map undefined on |x| = 1");
    return Mat3::Identity() / q - 2.0 * s * x * x.transpose() / (q * q);
  }
  if (const auto* im = std::get_if<InversionMap>(&map)) {
    const Vec3 d = x - im->inv.center;
    const double d2 = d.squaredNorm();
    if (d2 == 0.0) throw Error(Errc::MapSingular, "inversion undefined at its center");
    const double r2 = im->inv.radius * im->inv.radius;
    return (r2 / d2) * (Mat3::Identity() - 2.0 * d * d.transpose() / d2);
  }
  return Mat3::Identity();
}

Mat3 pullback_metric(const MetricField& metric, const SpaceMap& map, const Vec3& x) {
  const Mat3 j = map_jacobian(map, x);
  return j.transpose() * metric_eval(metric, apply_map(map, x)) * j;
}

Vec4 gnomonic_lift(const Vec3& y, GeometryClass cls) {
  const Vec4 lifted(y[0], y[1], y[2], 1.0);
  switch (cls) {
    case GeometryClass::Hyperbolic: {
      const double w = 1.0 - y.squaredNorm();
      if (!(w > 0.0)) throw Error(Errc::OutOfDomain, "hyperbolic lift needs |y| < 1");
      return lifted / std::sqrt(w);
    }
    case GeometryClass::Elliptic: return lifted / std::sqrt(1.0 + y.squaredNorm());
    case GeometryClass::Euclidean: break;
  }
  throw Error(Errc::UnsupportedClass, "no gnomonic lift for the Euclidean class");
}

SphereNet straightening_net(MetricKind kind) {
  switch (kind) {
    case MetricKind::CircularHyperbolic: return canonical_net(GeometryClass::Hyperbolic);
    case MetricKind::CircularElliptic: return canonical_net(GeometryClass::Elliptic);
    default: return canonical_net(GeometryClass::Euclidean);
  }
}

}  // namespace circlerect

#include "circlerect/bundle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

#include "circlerect/kernels.hpp"

namespace circlerect {

namespace {

constexpr double kSimpleSeparation = 1e-9;
constexpr int kConeDegree = 9;
constexpr std::size_t kGenericCount = 54;
constexpr std::size_t kConeMonomials = 55;
// Numerical rank cutoff relative to the largest singular value.
constexpr double kGenericRankRel = 1e-10;
constexpr double kParallelSin = 1e-9;

void check_chart(TangentParam d) {
  if (!std::isfinite(d.k) || !std::isfinite(d.m) || std::abs(d.k) > kMaxSlope || std::abs(d.m) > kMaxSlope) {
    throw Error(Errc::ChartDegenerate, "tangent direction outside the (1,k,m) chart");
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

CircleBundle bundle_from_values(std::span<const TangentParam> dirs, std::span<const double> a_vals,
                                std::span<const double> b_vals) {
  CircleBundle bundle;
  bundle.members.reserve(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const TangentParam d = dirs[i];
    check_chart(d);
    const SphereEq sa{a_vals[i], Vec3(d.k, -1.0, 0.0), 0.0};
    const SphereEq sb{b_vals[i], Vec3(d.m, 0.0, -1.0), 0.0};
    try {
      bundle.members.push_back({d, circle_from_sphere_pair(sa, sb)});
    } catch (const Error& e) {
      throw BundleMemberError(d, e.what());
    }
  }
  return bundle;
}

CircleBundle bundle_from_AB(const BivarPoly& A, const BivarPoly& B, std::span<const TangentParam> dirs) {
  std::vector<double> a(dirs.size());
  std::vector<double> b(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    a[i] = A.eval(dirs[i].k, dirs[i].m);
    b[i] = B.eval(dirs[i].k, dirs[i].m);
  }
  return bundle_from_values(dirs, a, b);
}

bool is_simple(const CircleBundle& bundle) {
  const auto& ms = bundle.members;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      if (std::hypot(ms[i].dir.k - ms[j].dir.k, ms[i].dir.m - ms[j].dir.m) <= kSimpleSeparation) return false;
    }
  }
  return true;
}

std::vector<double> genericity_spectrum(std::span<const TangentParam> dirs) {
  if (dirs.size() != kGenericCount) {
    throw Error(Errc::CountMismatch, "genericity test needs exactly 54 directions");
  }
  // Columns carry sqrt of the multinomial weight so every row of unit
  // vectors has unit norm; column scaling leaves the rank unchanged.
  std::vector<std::array<int, 3>> exps;
  std::vector<double> weights;
  for (int i = kConeDegree; i >= 0; --i) {
    for (int j = kConeDegree - i; j >= 0; --j) {
      const int l = kConeDegree - i - j;
      exps.push_back({i, j, l});
      weights.push_back(std::sqrt(factorial(kConeDegree) / (factorial(i) * factorial(j) * factorial(l))));
    }
  }
  Eigen::MatrixXd mat(kGenericCount, kConeMonomials);
  for (std::size_t r = 0; r < kGenericCount; ++r) {
    check_chart(dirs[r]);
    const Vec3 v = Vec3(1.0, dirs[r].k, dirs[r].m).normalized();
    for (std::size_t c = 0; c < kConeMonomials; ++c) {
      const auto& e = exps[c];
      mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          weights[c] * std::pow(v[0], e[0]) * std::pow(v[1], e[1]) * std::pow(v[2], e[2]);
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
  const auto& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

bool is_generic_54(std::span<const TangentParam> dirs) {
  const std::vector<double> sv = genericity_spectrum(dirs);
  const double cutoff = kGenericRankRel * sv.front();
  return std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cutoff; }) ==
         static_cast<std::ptrdiff_t>(kGenericCount);
}

double bundle_scale(const CircleBundle& bundle) {
  std::vector<double> radii;
  for (const auto& mem : bundle.members) {
    if (const auto* c = std::get_if<Circle>(&mem.curve)) radii.push_back(c->radius);
  }
  if (radii.empty()) return 1.0;
  const auto mid = radii.begin() + static_cast<std::ptrdiff_t>(radii.size() / 2);
  std::nth_element(radii.begin(), mid, radii.end());
  return *mid;
}

Line inverted_member(const CircleOrLine& curve, const Vec3& center) {
  if (const auto* c = std::get_if<Circle>(&curve)) {
    // The antipode of the center inverts to the foot of the image line,
    // which runs parallel to the tangent at the center.
    const Vec3 v = c->center - center;
    const Vec3 foot = center + v / (2.0 * v.squaredNorm());
    return make_line(foot, c->normal.cross(v));
  }
  const auto& l = std::get<Line>(curve);
  return make_line(l.point, l.direction);
}

std::optional<Vec3> second_common_point(const CircleBundle& bundle, double tol) {
  if (bundle.members.size() < 3) {
    throw Error(Errc::FewerThanThreeCircles, "second-point detection needs at least three members");
  }
  const double scale = bundle_scale(bundle);
  const double abs_tol = tol * scale;
  const Vec3& p = bundle.center;

  const Line l1 = inverted_member(bundle.members[0].curve, p);
  const Line l2 = inverted_member(bundle.members[1].curve, p);
  const Vec3 n = l1.direction.cross(l2.direction);
  if (n.norm() < kParallelSin) {
    throw Error(Errc::NearParallelImages, "first two inverted members are nearly parallel");
  }

  // Closest points p1 + s d1 and p2 + t d2.
  const Vec3 w = l1.point - l2.point;
  const double b = l1.direction.dot(l2.direction);
  const double d = l1.direction.dot(w);
  const double e = l2.direction.dot(w);
  const double den = 1.0 - b * b;
  const double s = (b * e - d) / den;
  const double t = (e - b * d) / den;
  const Vec3 c1 = l1.point + s * l1.direction;
  const Vec3 c2 = l2.point + t * l2.direction;
  const Vec3 mid = 0.5 * (c1 + c2);

  const double dist_mid = (mid - p).norm();
  // Meeting at the center means the second point is at infinity.
  if (dist_mid <= 1e-12 / scale) return std::nullopt;
  // Gap measured back in the original space: lengths near the image point
  // scale by |Q - p|^2 = 1 / dist_mid^2.
  const double gap = (c1 - c2).norm() / (dist_mid * dist_mid);
  if (gap >= abs_tol) return std::nullopt;

  const Vec3 q = invert_point(Inversion(p, 1.0), mid);
  for (const auto& mem : bundle.members) {
    if (point_circle_distance(mem.curve, q) >= abs_tol) return std::nullopt;
  }
  return q;
}

Inversion build_rectifier(const Vec3& q) { return Inversion(q, 1.0); }

double line_fit_rms(std::span<const Vec3> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < 2) return 0.0;
  Vec3 centroid = Vec3::Zero();
  for (const auto& pt : points) centroid += pt;
  centroid /= static_cast<double>(n);
  Eigen::MatrixXd centered(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) centered.row(i) = (points[static_cast<std::size_t>(i)] - centroid).transpose();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Vec3 dir = svd.matrixV().col(0);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 r = centered.row(i).transpose();
    sum += (r - r.dot(dir) * dir).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(n));
}

std::optional<double> member_line_residual(const CircleOrLine& curve, const Inversion& inv, std::size_t samples,
                                           double line_half_span) {
  std::vector<Vec3> mapped;
  mapped.reserve(samples);
  for (const Vec3& x : sample_curve(curve, samples, line_half_span)) {
    if ((x - inv.center).norm() < kCenterExclusion) continue;
    mapped.push_back(invert_point(inv, x));
  }
  if (mapped.size() < 2) return std::nullopt;
  return line_fit_rms(mapped);
}

RectificationReport verify_rectification(const CircleBundle& bundle, const Inversion& inv,
                                         std::size_t samples_per_circle, double tol) {
  if (samples_per_circle < 4) throw Error(Errc::TooFewSamples, "need at least four samples per member");
  const auto per_member =
      kernels::rectification_residuals(bundle, inv, samples_per_circle, bundle_scale(bundle));

  RectificationReport report;
  bool any = false;
  for (const auto& r : per_member) {
    const double v = r.value_or(0.0);
    any = any || r.has_value();
    report.per_circle_residual.push_back(v);
    report.max_residual = std::max(report.max_residual, v);
  }
  if (!any) throw Error(Errc::AllSamplesNearCenter, "every sample lies at the inversion center");
  report.passed = report.max_residual < tol;
  return report;
}

RectificationReport rectify_bundle(const CircleBundle& bundle, std::size_t samples_per_circle, double tol) {
  const std::optional<Vec3> q = second_common_point(bundle, tol);
  if (q) {
    RectificationReport report = verify_rectification(bundle, build_rectifier(*q), samples_per_circle, tol);
    report.second_point = q;
    return report;
  }
  RectificationReport report;
  const bool all_lines =
      std::all_of(bundle.members.begin(), bundle.members.end(), [](const auto& mem) { return is_line(mem.curve); });
  if (all_lines) {
    // Already straight: the identity rectifies it.
    report.per_circle_residual.assign(bundle.members.size(), 0.0);
    report.passed = true;
  }
  return report;
}

}  // namespace circlerect

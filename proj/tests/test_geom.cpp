#include <cmath>

#include "circlerect/geom.hpp"
#include "circlerect/rng.hpp"
#include "test_util.hpp"

using namespace circlerect;

namespace {

const SphereEq kUnit{1.0, Vec3::Zero(), -1.0};

}  // namespace

TEST(SphereFromCenterRadius, Examples) {
  const SphereEq s = sphere_from_center_radius(Vec3::Zero(), 1.0);
  EXPECT_TRUE(projectively_equal(s, kUnit));
  EXPECT_DOUBLE_EQ(s.a, 1.0);
  EXPECT_DOUBLE_EQ(s.c, -1.0);
  const SphereEq t = sphere_from_center_radius(Vec3(0, 1, 0), 1.0);
  EXPECT_TRUE(projectively_equal(t, SphereEq{1.0, Vec3(0, -2, 0), 0.0}));
  EXPECT_ERRC(sphere_from_center_radius(Vec3(1, 0, 0), 0.0), Errc::NonPositiveRadius);
}

TEST(SphereGeometry, Examples) {
  const auto g = sphere_geometry(kUnit);
  ASSERT_TRUE(std::holds_alternative<RealSphere>(g));
  EXPECT_TRUE(near_vec(std::get<RealSphere>(g).center, Vec3::Zero(), 1e-15));
  EXPECT_NEAR(std::get<RealSphere>(g).radius, 1.0, 1e-15);

  const auto p = sphere_geometry(SphereEq{1.0, Vec3(-2, 0, 0), 1.0});
  ASSERT_TRUE(std::holds_alternative<PointSphere>(p));
  EXPECT_TRUE(near_vec(std::get<PointSphere>(p).center, Vec3(1, 0, 0), 1e-15));

  EXPECT_TRUE(std::holds_alternative<ImaginarySphere>(sphere_geometry(SphereEq{1.0, Vec3::Zero(), 1.0})));

  const auto pl = sphere_geometry(SphereEq{0.0, Vec3(0, 2, 0), -2.0});
  ASSERT_TRUE(std::holds_alternative<Plane>(pl));
  EXPECT_TRUE(near_vec(std::get<Plane>(pl).normal.cwiseAbs(), Vec3(0, 1, 0), 1e-15));
}

TEST(SphereGeometry, ScaleInvariantClassification) {
  SplitRng rng(5);
  for (int i = 0; i < 50; ++i) {
    const SphereEq s{rng.uniform(-2, 2), Vec3(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)),
                     rng.uniform(-2, 2)};
    const auto base = sphere_geometry(s).index();
    for (double f : {3.0, 0.25, -1.0, -7.5}) {
      const SphereEq t{f * s.a, f * s.b, f * s.c};
      EXPECT_EQ(sphere_geometry(t).index(), base);
    }
  }
}

TEST(MobiusInner, Examples) {
  EXPECT_DOUBLE_EQ(mobius_inner(kUnit, kUnit), 4.0);
  EXPECT_NEAR(mobius_inner(kUnit, SphereEq{1.0, Vec3(-2 * std::sqrt(2.0), 0, 0), 1.0}), 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(mobius_inner(kUnit, SphereEq{0.0, Vec3(1, 0, 0), 0.0}), 0.0);
}

TEST(MobiusInner, SelfInnerIsDiscriminant) {
  SplitRng rng(6);
  for (int i = 0; i < 20; ++i) {
    const SphereEq s{rng.uniform(-2, 2), Vec3(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)),
                     rng.uniform(-2, 2)};
    EXPECT_NEAR(mobius_inner(s, s), s.disc(), 1e-13);
  }
}

TEST(MobiusInner, OrthogonalIffPythagorean) {
  // Two real spheres with |q - q'|^2 = r^2 + r'^2.
  const SphereEq s = sphere_from_center_radius(Vec3(0.3, -0.2, 0.1), 0.6);
  const SphereEq t = sphere_from_center_radius(Vec3(0.3, -0.2, 0.1) + Vec3(0, 0, 1), 0.8);
  EXPECT_NEAR(mobius_inner(s, t), 0.0, 1e-14);
}

TEST(PowerOfPoint, Examples) {
  EXPECT_DOUBLE_EQ(power_of_point(kUnit, Vec3(2, 0, 0)), 3.0);
  EXPECT_DOUBLE_EQ(power_of_point(kUnit, Vec3(1, 0, 0)), 0.0);
  EXPECT_DOUBLE_EQ(power_of_point(kUnit, Vec3::Zero()), -1.0);
  EXPECT_ERRC(power_of_point(SphereEq{0.0, Vec3(1, 0, 0), 0.0}, Vec3::Zero()), Errc::NotRealSphere);
}

TEST(PowerOfPoint, EqualsEvalOverA) {
  const SphereEq s{2.5, Vec3(1, -2, 0.5), -3.0};
  SplitRng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Vec3 x = rng.in_ball(3.0);
    EXPECT_EQ(power_of_point(s, x), sphere_eval(s, x) / s.a);
  }
}

TEST(InvertPoint, Examples) {
  EXPECT_TRUE(near_vec(invert_point(Inversion(Vec3::Zero(), 1.0), Vec3(2, 0, 0)), Vec3(0.5, 0, 0), 1e-15));
  const Inversion inv(Vec3(0, 1, 0), 1.0);
  EXPECT_TRUE(near_vec(invert_point(inv, Vec3::Zero()), Vec3::Zero(), 1e-15));
  EXPECT_TRUE(near_vec(invert_point(inv, Vec3(0, 3, 0)), Vec3(0, 1.5, 0), 1e-15));
  EXPECT_ERRC(invert_point(inv, Vec3(0, 1, 0)), Errc::CenterSingularity);
}

TEST(InvertPoint, Involution) {
  SplitRng rng(8);
  for (int i = 0; i < 200; ++i) {
    const Inversion inv(rng.in_ball(5.0), rng.uniform(0.1, 3.0));
    const double dist = inv.radius * std::pow(10.0, rng.uniform(-3, 3));
    const Vec3 x = inv.center + dist * rng.unit_vector();
    const Vec3 back = invert_point(inv, invert_point(inv, x));
    EXPECT_LT((back - x).norm(), 1e-10 * std::max(1.0, x.norm()));
  }
}

TEST(InvertSphere, PlaneToSphereByPointSampling) {
  const Inversion inv(Vec3::Zero(), 1.0);
  const SphereEq plane{0.0, Vec3(0, 1, 0), -1.0};  // y = 1
  const SphereEq img = invert_sphere(inv, plane);
  EXPECT_TRUE(projectively_equal(img, SphereEq{-1.0, Vec3(0, 1, 0), 0.0}));
  SplitRng rng(9);
  const SphereEq n = img.normalized();
  for (int i = 0; i < 20; ++i) {
    const Vec3 p(rng.uniform(-3, 3), 1.0, rng.uniform(-3, 3));
    EXPECT_NEAR(sphere_eval(n, invert_point(inv, p)), 0.0, 1e-12);
  }
}

TEST(InvertSphere, UnitSphereFixedAndRadiusTwo) {
  const Inversion inv(Vec3::Zero(), 1.0);
  EXPECT_TRUE(projectively_equal(invert_sphere(inv, kUnit), kUnit));
  const SphereEq r2{1.0, Vec3::Zero(), -4.0};
  const SphereEq img = invert_sphere(inv, r2);
  EXPECT_TRUE(projectively_equal(img, SphereEq{-4.0, Vec3::Zero(), 1.0}));
  const SphereEq n = img.normalized();
  SplitRng rng(10);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(sphere_eval(n, invert_point(inv, 2.0 * rng.unit_vector())), 0.0, 1e-12);
}

TEST(InvertSphere, GeneralInversionByPointSampling) {
  SplitRng rng(11);
  for (int t = 0; t < 30; ++t) {
    const Inversion inv(rng.in_ball(2.0), rng.uniform(0.3, 2.0));
    const Vec3 q = rng.in_ball(2.0);
    const double r = rng.uniform(0.2, 1.5);
    const SphereEq img = invert_sphere(inv, sphere_from_center_radius(q, r)).normalized();
    for (int i = 0; i < 10; ++i) {
      const Vec3 p = q + r * rng.unit_vector();
      if ((p - inv.center).norm() < 1e-2) continue;
      const Vec3 ip = invert_point(inv, p);
      EXPECT_NEAR(sphere_eval(img, ip), 0.0, 1e-10 * (1.0 + ip.squaredNorm()));
    }
  }
}

TEST(InvertSphere, PreservesOrthogonality) {
  SplitRng rng(12);
  for (int t = 0; t < 30; ++t) {
    // Orthogonal pair by construction.
    const Vec3 q = rng.in_ball(1.0);
    const double r1 = rng.uniform(0.3, 1.0);
    const double r2 = rng.uniform(0.3, 1.0);
    const Vec3 q2 = q + std::hypot(r1, r2) * rng.unit_vector();
    const SphereEq s = sphere_from_center_radius(q, r1);
    const SphereEq u = sphere_from_center_radius(q2, r2);
    ASSERT_NEAR(mobius_inner(s, u), 0.0, 1e-12);
    const Inversion inv(rng.in_ball(3.0), rng.uniform(0.5, 2.0));
    const SphereEq is = invert_sphere(inv, s);
    const SphereEq iu = invert_sphere(inv, u);
    EXPECT_NEAR(mobius_inner(is, iu) / (is.coeffs().norm() * iu.coeffs().norm()), 0.0, 1e-9);
  }
}

TEST(CircleFromSpherePair, Examples) {
  const CircleOrLine c = circle_from_sphere_pair(kUnit, SphereEq{0.0, Vec3(0, 0, 1), 0.0});
  ASSERT_TRUE(is_circle(c));
  EXPECT_TRUE(near_vec(std::get<Circle>(c).center, Vec3::Zero(), 1e-15));
  EXPECT_NEAR(std::get<Circle>(c).radius, 1.0, 1e-15);
  EXPECT_TRUE(near_vec(std::get<Circle>(c).normal, Vec3(0, 0, 1), 1e-15));

  const CircleOrLine l = circle_from_sphere_pair(SphereEq{0.0, Vec3(0, 1, 0), 0.0}, SphereEq{0.0, Vec3(0, 0, 1), 0.0});
  ASSERT_TRUE(is_line(l));
  EXPECT_TRUE(near_vec(std::get<Line>(l).point, Vec3::Zero(), 1e-15));
  EXPECT_TRUE(near_vec(std::get<Line>(l).direction, Vec3(1, 0, 0), 1e-15));

  EXPECT_ERRC(circle_from_sphere_pair(kUnit, SphereEq{0.0, Vec3(0, 0, 1), -2.0}), Errc::Disjoint);
  EXPECT_ERRC(circle_from_sphere_pair(kUnit, SphereEq{0.0, Vec3(0, 0, 1), -1.0}), Errc::Tangent);
  EXPECT_ERRC(circle_from_sphere_pair(kUnit, SphereEq{-2.0, Vec3::Zero(), 2.0}), Errc::Identical);
}

TEST(CircleFromSpherePair, AgreesWithThreePointCircle) {
  SplitRng rng(13);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    const SphereEq s = sphere_from_center_radius(rng.in_ball(1.0), rng.uniform(0.5, 1.5));
    const SphereEq u = sphere_from_center_radius(rng.in_ball(1.0), rng.uniform(0.5, 1.5));
    CircleOrLine c;
    try {
      c = circle_from_sphere_pair(s, u);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    const CircleOrLine d = circle_through_points(curve_point(c, 0.1), curve_point(c, 2.0), curve_point(c, 4.0));
    ASSERT_TRUE(is_circle(d));
    EXPECT_TRUE(near_vec(std::get<Circle>(d).center, std::get<Circle>(c).center, 1e-10));
    EXPECT_NEAR(std::get<Circle>(d).radius, std::get<Circle>(c).radius, 1e-10);
    EXPECT_TRUE(near_vec(std::get<Circle>(d).normal, std::get<Circle>(c).normal, 1e-10));
    // Points lie on both surfaces.
    for (double a : {0.0, 1.0, 3.0}) {
      EXPECT_NEAR(sphere_eval(s, curve_point(c, a)), 0.0, 1e-12);
      EXPECT_NEAR(sphere_eval(u, curve_point(c, a)), 0.0, 1e-12);
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(CircleThroughPoints, Examples) {
  const CircleOrLine c = circle_through_points(Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(-1, 0, 0));
  ASSERT_TRUE(is_circle(c));
  EXPECT_TRUE(near_vec(std::get<Circle>(c).center, Vec3::Zero(), 1e-15));
  EXPECT_NEAR(std::get<Circle>(c).radius, 1.0, 1e-15);
  EXPECT_TRUE(near_vec(std::get<Circle>(c).normal, Vec3(0, 0, 1), 1e-15));

  const CircleOrLine l = circle_through_points(Vec3::Zero(), Vec3(1, 0, 0), Vec3(2, 0, 0));
  ASSERT_TRUE(is_line(l));
  EXPECT_TRUE(near_vec(std::get<Line>(l).point, Vec3::Zero(), 1e-15));
  EXPECT_TRUE(near_vec(std::get<Line>(l).direction, Vec3(1, 0, 0), 1e-15));

  EXPECT_ERRC(circle_through_points(Vec3::Zero(), Vec3::Zero(), Vec3(1, 0, 0)), Errc::CoincidentPoints);
}

TEST(PointCircleDistance, Examples) {
  const CircleOrLine c = make_circle(Vec3::Zero(), 1.0, Vec3(0, 0, 1));
  EXPECT_NEAR(point_circle_distance(c, Vec3(2, 0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(point_circle_distance(c, Vec3(0, 0, 1)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(point_circle_distance(c, Vec3(1, 0, 0)), 0.0, 1e-15);
  const CircleOrLine l = make_line(Vec3(0, 1, 0), Vec3(1, 0, 0));
  EXPECT_NEAR(point_circle_distance(l, Vec3(5, 1, 2)), 2.0, 1e-15);
}

TEST(CircleCanonicalForm, NormalSignIsCanonical) {
  const Circle a = make_circle(Vec3::Zero(), 1.0, Vec3(0, 0, -3));
  const Circle b = make_circle(Vec3::Zero(), 1.0, Vec3(0, 0, 1));
  EXPECT_TRUE(near_vec(a.normal, b.normal, 0.0));
  EXPECT_ERRC(make_circle(Vec3::Zero(), -1.0, Vec3(0, 0, 1)), Errc::NonPositiveRadius);
}

TEST(SampleCurve, PointsLieOnCurve) {
  const CircleOrLine c = make_circle(Vec3(1, 2, 3), 0.7, Vec3(1, 1, 0));
  for (const Vec3& p : sample_curve(c, 17)) EXPECT_LT(point_circle_distance(c, p), 1e-14);
  const CircleOrLine l = make_line(Vec3(1, 2, 3), Vec3(1, -1, 2));
  const auto pts = sample_curve(l, 5, 2.0);
  ASSERT_EQ(pts.size(), 5U);
  EXPECT_NEAR((pts.front() - pts.back()).norm(), 4.0, 1e-14);
}

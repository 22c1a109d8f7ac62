#include <Eigen/Dense>

#include <cmath>

#include "circlerect/bundle.hpp"
#include "circlerect/expr.hpp"
#include "circlerect/rng.hpp"
#include "circlerect/taylor.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace circlerect;

namespace {

const BivarPoly K = BivarPoly::k();
const BivarPoly M = BivarPoly::m();

Rational small_rational(SplitRng& rng) {
  return Rational(static_cast<long>(rng.next() % 19) - 9, static_cast<long>(rng.next() % 5) + 1);
}

BivarPoly random_poly(SplitRng& rng, int max_degree) {
  BivarPoly p;
  for (int d = 0; d <= max_degree; ++d) {
    for (int i = 0; i <= d; ++i) {
      if (rng.uniform() < 0.6) p.add_term(i, d - i, small_rational(rng));
    }
  }
  return p;
}

std::vector<TangentParam> grid(SplitRng& rng, std::size_t n) {
  std::vector<TangentParam> g(n);
  for (auto& p : g) p = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
  return g;
}

BivarFunction fn(const BivarPoly& p) {
  return [p](double k, double m) { return p.eval(k, m); };
}

// Relative residual of the best total-degree-d fit, via normal equations.
double normal_equation_residual(std::span<const TangentParam> g, const std::vector<double>& v, int degree) {
  std::vector<std::pair<int, int>> monos;
  for (int d = 0; d <= degree; ++d) {
    for (int i = 0; i <= d; ++i) monos.emplace_back(i, d - i);
  }
  Eigen::MatrixXd X(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(monos.size()));
  Eigen::VectorXd y(static_cast<Eigen::Index>(g.size()));
  for (std::size_t r = 0; r < g.size(); ++r) {
    for (std::size_t c = 0; c < monos.size(); ++c) {
      X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          std::pow(g[r].k, monos[c].first) * std::pow(g[r].m, monos[c].second);
    }
    y[static_cast<Eigen::Index>(r)] = v[r];
  }
  const Eigen::VectorXd beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
  return (X * beta - y).norm() / y.norm();
}

}  // namespace

TEST(ClosedTaylor, Examples) {
  const BivarPoly f = fundamental_factor();
  const TaylorSextet one = closed_taylor(BivarPoly(1L), BivarPoly());
  EXPECT_EQ(one.phi2, f);
  EXPECT_EQ(one.phi3, 2L * K * f);
  EXPECT_EQ(one.phi4, f * f + 4L * K * K * f);
  EXPECT_TRUE(one.psi2.is_zero() && one.psi3.is_zero() && one.psi4.is_zero());

  const TaylorSextet zero = closed_taylor(BivarPoly(), BivarPoly());
  for (const auto* p : {&zero.phi2, &zero.phi3, &zero.phi4, &zero.psi2, &zero.psi3, &zero.psi4}) {
    EXPECT_TRUE(p->is_zero());
  }

  const TaylorSextet lin = closed_taylor(parse_poly("2*k + 1"), parse_poly("2*m + 3"));
  EXPECT_EQ(lin.phi2.eval(Rational(0), Rational(0)), Rational(1));
  EXPECT_EQ(lin.psi2.eval(Rational(0), Rational(0)), Rational(3));
}

TEST(ClosedTaylor, MatchesSeriesOracle) {
  SplitRng rng(71);
  for (int t = 0; t < 50; ++t) {
    const BivarPoly A = random_poly(rng, 3);
    const BivarPoly B = random_poly(rng, 3);
    const TaylorSextet s = closed_taylor(A, B);
    const double k = rng.uniform(-2, 2);
    const double m = rng.uniform(-2, 2);
    const auto ref = oracle::member_series(A.eval(k, m), B.eval(k, m), k, m);
    const TaylorEstimate got = evaluate(s, k, m);
    for (int l = 0; l < 3; ++l) {
      const double scale = 1.0 + std::abs(ref.phi[l]) + std::abs(ref.psi[l]);
      EXPECT_NEAR(got.phi[l], ref.phi[l], 1e-12 * scale);
      EXPECT_NEAR(got.psi[l], ref.psi[l], 1e-12 * scale);
    }
  }
}

TEST(ClosedTaylor, DegreeBoundsAttainedForLinearData) {
  const TaylorSextet s = closed_taylor(parse_poly("2*k + 1"), parse_poly("2*m + 3"));
  EXPECT_EQ(s.phi2.degree(), 3);
  EXPECT_EQ(s.phi3.degree(), 5);
  EXPECT_EQ(s.phi4.degree(), 7);
  EXPECT_EQ(s.psi2.degree(), 3);
  EXPECT_EQ(s.psi3.degree(), 5);
  EXPECT_EQ(s.psi4.degree(), 7);

  SplitRng rng(72);
  for (int t = 0; t < 20; ++t) {
    const TaylorSextet r = closed_taylor(random_poly(rng, 1), random_poly(rng, 1));
    EXPECT_LE(r.phi2.degree(), 3);
    EXPECT_LE(r.phi3.degree(), 5);
    EXPECT_LE(r.phi4.degree(), 7);
    EXPECT_LE(r.psi2.degree(), 3);
    EXPECT_LE(r.psi3.degree(), 5);
    EXPECT_LE(r.psi4.degree(), 7);
  }
  const TaylorSextet q = closed_taylor(K * K, BivarPoly());
  EXPECT_EQ(q.phi2.degree(), 4);
}

TEST(ThirdOrderIdentity, Examples) {
  for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
           {"1", "0"}, {"3*k - m + 1/2", "k^2*m"}, {"k^2", "m^3"}}) {
    const auto [r1, r2] = third_order_identity_residuals(parse_poly(a), parse_poly(b));
    EXPECT_TRUE(r1.is_zero()) << a << ", " << b << ": " << r1.to_string();
    EXPECT_TRUE(r2.is_zero()) << a << ", " << b << ": " << r2.to_string();
  }
}

TEST(ThirdOrderIdentity, ExactZeroForRandomCubics) {
  SplitRng rng(73);
  for (int t = 0; t < 50; ++t) {
    const auto [r1, r2] = third_order_identity_residuals(random_poly(rng, 3), random_poly(rng, 3));
    EXPECT_TRUE(r1.is_zero());
    EXPECT_TRUE(r2.is_zero());
  }
}

TEST(NumericTaylor, Examples) {
  const TangentParam d0{0, 0};
  const CircleBundle unit = bundle_from_AB(BivarPoly(1L), BivarPoly(), std::span(&d0, 1));
  EXPECT_NEAR(numeric_taylor(unit.members[0].curve, d0).phi[0], 1.0, 1e-6);

  const TangentParam d1{0.7, -1.3};
  const CircleBundle line = bundle_from_AB(BivarPoly(), BivarPoly(), std::span(&d1, 1));
  const TaylorEstimate z = numeric_taylor(line.members[0].curve, d1);
  for (int l = 0; l < 3; ++l) {
    EXPECT_NEAR(z.phi[l], 0.0, 1e-9);
    EXPECT_NEAR(z.psi[l], 0.0, 1e-9);
  }

  const TangentParam d2{1, 1};
  const BivarPoly A = parse_poly("k + 1");
  const BivarPoly B = parse_poly("m");
  const CircleBundle c = bundle_from_AB(A, B, std::span(&d2, 1));
  EXPECT_LT(taylor_relative_error(numeric_taylor(c.members[0].curve, d2), evaluate(closed_taylor(A, B), 1, 1)), 1e-6);
}

TEST(NumericTaylor, AgreesWithSeriesOracleOnLinearData) {
  SplitRng rng(74);
  for (int t = 0; t < 50; ++t) {
    const double al = rng.uniform(-2, 2), be = rng.uniform(-2, 2), ga = rng.uniform(-2, 2);
    const TangentParam d{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double a = al * d.k + be;
    const double b = al * d.m + ga;
    const CircleBundle bun = bundle_from_values(std::span(&d, 1), std::span(&a, 1), std::span(&b, 1));
    const auto ref = oracle::member_series(a, b, d.k, d.m);
    TaylorEstimate exact;
    exact.phi = ref.phi;
    exact.psi = ref.psi;
    EXPECT_LT(taylor_relative_error(numeric_taylor(bun.members[0].curve, d), exact), 1e-6);
  }
}

TEST(Diagnostic, LinearDataRecoversCoefficients) {
  SplitRng rng(75);
  const auto g = grid(rng, 64);
  const DiagnosticReport r = rectifiability_diagnostic(fn(parse_poly("2*k + 1")), fn(parse_poly("2*m + 3")), g);
  for (double res : r.fit_residual) EXPECT_LT(res, 1e-10);
  EXPECT_LT(r.remainder_phi2, 1e-12);
  EXPECT_LT(r.remainder_psi2, 1e-12);
  EXPECT_NEAR(r.alpha, 2, 1e-9);
  EXPECT_NEAR(r.beta, 1, 1e-9);
  EXPECT_NEAR(r.gamma, 3, 1e-9);
  EXPECT_TRUE(r.violated.empty());
  EXPECT_EQ(r.verdict, Verdict::Rectifiable);
}

TEST(Diagnostic, QuadraticAFailsDegreeThreeFit) {
  SplitRng rng(76);
  const auto g = grid(rng, 64);
  const BivarPoly f = fundamental_factor();
  const DiagnosticReport r = rectifiability_diagnostic(fn(K * K), fn(BivarPoly()), g);
  std::vector<double> phi2;
  for (const auto& p : g) phi2.push_back(p.k * p.k * f.eval(p.k, p.m));
  const double oracle_res = normal_equation_residual(g, phi2, 3);
  EXPECT_GT(oracle_res, 1e-2);
  EXPECT_NEAR(r.fit_residual[0], oracle_res, 1e-6 * oracle_res);
  EXPECT_EQ(r.verdict, Verdict::NotRectifiable);
}

TEST(Diagnostic, LineBundleIsRectifiable) {
  SplitRng rng(77);
  const auto g = grid(rng, 60);
  const DiagnosticReport r = rectifiability_diagnostic(fn(BivarPoly()), fn(BivarPoly()), g);
  for (double res : r.fit_residual) EXPECT_EQ(res, 0.0);
  EXPECT_EQ(r.verdict, Verdict::Rectifiable);
}

TEST(Diagnostic, Errors) {
  SplitRng rng(78);
  EXPECT_ERRC(rectifiability_diagnostic(fn(BivarPoly(1L)), fn(BivarPoly()), grid(rng, 53)), Errc::DegenerateGrid);
  std::vector<TangentParam> cone;
  for (int i = 0; i < 60; ++i) cone.push_back({std::cos(0.1 * i), std::sin(0.1 * i)});
  EXPECT_ERRC(rectifiability_diagnostic(fn(BivarPoly(1L)), fn(BivarPoly()), cone), Errc::DegenerateGrid);
}

TEST(Diagnostic, NumericPathOnGeneratedBundle) {
  SplitRng rng(79);
  const auto g = grid(rng, 64);
  const DiagnosticReport ok = rectifiability_diagnostic(bundle_from_AB(parse_poly("k - 1/2"), parse_poly("m + 1"), g));
  EXPECT_EQ(ok.verdict, Verdict::Rectifiable);
  EXPECT_NEAR(ok.alpha, 1, 1e-6);
  const DiagnosticReport bad = rectifiability_diagnostic(bundle_from_AB(parse_poly("k^2"), BivarPoly(), g));
  EXPECT_EQ(bad.verdict, Verdict::NotRectifiable);
}

TEST(SymmetryCheck, Examples) {
  EXPECT_TRUE(symmetry_check(parse_poly("2*k + 1"), parse_poly("2*m + 3")).empty());
  EXPECT_EQ(symmetry_check(M, BivarPoly()), std::vector{SymmetryConstraint::MCoeffOfAZero});
  EXPECT_EQ(symmetry_check(K, 2L * M), std::vector{SymmetryConstraint::EqualSlopes});
  EXPECT_ERRC(symmetry_check(K * K, BivarPoly()), Errc::DegreeTooHigh);
}

TEST(SymmetryCheck, AgreesWithCommonPointDetection) {
  SplitRng rng(80);
  for (int t = 0; t < 50; ++t) {
    const double al = rng.uniform(-2, 2), be = rng.uniform(-2, 2), ga = rng.uniform(-2, 2);
    double b = 0, d = 0, e = al;
    if (t % 2 == 1) {
      // Violation of at least 1e-3 in one constraint.
      const double v = (rng.uniform() < 0.5 ? -1 : 1) * rng.uniform(1e-3, 1.0);
      switch (t % 3) {
        case 0: b = v; break;
        case 1: d = v; break;
        default: e = al + v; break;
      }
    }
    const BivarPoly A = to_rational(al) * K + to_rational(b) * M + to_rational(be);
    const BivarPoly B = to_rational(d) * K + to_rational(e) * M + to_rational(ga);
    const bool sym = symmetry_check(A, B).empty();
    EXPECT_EQ(sym, t % 2 == 0);
    const auto dirs = grid(rng, 40);
    const RectificationReport rep = rectify_bundle(bundle_from_AB(A, B, dirs));
    EXPECT_EQ(rep.passed, sym) << "case " << t;
  }
}

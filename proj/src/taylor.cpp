#include "circlerect/taylor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace circlerect {

namespace {

constexpr int kStencilHalf = 4;
constexpr int kStencilNodes = 2 * kStencilHalf;
// Orders 2..9 are solved for; the values at x = 0 and the slope are known.
constexpr int kFitLowOrder = 2;
constexpr int kFitHighOrder = kFitLowOrder + kStencilNodes - 1;
constexpr int kNewtonMaxIter = 60;

using StencilInverse = Eigen::Matrix<double, kStencilNodes, kStencilNodes>;

double stencil_node(int idx) {
  // -4, -3, -2, -1, 1, 2, 3, 4
  return idx < kStencilHalf ? static_cast<double>(idx - kStencilHalf) : static_cast<double>(idx - kStencilHalf + 1);
}

// Exact inverse of the node matrix V(j, l) = t_j^(l+2), computed once.
const StencilInverse& stencil_inverse() {
  static const StencilInverse inv = [] {
    std::array<std::array<Rational, 2 * kStencilNodes>, kStencilNodes> aug;
    for (int r = 0; r < kStencilNodes; ++r) {
      const Rational t(static_cast<long>(stencil_node(r)));
      Rational p = t * t;
      for (int c = 0; c < kStencilNodes; ++c) {
        aug[r][c] = p;
        p *= t;
      }
      for (int c = 0; c < kStencilNodes; ++c) aug[r][kStencilNodes + c] = (r == c) ? 1 : 0;
    }
    for (int col = 0; col < kStencilNodes; ++col) {
      int piv = col;
      while (aug[piv][col] == 0) ++piv;
      std::swap(aug[piv], aug[col]);
      const Rational d = aug[col][col];
      for (auto& v : aug[col]) v /= d;
      for (int r = 0; r < kStencilNodes; ++r) {
        if (r == col || aug[r][col] == 0) continue;
        const Rational f = aug[r][col];
        for (int c = 0; c < 2 * kStencilNodes; ++c) aug[r][c] -= f * aug[col][c];
      }
    }
    StencilInverse out;
    for (int r = 0; r < kStencilNodes; ++r) {
      for (int c = 0; c < kStencilNodes; ++c) out(r, c) = aug[r][kStencilNodes + c].get_d();
    }
    return out;
  }();
  return inv;
}

struct StencilValues {
  std::array<double, kStencilNodes> x{};
  std::array<double, kStencilNodes> y{};
  std::array<double, kStencilNodes> z{};
};

// Newton on the plane n.X = 0 and the sphere |X|^2 - 2 c.X = 0 (both through
// the origin), marching outward from x = 0 on each side.
StencilValues solve_circle_stencil(const Circle& circ, TangentParam tan, double h) {
  StencilValues out;
  const Vec3& n = circ.normal;
  const Vec3& c = circ.center;
  for (int side = -1; side <= 1; side += 2) {
    double y = 0.0;
    double z = 0.0;
    for (int j = 1; j <= kStencilHalf; ++j) {
      const double x = side * j * h;
      if (j == 1) {
        y = tan.k * x;
        z = tan.m * x;
      }
      bool converged = false;
      for (int it = 0; it < kNewtonMaxIter; ++it) {
        const double f1 = n[0] * x + n[1] * y + n[2] * z;
        const double f2 = x * x + y * y + z * z - 2.0 * (c[0] * x + c[1] * y + c[2] * z);
        const double j11 = n[1];
        const double j12 = n[2];
        const double j21 = 2.0 * (y - c[1]);
        const double j22 = 2.0 * (z - c[2]);
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) <= 1e-14 * (std::abs(j11 * j22) + std::abs(j12 * j21))) {
          throw Error(Errc::IllConditionedStencil, "curve turns vertical inside the stencil");
        }
        const double dy = (j22 * f1 - j12 * f2) / det;
        const double dz = (j11 * f2 - j21 * f1) / det;
        y -= dy;
        z -= dz;
        if (!std::isfinite(y) || !std::isfinite(z)) break;
        if (std::hypot(dy, dz) <= 1e-15 * (std::abs(y) + std::abs(z) + h)) {
          converged = true;
          break;
        }
      }
      if (!converged) throw Error(Errc::NewtonDivergence, "stencil node did not converge");
      const int idx = side < 0 ? kStencilHalf - j : kStencilHalf + j - 1;
      out.x[idx] = x;
      out.y[idx] = y;
      out.z[idx] = z;
    }
  }
  return out;
}

std::array<double, 3> coefficients_from_stencil(const std::array<double, kStencilNodes>& u, double h) {
  const StencilInverse& vinv = stencil_inverse();
  std::array<double, 3> out{};
  for (int l = 0; l < 3; ++l) {
    double s = 0.0;
    for (int j = 0; j < kStencilNodes; ++j) s += vinv(l, j) * u[j];
    out[l] = s / std::pow(h, l + kFitLowOrder);
  }
  return out;
}

}  // namespace

BivarPoly fundamental_factor() {
  const BivarPoly k = BivarPoly::k();
  const BivarPoly m = BivarPoly::m();
  return BivarPoly(1L) + k * k + m * m;
}

TaylorSextet closed_taylor(const BivarPoly& A, const BivarPoly& B) {
  const BivarPoly f = fundamental_factor();
  const BivarPoly g = BivarPoly::k() * A + BivarPoly::m() * B;
  const BivarPoly two(2L);
  const BivarPoly four(4L);
  const BivarPoly s4 = (A * A + B * B) * f * f + four * g * g * f;
  return TaylorSextet{
      A * f,
      two * A * g * f,
      A * s4,
      B * f,
      two * B * g * f,
      B * s4,
  };
}

TaylorEstimate evaluate(const TaylorSextet& s, double k, double m) {
  return TaylorEstimate{{s.phi2.eval(k, m), s.phi3.eval(k, m), s.phi4.eval(k, m)},
                        {s.psi2.eval(k, m), s.psi3.eval(k, m), s.psi4.eval(k, m)}};
}

TaylorEstimate closed_taylor_values(double a, double b, double k, double m) {
  const double f = 1.0 + k * k + m * m;
  const double g = k * a + m * b;
  const double s4 = (a * a + b * b) * f * f + 4.0 * g * g * f;
  return TaylorEstimate{{a * f, 2.0 * a * g * f, a * s4}, {b * f, 2.0 * b * g * f, b * s4}};
}

TaylorEstimate numeric_taylor(const CircleOrLine& curve, TangentParam tangent) {
  std::array<double, kStencilNodes> uy{};
  std::array<double, kStencilNodes> uz{};
  double h = kStencilStepRel;

  if (const auto* circ = std::get_if<Circle>(&curve)) {
    // y(x) is analytic out to the nearest x-extremum of the circle.
    const double half_width = circ->radius * std::sqrt(std::max(0.0, 1.0 - circ->normal[0] * circ->normal[0]));
    const double reach = half_width - std::abs(circ->center[0]);
    if (!(reach > 1e-9 * circ->radius)) {
      throw Error(Errc::IllConditionedStencil, "tangent at the center is orthogonal to the x-axis");
    }
    h = kStencilStepRel * reach;
    const StencilValues sv = solve_circle_stencil(*circ, tangent, h);
    for (int j = 0; j < kStencilNodes; ++j) {
      uy[j] = sv.y[j] - tangent.k * sv.x[j];
      uz[j] = sv.z[j] - tangent.m * sv.x[j];
    }
  } else {
    const auto& l = std::get<Line>(curve);
    if (std::abs(l.direction[0]) <= 1e-12) {
      throw Error(Errc::IllConditionedStencil, "line orthogonal to the x-axis");
    }
    for (int j = 0; j < kStencilNodes; ++j) {
      const double x = stencil_node(j) * h;
      const Vec3 p = l.point + ((x - l.point[0]) / l.direction[0]) * l.direction;
      uy[j] = p[1] - tangent.k * x;
      uz[j] = p[2] - tangent.m * x;
    }
  }
  return TaylorEstimate{coefficients_from_stencil(uy, h), coefficients_from_stencil(uz, h)};
}

double taylor_relative_error(const TaylorEstimate& estimate, const TaylorEstimate& exact) {
  double worst = 0.0;
  for (int l = 0; l < 3; ++l) {
    const double scale = std::max(std::abs(exact.phi[l]), std::abs(exact.psi[l]));
    const double err = std::max(std::abs(estimate.phi[l] - exact.phi[l]), std::abs(estimate.psi[l] - exact.psi[l]));
    if (scale == 0.0) {
      worst = std::max(worst, err);
    } else {
      worst = std::max(worst, err / scale);
    }
  }
  return worst;
}

std::pair<BivarPoly, BivarPoly> third_order_identity_residuals(const BivarPoly& A, const BivarPoly& B) {
  const TaylorSextet s = closed_taylor(A, B);
  const BivarPoly f = fundamental_factor();
  const BivarPoly g = BivarPoly::k() * s.phi2 + BivarPoly::m() * s.psi2;
  return {f * s.phi3 - 2 * s.phi2 * g, f * s.psi3 - 2 * s.psi2 * g};
}

std::string_view constraint_name(SymmetryConstraint c) {
  switch (c) {
    case SymmetryConstraint::MCoeffOfAZero: return "b=0";
    case SymmetryConstraint::KCoeffOfBZero: return "d=0";
    case SymmetryConstraint::EqualSlopes: return "a=e";
  }
  return "?";
}

std::vector<SymmetryConstraint> symmetry_check(const BivarPoly& A, const BivarPoly& B) {
  if (A.degree() > 1 || B.degree() > 1) {
    throw Error(Errc::DegreeTooHigh, "symmetry constraints apply to polynomials of degree at most one");
  }
  std::vector<SymmetryConstraint> out;
  if (A.coeff(0, 1) != 0) out.push_back(SymmetryConstraint::MCoeffOfAZero);
  if (B.coeff(1, 0) != 0) out.push_back(SymmetryConstraint::KCoeffOfBZero);
  if (A.coeff(1, 0) != B.coeff(0, 1)) out.push_back(SymmetryConstraint::EqualSlopes);
  return out;
}

std::pair<BivarPoly, double> fit_bivariate(std::span<const TangentParam> grid, std::span<const double> values,
                                           int degree) {
  std::vector<std::pair<int, int>> monos;
  for (int d = 0; d <= degree; ++d) {
    for (int i = d; i >= 0; --i) monos.emplace_back(i, d - i);
  }
  const auto rows = static_cast<Eigen::Index>(grid.size());
  const auto cols = static_cast<Eigen::Index>(monos.size());
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& p = grid[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto [i, j] = monos[static_cast<std::size_t>(c)];
      design(r, c) = std::pow(p.k, i) * std::pow(p.m, j);
    }
    rhs[r] = values[static_cast<std::size_t>(r)];
  }
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return {BivarPoly{}, 0.0};

  Eigen::VectorXd col_scale = design.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (col_scale[c] == 0.0) col_scale[c] = 1.0;
  }
  const Eigen::MatrixXd scaled = design * col_scale.cwiseInverse().asDiagonal();
  const Eigen::VectorXd sol = scaled.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd coef = sol.cwiseQuotient(col_scale);

  BivarPoly fit;
  for (Eigen::Index c = 0; c < cols; ++c) {
    const auto [i, j] = monos[static_cast<std::size_t>(c)];
    fit.add_term(i, j, to_rational(coef[c]));
  }
  const double residual = (design * coef - rhs).norm() / rhs_norm;
  return {fit, residual};
}

namespace {

DiagnosticReport diagnose(std::span<const TangentParam> grid, std::span<const TaylorEstimate> samples, double tol) {
  if (grid.size() != samples.size()) throw Error(Errc::CountMismatch, "grid and samples differ in length");
  if (grid.size() < kMinDiagnosticGrid || !is_generic_54(grid.first(kMinDiagnosticGrid))) {
    throw Error(Errc::DegenerateGrid, "diagnostic grid needs 54 directions in general position");
  }

  DiagnosticReport rep;
  std::array<BivarPoly, 2> order2_fits;
  constexpr std::array<int, 3> kDegrees{3, 5, 7};
  std::vector<double> vals(grid.size());
  for (int l = 0; l < 3; ++l) {
    for (int which = 0; which < 2; ++which) {
      for (std::size_t i = 0; i < samples.size(); ++i) vals[i] = which == 0 ? samples[i].phi[l] : samples[i].psi[l];
      auto [fit, res] = fit_bivariate(grid, vals, kDegrees[l]);
      rep.fit_residual[2 * l + which] = res;
      if (l == 0) order2_fits[which] = std::move(fit);
    }
  }

  const BivarPoly f = fundamental_factor();
  std::array<BivarPoly, 2> quotients;
  for (int which = 0; which < 2; ++which) {
    const DivRem dr = poly_divrem(order2_fits[which], f);
    const double scale = order2_fits[which].max_abs_coeff();
    const double rem = scale == 0.0 ? 0.0 : dr.remainder.max_abs_coeff() / scale;
    (which == 0 ? rep.remainder_phi2 : rep.remainder_psi2) = rem;
    quotients[which] = dr.quotient;
  }
  auto coef = [](const BivarPoly& p, int i, int j) { return p.coeff(i, j).get_d(); };
  rep.recovered = LinearCoeffs{coef(quotients[0], 1, 0), coef(quotients[0], 0, 1), coef(quotients[0], 0, 0),
                               coef(quotients[1], 1, 0), coef(quotients[1], 0, 1), coef(quotients[1], 0, 0)};
  const auto& lc = rep.recovered;
  rep.alpha = 0.5 * (lc.a + lc.e);
  rep.beta = lc.c;
  rep.gamma = lc.g;

  const double cscale = std::max({1.0, std::abs(lc.a), std::abs(lc.b), std::abs(lc.c), std::abs(lc.d),
                                  std::abs(lc.e), std::abs(lc.g)});
  if (std::abs(lc.b) > tol * cscale) rep.violated.push_back(SymmetryConstraint::MCoeffOfAZero);
  if (std::abs(lc.d) > tol * cscale) rep.violated.push_back(SymmetryConstraint::KCoeffOfBZero);
  if (std::abs(lc.a - lc.e) > tol * cscale) rep.violated.push_back(SymmetryConstraint::EqualSlopes);

  const bool fits_ok = std::all_of(rep.fit_residual.begin(), rep.fit_residual.end(), [&](double r) { return r <= tol; });
  const bool divisible = rep.remainder_phi2 <= tol && rep.remainder_psi2 <= tol;
  rep.verdict = fits_ok && divisible && rep.violated.empty() ? Verdict::Rectifiable : Verdict::NotRectifiable;
  return rep;
}

}  // namespace

DiagnosticReport diagnose_samples(std::span<const TangentParam> grid, std::span<const TaylorEstimate> samples) {
  return diagnose(grid, samples, kDiagnosticTol);
}

DiagnosticReport rectifiability_diagnostic(const BivarFunction& A, const BivarFunction& B,
                                           std::span<const TangentParam> grid) {
  std::vector<TaylorEstimate> samples;
  samples.reserve(grid.size());
  for (const auto& p : grid) samples.push_back(closed_taylor_values(A(p.k, p.m), B(p.k, p.m), p.k, p.m));
  return diagnose(grid, samples, kDiagnosticTol);
}

DiagnosticReport rectifiability_diagnostic(const CircleBundle& bundle) {
  std::vector<TangentParam> grid;
  std::vector<TaylorEstimate> samples;
  for (const auto& mem : bundle.members) {
    grid.push_back(mem.dir);
    samples.push_back(numeric_taylor(mem.curve, mem.dir));
  }
  // Stencil estimates carry ~1e-9 relative noise.
  return diagnose(grid, samples, 1e-6);
}

}  // namespace circlerect

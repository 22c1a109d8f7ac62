#pragma once

// Taylor coefficients of the bundle members y(x) = kx + phi2 x^2 + phi3 x^3 + ...,
// z(x) = mx + psi2 x^2 + ..., exact closed forms in (k, m), numeric extraction
// from geometric circles, and the degree/divisibility diagnostics that decide
// rectifiability.

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "circlerect/bundle.hpp"
#include "circlerect/poly.hpp"

namespace circlerect {

/// 1 + k^2 + m^2
BivarPoly fundamental_factor();

struct TaylorSextet {
  BivarPoly phi2, phi3, phi4;
  BivarPoly psi2, psi3, psi4;
};

/// Coefficient estimates at one direction; index 0 is order 2.
struct TaylorEstimate {
  std::array<double, 3> phi{};
  std::array<double, 3> psi{};
};

TaylorSextet closed_taylor(const BivarPoly& A, const BivarPoly& B);
TaylorEstimate evaluate(const TaylorSextet& s, double k, double m);
/// Closed forms evaluated from the values A(k,m), B(k,m).
TaylorEstimate closed_taylor_values(double a, double b, double k, double m);

/// Stencil of 8 nodes x = j*h, j = +-1..+-4.
inline constexpr double kStencilStepRel = 1e-2;

/// Estimates phi_l, psi_l (l = 2,3,4) of a member through the origin with
/// tangent (1,k,m), from Newton solves of the curve equations on the stencil.
/// Throws NewtonDivergence or IllConditionedStencil.
TaylorEstimate numeric_taylor(const CircleOrLine& curve, TangentParam tangent);

/// Largest relative deviation per order, normalized by max(|phi_l|, |psi_l|).
double taylor_relative_error(const TaylorEstimate& estimate, const TaylorEstimate& exact);

/// f*phi3 - 2*phi2*(k*phi2 + m*psi2) and f*psi3 - 2*psi2*(k*phi2 + m*psi2);
/// both vanish identically for every A, B.
std::pair<BivarPoly, BivarPoly> third_order_identity_residuals(const BivarPoly& A, const BivarPoly& B);

/// Constraints on A = a k + b m + c, B = d k + e m + g.
enum class SymmetryConstraint { MCoeffOfAZero, KCoeffOfBZero, EqualSlopes };  // b=0, d=0, a=e

std::string_view constraint_name(SymmetryConstraint c);

/// Violated constraints; empty iff A = alpha k + beta, B = alpha m + gamma.
/// Throws DegreeTooHigh for inputs of degree above one.
std::vector<SymmetryConstraint> symmetry_check(const BivarPoly& A, const BivarPoly& B);

struct LinearCoeffs {
  double a = 0, b = 0, c = 0;  // A = a k + b m + c
  double d = 0, e = 0, g = 0;  // B = d k + e m + g
};

enum class Verdict { Rectifiable, NotRectifiable };

struct DiagnosticReport {
  /// Relative least-squares residuals: phi2/psi2 at total degree 3,
  /// phi3/psi3 at degree 5, phi4/psi4 at degree 7.
  std::array<double, 6> fit_residual{};
  /// Remainders of the degree-3 fits of phi2, psi2 modulo f (max abs
  /// coefficient relative to the fit).
  double remainder_phi2 = 0.0;
  double remainder_psi2 = 0.0;
  LinearCoeffs recovered;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  std::vector<SymmetryConstraint> violated;
  Verdict verdict = Verdict::NotRectifiable;
};

inline constexpr double kDiagnosticTol = 1e-8;
inline constexpr std::size_t kMinDiagnosticGrid = 54;

/// Diagnostic over per-direction coefficient samples. The first 54 grid
/// points must be generic (DegenerateGrid otherwise).
DiagnosticReport diagnose_samples(std::span<const TangentParam> grid, std::span<const TaylorEstimate> samples);

using BivarFunction = std::function<double(double, double)>;

/// Uses the closed forms evaluated from A and B on the grid.
DiagnosticReport rectifiability_diagnostic(const BivarFunction& A, const BivarFunction& B,
                                           std::span<const TangentParam> grid);

/// Uses numeric_taylor estimates of the bundle's members.
DiagnosticReport rectifiability_diagnostic(const CircleBundle& bundle);

/// Least-squares fit of total degree `degree` in (k, m). Returns the
/// coefficients as a polynomial and the relative residual.
std::pair<BivarPoly, double> fit_bivariate(std::span<const TangentParam> grid, std::span<const double> values,
                                           int degree);

}  // namespace circlerect

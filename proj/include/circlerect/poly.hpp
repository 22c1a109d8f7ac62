#pragma once

// Exact bivariate polynomials in (k, m) over the rationals.

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>

namespace circlerect {

using Rational = mpq_class;

class BivarPoly {
 public:
  /// Exponents (i, j) of the monomial k^i m^j.
  using Monomial = std::pair<int, int>;
  using Terms = std::map<Monomial, Rational>;

  static constexpr int kZeroDegree = -1;  // sentinel for the zero polynomial

  BivarPoly() = default;
  BivarPoly(const Rational& constant);  // NOLINT(google-explicit-constructor)
  BivarPoly(long constant);  // NOLINT(google-explicit-constructor)

  static BivarPoly k();
  static BivarPoly m();
  static BivarPoly monomial(int i, int j, const Rational& coeff = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Total degree; kZeroDegree for the zero polynomial.
  int degree() const;
  /// Degree in k alone; kZeroDegree for the zero polynomial.
  int degree_k() const;

  Rational coeff(int i, int j) const;
  void add_term(int i, int j, const Rational& c);

  Rational eval(const Rational& k, const Rational& m) const;
  double eval(double k, double m) const;

  BivarPoly operator-() const;
  BivarPoly& operator+=(const BivarPoly& o);
  BivarPoly& operator-=(const BivarPoly& o);
  BivarPoly& operator*=(const BivarPoly& o);

  friend BivarPoly operator+(BivarPoly a, const BivarPoly& b) { return a += b; }
  friend BivarPoly operator-(BivarPoly a, const BivarPoly& b) { return a -= b; }
  friend BivarPoly operator*(const BivarPoly& a, const BivarPoly& b);
  friend bool operator==(const BivarPoly& a, const BivarPoly& b) { return a.terms_ == b.terms_; }

  BivarPoly pow(unsigned exponent) const;

  /// Canonical text form in the parser's grammar, e.g. "2*k^2*m - 1/3".
  std::string to_string() const;

  /// Largest absolute coefficient, as a double.
  double max_abs_coeff() const;

 private:
  Terms terms_;
};

struct DivRem {
  BivarPoly quotient;
  BivarPoly remainder;
};

/// Division in k over Q[m]: p = q*d + r with deg_k r < deg_k d.
/// Throws ZeroDivisor, or NonInvertibleLeading when the leading k-coefficient
/// of d is not a nonzero rational constant.
DivRem poly_divrem(const BivarPoly& p, const BivarPoly& d);

/// Exact conversion of a double coefficient.
Rational to_rational(double x);

}  // namespace circlerect

#pragma once

// Polynomial expressions in k and m with rational literals:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := 'k' | 'm' | rational | '(' expr ')' | '-' atom
//   rational := int ('/' uint)?
// Whitespace is ignored. Note "-k^2" is (-k)^2.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "circlerect/error.hpp"
#include "circlerect/poly.hpp"

namespace circlerect {

struct PolyExpr {
  enum class Kind { Var, RationalLit, Neg, Add, Sub, Mul, Pow };

  Kind kind = Kind::RationalLit;
  char var = 0;            // Var: 'k' or 'm'
  Rational value;          // RationalLit
  unsigned exponent = 0;   // Pow
  std::vector<PolyExpr> children;

  /// Structural form, e.g. "Add(Mul(2, k), 1)".
  std::string to_string() const;
};

class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t offset, std::vector<std::string> expected, const std::string& what);

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Throws ParseError with code SyntaxError or ZeroDenominator.
PolyExpr parse_poly_expr(std::string_view src);

BivarPoly lower(const PolyExpr& e);

inline BivarPoly parse_poly(std::string_view src) { return lower(parse_poly_expr(src)); }

}  // namespace circlerect

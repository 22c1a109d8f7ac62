#include "circlerect/expr.hpp"

#include <cctype>
#include <utility>

namespace circlerect {

namespace {

constexpr unsigned long kMaxExponent = 1000;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += items[i];
  }
  return out;
}

PolyExpr node(PolyExpr::Kind kind, std::vector<PolyExpr> children) {
  PolyExpr e;
  e.kind = kind;
  e.children = std::move(children);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  PolyExpr parse() {
    PolyExpr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail({"'+'", "'-'", "'*'", "'^'", "end of input"});
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
    throw ParseError(Errc::SyntaxError, pos_, expected,
                     "at offset " + std::to_string(pos_) + ": expected " + join(expected) + ", found " + found);
  }

  PolyExpr expr() {
    PolyExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = node(PolyExpr::Kind::Add, {std::move(lhs), term()});
      } else if (accept('-')) {
        lhs = node(PolyExpr::Kind::Sub, {std::move(lhs), term()});
      } else {
        return lhs;
      }
    }
  }

  PolyExpr term() {
    PolyExpr lhs = factor();
    while (accept('*')) lhs = node(PolyExpr::Kind::Mul, {std::move(lhs), factor()});
    return lhs;
  }

  PolyExpr factor() {
    PolyExpr base = atom();
    if (!accept('^')) return base;
    skip_ws();
    PolyExpr e = node(PolyExpr::Kind::Pow, {std::move(base)});
    e.exponent = uint_literal("exponent");
    return e;
  }

  // Digits only; returns the text.
  std::string digits(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == start) fail({what});
    return std::string(src_.substr(start, pos_ - start));
  }

  unsigned uint_literal(const char* what) {
    const std::size_t start = (skip_ws(), pos_);
    const std::string text = digits(what);
    if (text.size() > 4 || std::stoul(text) > kMaxExponent) {
      pos_ = start;
      fail({"exponent <= 1000"});
    }
    return static_cast<unsigned>(std::stoul(text));
  }

  PolyExpr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail({"atom"});
    const char c = src_[pos_];
    if (c == 'k' || c == 'm') {
      ++pos_;
      PolyExpr e;
      e.kind = PolyExpr::Kind::Var;
      e.var = c;
      return e;
    }
    if (c == '(') {
      ++pos_;
      PolyExpr inner = expr();
      if (!accept(')')) fail({"')'"});
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return node(PolyExpr::Kind::Neg, {atom()});
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return rational();
    fail({"atom"});
  }

  PolyExpr rational() {
    const mpz_class num(digits("integer"));
    mpz_class den = 1;
    if (accept('/')) {
      skip_ws();
      const std::size_t at = pos_;
      den = mpz_class(digits("unsigned integer"));
      if (den == 0) throw ParseError(Errc::ZeroDenominator, at, {"nonzero denominator"}, "zero denominator at offset " + std::to_string(at));
    }
    PolyExpr e;
    e.kind = PolyExpr::Kind::RationalLit;
    e.value = Rational(num, den);
    e.value.canonicalize();
    return e;
  }
};

}  // namespace

ParseError::ParseError(Errc code, std::size_t offset, std::vector<std::string> expected, const std::string& what)
    : Error(code, what), offset_(offset), expected_(std::move(expected)) {}

std::string PolyExpr::to_string() const {
  auto call = [this](const char* name) {
    std::string s = std::string(name) + "(";
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (i > 0) s += ", ";
      s += children[i].to_string();
    }
    return s;
  };
  switch (kind) {
    case Kind::Var: return std::string(1, var);
    case Kind::RationalLit: return value.get_str();
    case Kind::Neg: return call("Neg") + ")";
    case Kind::Add: return call("Add") + ")";
    case Kind::Sub: return call("Sub") + ")";
    case Kind::Mul: return call("Mul") + ")";
    case Kind::Pow: return call("Pow") + ", " + std::to_string(exponent) + ")";
  }
  return "?";
}

PolyExpr parse_poly_expr(std::string_view src) { return Parser(src).parse(); }

BivarPoly lower(const PolyExpr& e) {
  switch (e.kind) {
    case PolyExpr::Kind::Var: return e.var == 'k' ? BivarPoly::k() : BivarPoly::m();
    case PolyExpr::Kind::RationalLit: return BivarPoly(e.value);
    case PolyExpr::Kind::Neg: return -lower(e.children[0]);
    case PolyExpr::Kind::Add: return lower(e.children[0]) + lower(e.children[1]);
    case PolyExpr::Kind::Sub: return lower(e.children[0]) - lower(e.children[1]);
    case PolyExpr::Kind::Mul: return lower(e.children[0]) * lower(e.children[1]);
    case PolyExpr::Kind::Pow: return lower(e.children[0]).pow(e.exponent);
  }
  return {};
}

}  // namespace circlerect

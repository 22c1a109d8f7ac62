#include "circlerect/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "circlerect/error.hpp"

namespace circlerect {

BivarPoly::BivarPoly(const Rational& constant) {
  if (constant != 0) terms_.emplace(Monomial{0, 0}, constant);
}

BivarPoly::BivarPoly(long constant) : BivarPoly(Rational(constant)) {}

BivarPoly BivarPoly::k() { return monomial(1, 0); }
BivarPoly BivarPoly::m() { return monomial(0, 1); }

BivarPoly BivarPoly::monomial(int i, int j, const Rational& coeff) {
  BivarPoly p;
  p.add_term(i, j, coeff);
  return p;
}

int BivarPoly::degree() const {
  int d = kZeroDegree;
  for (const auto& [mono, c] : terms_) d = std::max(d, mono.first + mono.second);
  return d;
}

int BivarPoly::degree_k() const {
  int d = kZeroDegree;
  for (const auto& [mono, c] : terms_) d = std::max(d, mono.first);
  return d;
}

Rational BivarPoly::coeff(int i, int j) const {
  const auto it = terms_.find({i, j});
  return it == terms_.end() ? Rational(0) : it->second;
}

void BivarPoly::add_term(int i, int j, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(Monomial{i, j}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational BivarPoly::eval(const Rational& k, const Rational& m) const {
  Rational sum = 0;
  for (const auto& [mono, c] : terms_) {
    Rational t = c;
    for (int e = 0; e < mono.first; ++e) t *= k;
    for (int e = 0; e < mono.second; ++e) t *= m;
    sum += t;
  }
  return sum;
}

double BivarPoly::eval(double k, double m) const {
  double sum = 0.0;
  for (const auto& [mono, c] : terms_) {
    sum += c.get_d() * std::pow(k, mono.first) * std::pow(m, mono.second);
  }
  return sum;
}

BivarPoly BivarPoly::operator-() const {
  BivarPoly r = *this;
  for (auto& [mono, c] : r.terms_) c = -c;
  return r;
}

BivarPoly& BivarPoly::operator+=(const BivarPoly& o) {
  for (const auto& [mono, c] : o.terms_) add_term(mono.first, mono.second, c);
  return *this;
}

BivarPoly& BivarPoly::operator-=(const BivarPoly& o) {
  for (const auto& [mono, c] : o.terms_) add_term(mono.first, mono.second, -c);
  return *this;
}

BivarPoly operator*(const BivarPoly& a, const BivarPoly& b) {
  BivarPoly r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      r.add_term(ma.first + mb.first, ma.second + mb.second, ca * cb);
    }
  }
  return r;
}

BivarPoly& BivarPoly::operator*=(const BivarPoly& o) { return *this = *this * o; }

BivarPoly BivarPoly::pow(unsigned exponent) const {
  BivarPoly result(1L);
  BivarPoly base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base *= base;
  }
  return result;
}

double BivarPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c.get_d()));
  return m;
}

std::string BivarPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Monomial, Rational>> sorted(terms_.begin(), terms_.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
    const int dx = x.first.first + x.first.second;
    const int dy = y.first.first + y.first.second;
    if (dx != dy) return dx > dy;
    return x.first.first > y.first.first;
  });

  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, c] : sorted) {
    const bool negative = c < 0;
    const Rational mag = abs(c);
    const bool first_term = first;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;

    std::vector<std::string> factors;
    const bool constant = mono.first == 0 && mono.second == 0;
    // A leading "-k^2" would read back as (-k)^2, so spell the unit out.
    const bool leading_power = first_term && negative && (mono.first > 1 || (mono.first == 0 && mono.second > 1));
    if (constant || mag != 1 || leading_power) factors.push_back(mag.get_str());
    if (mono.first == 1) factors.emplace_back("k");
    if (mono.first > 1) factors.push_back("k^" + std::to_string(mono.first));
    if (mono.second == 1) factors.emplace_back("m");
    if (mono.second > 1) factors.push_back("m^" + std::to_string(mono.second));
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i > 0) os << '*';
      os << factors[i];
    }
  }
  return os.str();
}

DivRem poly_divrem(const BivarPoly& p, const BivarPoly& d) {
  if (d.is_zero()) throw Error(Errc::ZeroDivisor, "division by the zero polynomial");
  const int dk = d.degree_k();
  Rational lead = 0;
  for (const auto& [mono, c] : d.terms()) {
    if (mono.first != dk) continue;
    if (mono.second != 0) {
      throw Error(Errc::NonInvertibleLeading, "leading k-coefficient of the divisor depends on m");
    }
    lead = c;
  }

  DivRem out{BivarPoly{}, p};
  while (!out.remainder.is_zero() && out.remainder.degree_k() >= dk) {
    const int rk = out.remainder.degree_k();
    BivarPoly step;
    for (const auto& [mono, c] : out.remainder.terms()) {
      if (mono.first == rk) step.add_term(rk - dk, mono.second, c / lead);
    }
    out.quotient += step;
    out.remainder -= step * d;
  }
  return out;
}

Rational to_rational(double x) { return Rational(x); }

}  // namespace circlerect

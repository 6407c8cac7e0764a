#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "difren/errors.hpp"

namespace difren {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

inline long long to_int(const Rational& q) {
  if (!is_integer(q)) throw DomainError("expected an integer, got " + q.str());
  return boost::multiprecision::numerator(q).convert_to<long long>();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational rational_pow(const Rational& base, long long e) {
  Rational out = 1;
  const Rational b = e >= 0 ? base : Rational(1) / base;
  for (long long i = 0; i < std::llabs(e); ++i) out *= b;
  return out;
}

inline Integer factorial(long long n) {
  Integer out = 1;
  for (long long i = 2; i <= n; ++i) out *= i;
  return out;
}

inline Rational binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  return Rational(factorial(n)) / Rational(factorial(k) * factorial(n - k));
}

/// Exponents of (pi, gammaE, ln2, zeta3) in one monomial. Only the pi exponent may be negative.
using Exponents = std::array<int, 4>;

namespace numeric_constants {
inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double gamma_e = 0.57721566490153286060651209008240243;
inline constexpr double ln2 = 0.69314718055994530941723212145817657;
inline constexpr double zeta3 = 1.20205690315959428539973816151144999;
}  // namespace numeric_constants

/// Exact Q-linear combination of monomials pi^i gammaE^j ln2^k zeta3^l.
///
/// Stored normalized: monomials ordered by exponent tuple, no zero rationals.
class Coefficient {
 public:
  using Monomials = std::map<Exponents, Rational>;

  Coefficient() = default;
  Coefficient(const Rational& q) { add_monomial(q, {0, 0, 0, 0}); }  // NOLINT implicit
  Coefficient(long long q) : Coefficient(Rational(q)) {}               // NOLINT implicit

  static Coefficient monomial(const Rational& q, Exponents e) {
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i] < 0) throw DomainError("only pi may carry a negative exponent");
    Coefficient c;
    c.add_monomial(q, e);
    return c;
  }
  static Coefficient pi(int power = 1) { return monomial(1, {power, 0, 0, 0}); }
  static Coefficient gamma_e() { return monomial(1, {0, 1, 0, 0}); }
  static Coefficient ln2() { return monomial(1, {0, 0, 1, 0}); }
  static Coefficient zeta3() { return monomial(1, {0, 0, 0, 1}); }

  const Monomials& monomials() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{0, 0, 0, 0});
  }
  Rational rational_value() const {
    if (!is_rational()) throw DomainError("coefficient " + to_string() + " is not rational");
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }

  Coefficient& operator+=(const Coefficient& o) {
    for (const auto& [e, q] : o.terms_) add_monomial(q, e);
    return *this;
  }
  Coefficient& operator-=(const Coefficient& o) {
    for (const auto& [e, q] : o.terms_) add_monomial(-q, e);
    return *this;
  }
  Coefficient& operator*=(const Coefficient& o) { return *this = *this * o; }

  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
  friend Coefficient operator-(Coefficient a) {
    for (auto& [e, q] : a.terms_) q = -q;
    return a;
  }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    Coefficient out;
    for (const auto& [ea, qa] : a.terms_)
      for (const auto& [eb, qb] : b.terms_) {
        Exponents e{};
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_monomial(qa * qb, e);
      }
    return out;
  }
  friend bool operator==(const Coefficient&, const Coefficient&) = default;

  /// Multiplicative inverse; defined only for a single monomial in pi.
  Coefficient inverse() const {
    if (!is_monomial()) throw DomainError("cannot invert non-monomial coefficient " + to_string());
    const auto& [e, q] = *terms_.begin();
    if (e[1] != 0 || e[2] != 0 || e[3] != 0)
      throw DomainError("cannot invert " + to_string() + ": only pi powers are invertible");
    return monomial(Rational(1) / q, {-e[0], 0, 0, 0});
  }

  Coefficient pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    Coefficient out(1);
    for (int i = 0; i < k; ++i) out *= *this;
    return out;
  }

  /// Floating value; monomials summed in normalized order.
  double evaluate() const {
    namespace k = numeric_constants;
    double sum = 0.0;
    for (const auto& [e, q] : terms_) {
      double v = to_double(q);
      v *= std::pow(k::pi, e[0]);
      v *= std::pow(k::gamma_e, e[1]);
      v *= std::pow(k::ln2, e[2]);
      v *= std::pow(k::zeta3, e[3]);
      sum += v;
    }
    return sum;
  }

  /// Grammar-compatible text. Multi-monomial values are wrapped in parentheses.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    if (terms_.size() == 1) return monomial_string(terms_.begin()->first, terms_.begin()->second);
    std::string out = "(";
    bool first = true;
    for (const auto& [e, q] : terms_) {
      if (first) {
        out += monomial_string(e, q);
      } else if (q < 0) {
        out += " - " + monomial_string(e, -q);
      } else {
        out += " + " + monomial_string(e, q);
      }
      first = false;
    }
    return out + ")";
  }

  /// Leading sign used by printers to emit " - x" instead of " + -x".
  bool is_negative_monomial() const { return is_monomial() && terms_.begin()->second < 0; }

 private:
  void add_monomial(const Rational& q, const Exponents& e) {
    if (q == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, q);
    if (!inserted) {
      it->second += q;
      if (it->second == 0) terms_.erase(it);
    }
  }

  static std::string monomial_string(const Exponents& e, const Rational& q) {
    static const char* names[] = {"pi", "gammaE", "ln2", "zeta3"};
    std::vector<std::string> factors;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      factors.push_back(e[i] == 1 ? names[i] : std::string(names[i]) + "^" + std::to_string(e[i]));
    }
    std::string out;
    if (factors.empty()) return q.str();
    if (q == -1) {
      out = "-";
    } else if (q != 1) {
      out = q.str() + "*";
    }
    for (std::size_t i = 0; i < factors.size(); ++i) out += (i ? "*" : "") + factors[i];
    return out;
  }

  Monomials terms_;
};

}  // namespace difren

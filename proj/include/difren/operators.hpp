#pragma once

#include <map>
#include <set>
#include <string>

#include "difren/algebra.hpp"
#include "difren/special.hpp"

namespace difren {

/// Polynomial in the Laplacian, sum_k c_k box^k, with constant exact coefficients.
class DiffOperator {
 public:
  DiffOperator() = default;

  static DiffOperator identity() { return box_power(0); }
  static DiffOperator box_power(int m, const Coefficient& c = 1) {
    DiffOperator L;
    L.add(c, m);
    return L;
  }

  void add(const Coefficient& c, int k) {
    if (k < 0) throw DomainError("operator power must be non-negative");
    detail::accumulate(coeffs_, k, c);
  }

  const std::map<int, Coefficient>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }
  /// True for c * box^m with a single term.
  bool is_monomial() const { return coeffs_.size() == 1; }

  friend DiffOperator operator*(const DiffOperator& a, const DiffOperator& b) {
    DiffOperator out;
    for (const auto& [i, ci] : a.coeffs_)
      for (const auto& [j, cj] : b.coeffs_) out.add(ci * cj, i + j);
    return out;
  }
  friend DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
    DiffOperator out = a;
    for (const auto& [k, c] : b.coeffs_) out.add(c, k);
    return out;
  }
  friend bool operator==(const DiffOperator&, const DiffOperator&) = default;

 private:
  std::map<int, Coefficient> coeffs_;
};

inline constexpr const char* kFlagDistributionUndetermined = "distributional part undetermined";

/// Result of applying an operator. Flags mark singular terms whose at-origin content is unknown;
/// the radial part is exact for r != 0 regardless.
struct ApplyResult {
  PositionFunction function;
  std::set<std::string> flags;
  friend bool operator==(const ApplyResult&, const ApplyResult&) = default;
};

/// box acting on radial power-log terms:
///   box(r^a l^k) = a(a+n-2) r^{a-2} l^k + 2k(2a+n-2) r^{a-2} l^{k-1} + 4k(k-1) r^{a-2} l^{k-2}
/// with l = ln(r^2 M^2). At a = 2-n, k = 0 the Gauss flux adds -(n-2) Omega_{n-1} delta.
inline ApplyResult apply_laplacian(const PositionFunction& f) {
  const int n = f.dim();
  if (n < 2) throw DomainError("the Laplacian recurrence requires dim >= 2");
  ApplyResult out{PositionFunction(n), {}};
  const Rational resonant = 2 - n;
  for (const auto& [key, c] : f.radial()) {
    const Rational& a = key.power;
    const int k = key.logpow;
    const Rational a2 = a - 2;
    out.function.add_radial(c * Coefficient(a * (a + n - 2)), a2, k);
    if (k >= 1) out.function.add_radial(c * Coefficient(Rational(2 * k) * (2 * a + n - 2)), a2, k - 1);
    if (k >= 2) out.function.add_radial(c * Coefficient(4 * k * (k - 1)), a2, k - 2);
    if (a == resonant) {
      if (k == 0)
        out.function.add_local(c * Coefficient(-(n - 2)) * sphere_area(n), 0);
      else
        out.flags.insert(kFlagDistributionUndetermined);
    }
  }
  for (const auto& [j, c] : f.local()) out.function.add_local(c, j + 1);
  return out;
}

inline ApplyResult apply_operator(const DiffOperator& L, const PositionFunction& f) {
  ApplyResult out{PositionFunction(f.dim()), {}};
  ApplyResult power{f, {}};
  for (int k = 0; k <= L.degree(); ++k) {
    if (k > 0) {
      ApplyResult next = apply_laplacian(power.function);
      next.flags.insert(power.flags.begin(), power.flags.end());
      power = std::move(next);
    }
    auto it = L.coeffs().find(k);
    if (it == L.coeffs().end()) continue;
    out.function = add(out.function, scale(it->second, power.function));
    out.flags.insert(power.flags.begin(), power.flags.end());
  }
  return out;
}

/// Fourier symbol under F[f](p) = int e^{ip.x} f d^n x: box -> -p^2.
inline MomentumFunction operator_symbol(const DiffOperator& L, int n) {
  MomentumFunction out(n);
  for (const auto& [k, c] : L.coeffs()) out.add_poly(k % 2 == 0 ? c : -c, k);
  return out;
}

}  // namespace difren

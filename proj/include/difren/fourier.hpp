#pragma once

#include <string>
#include <vector>

#include "difren/algebra.hpp"
#include "difren/operators.hpp"
#include "difren/printer.hpp"
#include "difren/representation.hpp"
#include "difren/special.hpp"

// Transform convention: F[f](p) = int e^{ip.x} f(x) d^n x, inverse with (2 pi)^{-n}.

namespace difren {

inline constexpr int kMaxExactLogPower = 3;

/// 0 < a' < n/2 for a term r^{-2a'}, open at both ends.
inline bool in_fourier_window(const Rational& rpow, int n) { return rpow < 0 && rpow > -n; }

inline bool is_fourier_safe_term(const Rational& rpow, int logpow, int n) {
  return in_fourier_window(rpow, n) && logpow <= kMaxExactLogPower;
}

/// Local terms always transform; every radial term must be inside the window with k <= 3.
inline bool is_fourier_safe(const PositionFunction& f) {
  for (const auto& [key, c] : f.radial())
    if (!is_fourier_safe_term(key.power, key.logpow, f.dim())) return false;
  return true;
}

namespace detail {

/// Transform of x-power-log pairs in both directions:
///   r^{-2s} ln^k(r^2 M^2)  ->  sum_i out[i] p^{2s-n} ln^i(p^2/M^2)
/// (and symmetrically for the inverse, without the (2 pi)^{-n}). Obtained by k-fold
/// differentiation of C(s) = pi^{n/2} 2^{n-2s} Gamma(n/2-s)/Gamma(s) in the exponent.
inline std::vector<Coefficient> power_log_kernel(const Rational& s, int n, int k) {
  const Rational half_n(n, 2);
  const Rational other = half_n - s;
  const ExactGamma g_num = exact_gamma(other);
  const ExactGamma g_den = exact_gamma(s);
  const int half_pi = n + g_num.half_pi_power - g_den.half_pi_power;
  if (half_pi % 2 != 0) throw DomainError("internal: odd power of sqrt(pi) in transform constant");
  const long long two_pow = to_int(n - 2 * s);
  const Coefficient C = Coefficient::monomial(rational_pow(2, two_pow) * g_num.rational / g_den.rational,
                                              {half_pi / 2, 0, 0, 0});

  // Derivatives of ln C(s - t) in t at t = 0.
  std::vector<Coefficient> bell{Coefficient(1)};
  if (k >= 1) {
    const Coefficient d1 = 2 * Coefficient::ln2() + exact_digamma(other) + exact_digamma(s);
    bell.push_back(d1);
    if (k >= 2) {
      const Coefficient d2 = exact_trigamma(other) - exact_trigamma(s);
      bell.push_back(d1 * d1 + d2);
      if (k >= 3) {
        const Coefficient d3 = exact_tetragamma(other) + exact_tetragamma(s);
        bell.push_back(d1 * d1 * d1 + 3 * d1 * d2 + d3);
      }
    }
  }

  std::vector<Coefficient> out(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    const int logpow = k - j;
    Coefficient c = Coefficient(binomial(k, j)) * C * bell[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(logpow)] += (logpow % 2 == 0) ? c : -c;
  }
  return out;
}

inline void check_exact_support(const Rational& power, int logpow, int n, const std::string& what) {
  if (!in_fourier_window(power, n))
    throw DomainError(what + " is outside the Fourier-safe window -" + std::to_string(n) +
                          " < exponent < 0",
                      "not_fourier_safe");
  if (logpow > kMaxExactLogPower)
    throw DomainError(what + " exceeds exact symbol set (log power > 3); use the numeric oracle",
                      "exact_symbol_set");
  if (!is_integer(power))
    throw DomainError(what + " has a non-integer exponent and exceeds exact symbol set; use the numeric oracle",
                      "exact_symbol_set");
}

}  // namespace detail

inline MomentumFunction fourier_base(const PositionFunction& g) {
  const int n = g.dim();
  MomentumFunction out(n);
  for (const auto& t : g.radial_terms()) {
    detail::check_exact_support(t.rpow, t.logpow, n, "term " + to_string(t));
    const Rational s = -t.rpow / 2;
    const auto kernel = detail::power_log_kernel(s, n, t.logpow);
    for (std::size_t i = 0; i < kernel.size(); ++i)
      out.add_term(t.coeff * kernel[i], 2 * s - n, static_cast<int>(i));
  }
  for (const auto& t : g.local_terms()) out.add_poly(t.boxpow % 2 == 0 ? t.coeff : -t.coeff, t.boxpow);
  return out;
}

/// Inverse on the supported class: f(x) = (2 pi)^{-n} int e^{-ip.x} F(p) d^n p.
inline PositionFunction inverse_fourier_base(const MomentumFunction& F) {
  const int n = F.dim();
  PositionFunction out(n);
  const Coefficient norm = Coefficient::monomial(rational_pow(2, -n), {-n, 0, 0, 0});
  for (const auto& t : F.momentum_terms()) {
    detail::check_exact_support(t.ppow, t.logpow, n, "momentum term " + to_string(t));
    const Rational s = -t.ppow / 2;
    const auto kernel = detail::power_log_kernel(s, n, t.logpow);
    for (std::size_t i = 0; i < kernel.size(); ++i)
      out.add_radial(norm * t.coeff * kernel[i], 2 * s - n, static_cast<int>(i));
  }
  for (const auto& [j, c] : F.poly()) out.add_local(j % 2 == 0 ? c : -c, j);
  return out;
}

/// Formal integration by parts with surface terms dropped: symbol(L) * F[g].
inline MomentumFunction fourier_formal(const DiffOperator& op, const PositionFunction& seed) {
  return mul(operator_symbol(op, seed.dim()), fourier_base(seed));
}

inline MomentumFunction fourier_formal(const Representation& rep) {
  return fourier_formal(rep.op, rep.seed);
}

/// d/d ln M^2: ln^k(p^2/M^2) -> -k ln^{k-1}(p^2/M^2); the polynomial part is M-independent.
inline MomentumFunction cs_derivative(const MomentumFunction& F) {
  MomentumFunction out(F.dim());
  for (const auto& t : F.momentum_terms())
    if (t.logpow > 0) out.add_term(Coefficient(-t.logpow) * t.coeff, t.ppow, t.logpow - 1);
  return out;
}

/// d/d ln M^2: ln^k(r^2 M^2) -> +k ln^{k-1}(r^2 M^2); local terms are M-independent.
inline PositionFunction cs_derivative(const PositionFunction& f) {
  PositionFunction out(f.dim());
  for (const auto& t : f.radial_terms())
    if (t.logpow > 0) out.add_radial(Coefficient(t.logpow) * t.coeff, t.rpow, t.logpow - 1);
  return out;
}

/// M d/dM = 2 d/d ln M^2.
inline MomentumFunction mass_derivative(const MomentumFunction& F) { return scale(2, cs_derivative(F)); }
inline PositionFunction mass_derivative(const PositionFunction& f) { return scale(2, cs_derivative(f)); }

}  // namespace difren

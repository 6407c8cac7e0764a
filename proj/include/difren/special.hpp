#pragma once

#include <cmath>
#include <string>

#include "difren/coefficient.hpp"
#include "difren/errors.hpp"

namespace difren {

// ---------------------------------------------------------------------------------------------
// Exact values at positive integer and half-integer arguments.
// ---------------------------------------------------------------------------------------------

/// Gamma(x) = rational * pi^(half_pi_power / 2).
struct ExactGamma {
  Rational rational;
  int half_pi_power = 0;
};

namespace detail {

inline void check_half_integer(const Rational& x, const char* what) {
  if (x <= 0 || !is_integer(2 * x))
    throw DomainError(std::string(what) + " is exact only at positive integers and half-integers, got " +
                          x.str(),
                      "exact_symbol_set");
}

}  // namespace detail

inline ExactGamma exact_gamma(const Rational& x) {
  detail::check_half_integer(x, "Gamma");
  if (is_integer(x)) return {Rational(factorial(to_int(x) - 1)), 0};
  // Gamma(m + 1/2) = (2m)! / (4^m m!) sqrt(pi)
  const long long m = to_int(x - Rational(1, 2));
  return {Rational(factorial(2 * m)) / Rational(Integer(1) << (2 * m)) / Rational(factorial(m)), 1};
}

/// psi(x) at a positive integer or half-integer.
inline Coefficient exact_digamma(const Rational& x) {
  detail::check_half_integer(x, "digamma");
  Coefficient out = -Coefficient::gamma_e();
  if (is_integer(x)) {
    for (long long k = 1; k < to_int(x); ++k) out += Rational(1, k);
  } else {
    out -= 2 * Coefficient::ln2();
    const long long m = to_int(x - Rational(1, 2));
    for (long long k = 1; k <= m; ++k) out += Rational(2, 2 * k - 1);
  }
  return out;
}

/// psi'(x) at a positive integer or half-integer.
inline Coefficient exact_trigamma(const Rational& x) {
  detail::check_half_integer(x, "trigamma");
  if (is_integer(x)) {
    Coefficient out = Coefficient::monomial(Rational(1, 6), {2, 0, 0, 0});
    for (long long k = 1; k < to_int(x); ++k) out -= Rational(1, k * k);
    return out;
  }
  Coefficient out = Coefficient::monomial(Rational(1, 2), {2, 0, 0, 0});
  const long long m = to_int(x - Rational(1, 2));
  for (long long k = 1; k <= m; ++k) out -= Rational(4, (2 * k - 1) * (2 * k - 1));
  return out;
}

/// psi''(x) at a positive integer or half-integer.
inline Coefficient exact_tetragamma(const Rational& x) {
  detail::check_half_integer(x, "tetragamma");
  if (is_integer(x)) {
    Coefficient out = -2 * Coefficient::zeta3();
    for (long long k = 1; k < to_int(x); ++k) out += Rational(2, k * k * k);
    return out;
  }
  Coefficient out = -14 * Coefficient::zeta3();
  const long long m = to_int(x - Rational(1, 2));
  for (long long k = 1; k <= m; ++k) {
    const long long d = 2 * k - 1;
    out += Rational(16, d * d * d);
  }
  return out;
}

/// Area of the unit sphere S^{n-1}: 2 pi^{n/2} / Gamma(n/2).
inline Coefficient sphere_area(int n) {
  if (n < 1) throw DomainError("dimension must be positive");
  const ExactGamma g = exact_gamma(Rational(n, 2));
  const int half_pi = n - g.half_pi_power;  // always even
  return Coefficient::monomial(Rational(2) / g.rational, {half_pi / 2, 0, 0, 0});
}

inline double sphere_area_numeric(int n) {
  return 2.0 * std::pow(numeric_constants::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

// ---------------------------------------------------------------------------------------------
// Bessel J and the angular kernel A_n(z) = Gamma(n/2) (2/z)^{n/2-1} J_{n/2-1}(z).
// Power series below the crossover, Hankel asymptotic expansion above it.
// ---------------------------------------------------------------------------------------------

inline constexpr double kBesselCrossover = 12.0;

/// a_k(nu) of the Hankel expansion: prod_{i=1..k} (4nu^2 - (2i-1)^2) / (k! 8^k).
inline double hankel_coefficient(double nu, int k) {
  double a = 1.0;
  const double mu = 4.0 * nu * nu;
  for (int i = 1; i <= k; ++i) a *= (mu - (2.0 * i - 1) * (2.0 * i - 1)) / (8.0 * i);
  return a;
}

namespace detail {

/// sqrt(2/(pi z)) [P cos w - Q sin w], truncated at the smallest term.
inline double bessel_j_asymptotic(double nu, double z) {
  const double w = z - 0.5 * nu * numeric_constants::pi - 0.25 * numeric_constants::pi;
  double P = 0.0, Q = 0.0;
  double prev = INFINITY;
  double zk = 1.0;
  for (int k = 0; k < 80; ++k) {
    const double term = hankel_coefficient(nu, k) / zk;
    if (k > 0 && std::abs(term) >= prev) break;
    // i^k: k%4 == 0 -> +P, 1 -> +Q, 2 -> -P, 3 -> -Q
    switch (k % 4) {
      case 0: P += term; break;
      case 1: Q += term; break;
      case 2: P -= term; break;
      default: Q -= term; break;
    }
    prev = std::abs(term);
    if (prev == 0.0 || prev < 1e-18 * std::abs(P)) break;
    zk *= z;
  }
  return std::sqrt(2.0 / (numeric_constants::pi * z)) * (P * std::cos(w) - Q * std::sin(w));
}

}  // namespace detail

/// J_nu(z) for nu >= 0, z >= 0.
inline double bessel_j(double nu, double z) {
  if (nu < 0 || z < 0) throw DomainError("bessel_j requires nu >= 0 and z >= 0");
  if (z >= kBesselCrossover) return detail::bessel_j_asymptotic(nu, z);
  if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const double x2 = -0.25 * z * z;
  double term = std::pow(0.5 * z, nu) / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= x2 / (k * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

/// Spherical average of exp(i p.x) over |x| = r, as a function of z = p r.
inline double angular_kernel(int n, double z) {
  if (n < 1) throw DomainError("dimension must be positive");
  z = std::abs(z);
  const double half_n = 0.5 * n;
  if (z < kBesselCrossover) {
    const double x2 = -0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int j = 1; j < 200; ++j) {
      term *= x2 / (j * (half_n + j - 1));
      sum += term;
      if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
  }
  const double nu = half_n - 1.0;
  return std::tgamma(half_n) * std::pow(2.0 / z, nu) * detail::bessel_j_asymptotic(nu, z);
}

}  // namespace difren

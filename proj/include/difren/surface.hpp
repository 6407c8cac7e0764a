#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "difren/algebra.hpp"
#include "difren/operators.hpp"
#include "difren/special.hpp"

namespace difren {

/// Taylor coefficient of the angular kernel: A_n(z) = sum_i alpha_i z^{2i},
/// alpha_i = (-1/4)^i Gamma(n/2) / (i! Gamma(n/2 + i)).
inline Rational angular_series_coefficient(int n, int i) {
  Rational out = 1;
  for (int t = 0; t < i; ++t) out *= Rational(-1, 4) / (Rational(t + 1) * (Rational(n, 2) + t));
  return out;
}

/// Boundary terms on |x| = epsilon dropped by formal integration by parts, as
///   sum value(p) * eps^m * ln^k(eps M)   (m <= 0)   + O(eps^remainder_pow ln^remainder_log eps).
struct SurfaceExpansion {
  int dim = 0;
  std::map<PowerLogKey, MomentumFunction> entries;  ///< key: (eps power m, log power k)
  std::optional<Rational> remainder_pow;
  int remainder_log = 0;

  bool empty() const { return entries.empty(); }

  double evaluate(double eps, double p, double mass) const {
    const double lam = std::log(eps * mass);
    double sum = 0.0;
    for (const auto& [key, value] : entries)
      sum += eval_momentum(value, p, mass) * std::pow(eps, to_double(key.power)) * std::pow(lam, key.logpow);
    return sum;
  }
};

struct LeadingDivergence {
  Rational eps_pow;
  int log_pow = 0;
  MomentumFunction value;
};

namespace detail {

inline void add_entry(SurfaceExpansion& se, const Rational& m, int k, const Coefficient& c, int p2_power) {
  if (c.is_zero()) return;
  auto [it, inserted] = se.entries.try_emplace(PowerLogKey{m, k}, MomentumFunction(se.dim));
  it->second.add_poly(c, p2_power);
  if (it->second.is_zero()) se.entries.erase(it);
}

inline void note_remainder(SurfaceExpansion& se, const Rational& m, int k) {
  if (!se.remainder_pow || m < *se.remainder_pow) {
    se.remainder_pow = m;
    se.remainder_log = k;
  } else if (m == *se.remainder_pow) {
    se.remainder_log = std::max(se.remainder_log, k);
  }
}

/// Largest kernel index i with n - 2 + a + 2i <= 0, or -1 if none.
inline int last_needed_index(int n, const Rational& a) {
  const Rational bound = (Rational(2 - n) - a) / 2;
  if (bound < 0) return -1;
  Integer fl = boost::multiprecision::numerator(bound) / boost::multiprecision::denominator(bound);
  return fl.convert_to<int>();
}

}  // namespace detail

/// Kernel terms needed so that every eps^m with m <= 0 is reached for L g.
inline int required_series_order(const DiffOperator& op, const PositionFunction& seed) {
  int need = 0;
  PositionFunction v = seed.radial_part();
  for (int j = 0; j < op.degree(); ++j) {
    for (const auto& [key, c] : v.radial()) need = std::max(need, detail::last_needed_index(v.dim(), key.power) + 1);
    v = apply_laplacian(v).function.radial_part();
  }
  return need;
}

/// Iterates Green's identity over |x| > epsilon for each power of box in `op`:
///   int_{r>eps} u box v = -p^2 int_{r>eps} u v - S(v),
///   S(v) = Omega eps^{n-1} [A_n(p eps) v'(eps) - v(eps) p A_n'(p eps)],
/// with u = exp(ip.x) replaced by its spherical average. The expansion collects
/// -sum_j (-p^2)^{k-1-j} S(box^j g) at orders eps^m, m <= 0.
inline SurfaceExpansion surface_expansion(const DiffOperator& op, const PositionFunction& seed,
                                          std::optional<int> order = std::nullopt) {
  if (seed.has_local()) throw DomainError("surface expansion requires a radial-only seed", "local_terms");
  const int n = seed.dim();
  const int needed = required_series_order(op, seed);
  const int terms = order.value_or(needed + 1);
  if (terms < needed)
    throw DomainError("series order " + std::to_string(terms) + " is insufficient to reach eps^0; need at least " +
                          std::to_string(needed),
                      "series_order");
  const Coefficient omega = sphere_area(n);

  SurfaceExpansion se;
  se.dim = n;

  // Inner ball |x| < eps dropped from the seed transform: O(eps^{n+a}).
  if (!op.is_zero())
    for (const auto& [key, c] : seed.radial()) detail::note_remainder(se, key.power + n, key.logpow);

  for (const auto& [power, ck] : op.coeffs()) {
    PositionFunction v = seed.radial_part();
    for (int j = 0; j < power; ++j) {
      const int p2_from_iteration = power - 1 - j;
      const Coefficient sign = (p2_from_iteration % 2 == 0) ? Coefficient(-1) : Coefficient(1);
      for (const auto& [key, c] : v.radial()) {
        const Rational& a = key.power;
        const int k = key.logpow;
        for (int i = 0; i <= terms; ++i) {
          const Rational m = Rational(n - 2) + a + 2 * i;
          if (i == terms || m > 0) {
            // first dropped order of (a - 2i) l^k + 2k l^{k-1}
            if (a - 2 * i != 0)
              detail::note_remainder(se, m, k);
            else if (k > 0)
              detail::note_remainder(se, m, k - 1);
            break;
          }
          const Coefficient base = sign * ck * omega * c * Coefficient(angular_series_coefficient(n, i));
          // l = ln(eps^2 M^2) = 2 ln(eps M)
          detail::add_entry(se, m, k, base * Coefficient((a - 2 * i) * rational_pow(2, k)), i + p2_from_iteration);
          if (k > 0)
            detail::add_entry(se, m, k - 1, base * Coefficient(Rational(2 * k) * rational_pow(2, k - 1)),
                              i + p2_from_iteration);
        }
      }
      v = apply_laplacian(v).function.radial_part();
    }
  }
  return se;
}

/// Most divergent entry: the most negative eps power, then the highest log power.
/// nullopt ("finite") when nothing diverges.
inline std::optional<LeadingDivergence> leading_divergence(const SurfaceExpansion& se) {
  if (se.entries.empty()) return std::nullopt;
  const Rational m0 = se.entries.begin()->first.power;
  const PowerLogKey* best = nullptr;
  const MomentumFunction* value = nullptr;
  for (const auto& [key, v] : se.entries)
    if (key.power == m0 && (!best || key.logpow > best->logpow)) best = &key, value = &v;
  if (m0 == 0 && best->logpow == 0) return std::nullopt;
  return LeadingDivergence{best->power, best->logpow, *value};
}

}  // namespace difren

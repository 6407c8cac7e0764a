#pragma once

#include <random>
#include <vector>

#include "difren/algebra.hpp"

namespace gen {

using namespace difren;

inline Coefficient small_coefficient(std::mt19937_64& g, bool transcendental = true) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4), pick(0, 3);
  Coefficient c(Rational(num(g), den(g)));
  if (transcendental && pick(g) == 0) c += Coefficient::monomial(Rational(num(g), den(g)), {pick(g) - 1, 1, 0, 0});
  if (transcendental && pick(g) == 0) c *= Coefficient::pi(2);
  return c;
}

/// Exponent a = q/2 with q in [lo, hi] (half-integers included).
inline Rational half_exponent(std::mt19937_64& g, int lo, int hi) {
  return Rational(std::uniform_int_distribution<int>(lo, hi)(g), 2);
}

inline std::vector<RadialTerm> radial_terms(std::mt19937_64& g, int count, int lo, int hi, int max_log) {
  std::uniform_int_distribution<int> logs(0, max_log);
  std::vector<RadialTerm> out;
  for (int i = 0; i < count; ++i) out.push_back({small_coefficient(g), half_exponent(g, lo, hi), logs(g)});
  return out;
}

inline PositionFunction position(std::mt19937_64& g, int dim, int count = 4, bool local = true) {
  auto f = PositionFunction::from_terms(dim, radial_terms(g, count, -2 * dim + 2, 6, 3));
  if (local && std::uniform_int_distribution<int>(0, 2)(g) == 0)
    f.add_local(small_coefficient(g), std::uniform_int_distribution<int>(0, 2)(g));
  return f;
}

/// Terms with -n < a < 0 and k <= max_log; integer a so transforms stay in the exact symbol set.
inline PositionFunction fourier_safe(std::mt19937_64& g, int dim, int count, int max_log) {
  std::uniform_int_distribution<int> a(1 - dim, -1), logs(0, max_log);
  PositionFunction f(dim);
  for (int i = 0; i < count; ++i) f.add_radial(small_coefficient(g), a(g), logs(g));
  return f;
}

inline MomentumFunction momentum(std::mt19937_64& g, int dim, int count = 4) {
  std::uniform_int_distribution<int> logs(0, 3), poly(0, 2);
  MomentumFunction F(dim);
  for (int i = 0; i < count; ++i) F.add_term(small_coefficient(g), half_exponent(g, -8, 4), logs(g));
  F.add_poly(small_coefficient(g), poly(g));
  return F;
}

}  // namespace gen

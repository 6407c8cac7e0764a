#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "difren/fourier.hpp"
#include "difren/numeric.hpp"
#include "difren/regulate.hpp"

namespace difren {

/// Evaluation of a Fourier-safe function's transform at a fixed momentum p0.
struct Character {
  int dim = 4;
  double p0 = 1.0;
  double mass = 1.0;
};

/// Numeric value plus the exact symbolic value when p0 and M make it representable
/// (integer momentum powers, and p0/M a power of two whenever logarithms appear).
struct CharacterValue {
  double value = 0.0;
  std::optional<Coefficient> exact;
};

/// The formal pair representing a (b - eps(b)).
struct IdealElement {
  PositionFunction a;
  PositionFunction b;

  IdealElement(PositionFunction a_, PositionFunction b_) : a(std::move(a_)), b(std::move(b_)) {
    detail::check_dim(a.dim(), b.dim());
    if (!is_fourier_safe(b)) throw DomainError("ideal generator b must be Fourier-safe", "not_fourier_safe");
  }
};

namespace detail {

inline std::optional<Coefficient> exact_momentum_value(const MomentumFunction& F, double p0, double mass) {
  const Rational p(p0);
  Coefficient log_value;
  bool have_log = false;
  try {
    log_value = 2 * MassRatio::from_rational(Rational(p0) / Rational(mass)).log();
    have_log = true;
  } catch (const DomainError&) {
  }
  Coefficient out;
  for (const auto& t : F.momentum_terms()) {
    if (!is_integer(t.ppow)) return std::nullopt;
    if (t.logpow > 0 && !have_log) return std::nullopt;
    out += t.coeff * Coefficient(rational_pow(p, to_int(t.ppow))) * (t.logpow ? log_value.pow(t.logpow) : Coefficient(1));
  }
  for (const auto& [j, c] : F.poly()) out += c * Coefficient(rational_pow(p, 2 * j));
  return out;
}

}  // namespace detail

inline CharacterValue character_eval(const PositionFunction& b, const Character& ch) {
  detail::check_dim(b.dim(), ch.dim);
  if (!is_fourier_safe(b)) throw DomainError("character is defined only on Fourier-safe functions", "not_fourier_safe");
  const MomentumFunction F = fourier_base(b);
  return {eval_momentum(F, ch.p0, ch.mass), detail::exact_momentum_value(F, ch.p0, ch.mass)};
}

/// eps(b) * a: the representative of a*b modulo the ideal.
struct ReducedElement {
  CharacterValue scalar;
  PositionFunction factor;

  std::optional<PositionFunction> exact() const {
    if (!scalar.exact) return std::nullopt;
    return scale(*scalar.exact, factor);
  }
};

inline ReducedElement reduce_mod_ideal(const IdealElement& elem, const Character& ch) {
  (void)mul(elem.a, elem.b);  // product must be defined
  return {character_eval(elem.b, ch), elem.a};
}

/// A transform value at p0 together with the route used to obtain it.
struct TransformValue {
  double value = 0.0;
  std::string route;  ///< "zero", "exact", "regularized" or "numeric"
  std::string symbolic;
};

inline TransformValue transform_at(const PositionFunction& f, const Character& ch, const QuadratureConfig& cfg = {}) {
  if (f.is_zero()) return {0.0, "zero", "0"};
  if (is_fourier_safe(f)) {
    try {
      const MomentumFunction F = fourier_base(f);
      return {eval_momentum(F, ch.p0, ch.mass), "exact", to_string(F)};
    } catch (const DomainError& e) {
      if (e.code() != "exact_symbol_set") throw;
    }
  } else if (!f.has_local()) {
    try {
      const Representation rep = find_representation(f);
      const MomentumFunction F = fourier_formal(rep);
      return {eval_momentum(F, ch.p0, ch.mass), "regularized", to_string(F)};
    } catch (const DomainError&) {
    }
  }
  bool integrable = !f.has_local() && !f.radial().empty();
  for (const auto& [key, c] : f.radial()) integrable = integrable && in_fourier_window(key.power, f.dim());
  if (!integrable)
    throw DomainError("neither an exact nor a numeric transform is available for " + to_string(f), "no_transform");
  return {hankel_numeric(f, ch.p0, ch.mass, cfg).value, "numeric", ""};
}

struct AuditReport {
  PositionFunction product;
  TransformValue transform_product;  ///< F[a b](p0)
  TransformValue transform_a;        ///< F[a](p0)
  CharacterValue character;          ///< eps(b)
  double difference = 0.0;           ///< F[a b](p0) - eps(b) F[a](p0)
  double residual = 0.0;             ///< |difference|
};

/// Checks whether a (b - eps(b)) lands in the kernel of the transform evaluated at p0.
/// Reports the residual; it does not assume it vanishes.
inline AuditReport diagram_audit(const IdealElement& elem, const Character& ch, const QuadratureConfig& cfg = {}) {
  AuditReport rep{mul(elem.a, elem.b), {}, {}, character_eval(elem.b, ch), 0.0, 0.0};
  rep.transform_product = transform_at(rep.product, ch, cfg);
  rep.transform_a = transform_at(elem.a, ch, cfg);
  rep.difference = rep.transform_product.value - rep.character.value * rep.transform_a.value;
  rep.residual = std::abs(rep.difference);
  return rep;
}

}  // namespace difren

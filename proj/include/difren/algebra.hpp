#pragma once

#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "difren/coefficient.hpp"
#include "difren/errors.hpp"

namespace difren {

/// coeff * r^rpow * ln^logpow(r^2 M^2)
struct RadialTerm {
  Coefficient coeff;
  Rational rpow;
  int logpow = 0;
  friend bool operator==(const RadialTerm&, const RadialTerm&) = default;
};

/// coeff * box^boxpow delta^n(x)
struct LocalTerm {
  Coefficient coeff;
  int boxpow = 0;
  friend bool operator==(const LocalTerm&, const LocalTerm&) = default;
};

/// coeff * p^ppow * ln^logpow(p^2 / M^2)
struct MomentumTerm {
  Coefficient coeff;
  Rational ppow;
  int logpow = 0;
  friend bool operator==(const MomentumTerm&, const MomentumTerm&) = default;
};

struct PowerLogKey {
  Rational power;
  int logpow = 0;
  friend bool operator==(const PowerLogKey&, const PowerLogKey&) = default;
  friend bool operator<(const PowerLogKey& a, const PowerLogKey& b) {
    if (a.power != b.power) return a.power < b.power;
    return a.logpow < b.logpow;
  }
};

namespace detail {

template <class Key>
void accumulate(std::map<Key, Coefficient>& into, const Key& key, const Coefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = into.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) into.erase(it);
  }
}

inline void check_dim(int a, int b) {
  if (a != b)
    throw DomainError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b),
                      "dimension_mismatch");
}

inline void check_logpow(int k) {
  if (k < 0) throw DomainError("log power must be non-negative, got " + std::to_string(k));
}

}  // namespace detail

/// Radial power-log terms plus local terms supported at the origin, in `dim` Euclidean
/// dimensions. All logarithms refer to the single global mass M.
class PositionFunction {
 public:
  explicit PositionFunction(int dim) : dim_(dim) {
    if (dim < 1) throw DomainError("dimension must be positive");
  }

  /// Builds the normalized form of an arbitrary term list.
  static PositionFunction from_terms(int dim, const std::vector<RadialTerm>& radial,
                                     const std::vector<LocalTerm>& local = {}) {
    PositionFunction f(dim);
    for (const auto& t : radial) f.add_radial(t.coeff, t.rpow, t.logpow);
    for (const auto& t : local) f.add_local(t.coeff, t.boxpow);
    return f;
  }

  static PositionFunction term(int dim, const Coefficient& c, const Rational& rpow, int logpow = 0) {
    PositionFunction f(dim);
    f.add_radial(c, rpow, logpow);
    return f;
  }

  static PositionFunction delta(int dim, const Coefficient& c = 1, int boxpow = 0) {
    PositionFunction f(dim);
    f.add_local(c, boxpow);
    return f;
  }

  void add_radial(const Coefficient& c, const Rational& rpow, int logpow) {
    detail::check_logpow(logpow);
    detail::accumulate(radial_, PowerLogKey{rpow, logpow}, c);
  }

  void add_local(const Coefficient& c, int boxpow) {
    if (boxpow < 0) throw DomainError("box power must be non-negative");
    detail::accumulate(local_, boxpow, c);
  }

  int dim() const { return dim_; }
  const std::map<PowerLogKey, Coefficient>& radial() const { return radial_; }
  const std::map<int, Coefficient>& local() const { return local_; }
  bool has_local() const { return !local_.empty(); }
  bool is_zero() const { return radial_.empty() && local_.empty(); }

  std::vector<RadialTerm> radial_terms() const {
    std::vector<RadialTerm> out;
    for (const auto& [k, c] : radial_) out.push_back({c, k.power, k.logpow});
    return out;
  }
  std::vector<LocalTerm> local_terms() const {
    std::vector<LocalTerm> out;
    for (const auto& [j, c] : local_) out.push_back({c, j});
    return out;
  }

  PositionFunction radial_part() const {
    PositionFunction f(dim_);
    f.radial_ = radial_;
    return f;
  }
  PositionFunction local_part() const {
    PositionFunction f(dim_);
    f.local_ = local_;
    return f;
  }

  int max_logpow() const {
    int k = 0;
    for (const auto& [key, c] : radial_) k = std::max(k, key.logpow);
    return k;
  }

  friend bool operator==(const PositionFunction&, const PositionFunction&) = default;

 private:
  int dim_;
  std::map<PowerLogKey, Coefficient> radial_;
  std::map<int, Coefficient> local_;
};

/// Momentum power-log terms plus an exact polynomial in p^2. A term p^{2j} without logs
/// is always folded into the polynomial part, so the representation is canonical.
class MomentumFunction {
 public:
  explicit MomentumFunction(int dim) : dim_(dim) {
    if (dim < 1) throw DomainError("dimension must be positive");
  }

  static MomentumFunction from_terms(int dim, const std::vector<MomentumTerm>& terms,
                                     const std::map<int, Coefficient>& poly = {}) {
    MomentumFunction F(dim);
    for (const auto& t : terms) F.add_term(t.coeff, t.ppow, t.logpow);
    for (const auto& [j, c] : poly) F.add_poly(c, j);
    return F;
  }

  static MomentumFunction term(int dim, const Coefficient& c, const Rational& ppow, int logpow = 0) {
    MomentumFunction F(dim);
    F.add_term(c, ppow, logpow);
    return F;
  }

  static MomentumFunction constant(int dim, const Coefficient& c) {
    MomentumFunction F(dim);
    F.add_poly(c, 0);
    return F;
  }

  void add_term(const Coefficient& c, const Rational& ppow, int logpow) {
    detail::check_logpow(logpow);
    if (logpow == 0 && is_integer(ppow) && ppow >= 0 && to_int(ppow) % 2 == 0) {
      add_poly(c, static_cast<int>(to_int(ppow) / 2));
      return;
    }
    detail::accumulate(terms_, PowerLogKey{ppow, logpow}, c);
  }

  /// Adds c * p^{2j}.
  void add_poly(const Coefficient& c, int j) {
    if (j < 0) throw DomainError("polynomial degree must be non-negative");
    detail::accumulate(poly_, j, c);
  }

  int dim() const { return dim_; }
  const std::map<PowerLogKey, Coefficient>& terms() const { return terms_; }
  const std::map<int, Coefficient>& poly() const { return poly_; }
  bool is_zero() const { return terms_.empty() && poly_.empty(); }
  /// True when no term depends on p.
  bool is_constant() const {
    return terms_.empty() && (poly_.empty() || (poly_.size() == 1 && poly_.begin()->first == 0));
  }
  Coefficient constant_value() const {
    if (!is_constant()) throw DomainError("momentum function is not constant");
    return poly_.empty() ? Coefficient() : poly_.begin()->second;
  }

  std::vector<MomentumTerm> momentum_terms() const {
    std::vector<MomentumTerm> out;
    for (const auto& [k, c] : terms_) out.push_back({c, k.power, k.logpow});
    return out;
  }

  friend bool operator==(const MomentumFunction&, const MomentumFunction&) = default;

 private:
  int dim_;
  std::map<PowerLogKey, Coefficient> terms_;
  std::map<int, Coefficient> poly_;
};

/// Idempotent; values are kept normalized on construction, so this only copies.
inline PositionFunction normalize(const PositionFunction& f) { return f; }
inline MomentumFunction normalize(const MomentumFunction& F) { return F; }

inline PositionFunction add(const PositionFunction& f, const PositionFunction& g) {
  detail::check_dim(f.dim(), g.dim());
  PositionFunction out = f;
  for (const auto& [k, c] : g.radial()) out.add_radial(c, k.power, k.logpow);
  for (const auto& [j, c] : g.local()) out.add_local(c, j);
  return out;
}

inline MomentumFunction add(const MomentumFunction& f, const MomentumFunction& g) {
  detail::check_dim(f.dim(), g.dim());
  MomentumFunction out = f;
  for (const auto& [k, c] : g.terms()) out.add_term(c, k.power, k.logpow);
  for (const auto& [j, c] : g.poly()) out.add_poly(c, j);
  return out;
}

inline PositionFunction scale(const Coefficient& s, const PositionFunction& f) {
  PositionFunction out(f.dim());
  for (const auto& [k, c] : f.radial()) out.add_radial(s * c, k.power, k.logpow);
  for (const auto& [j, c] : f.local()) out.add_local(s * c, j);
  return out;
}

inline MomentumFunction scale(const Coefficient& s, const MomentumFunction& F) {
  MomentumFunction out(F.dim());
  for (const auto& [k, c] : F.terms()) out.add_term(s * c, k.power, k.logpow);
  for (const auto& [j, c] : F.poly()) out.add_poly(s * c, j);
  return out;
}

inline PositionFunction subtract(const PositionFunction& f, const PositionFunction& g) {
  return add(f, scale(-1, g));
}
inline MomentumFunction subtract(const MomentumFunction& f, const MomentumFunction& g) {
  return add(f, scale(-1, g));
}

/// Pointwise product on the radial subalgebra.
inline PositionFunction mul(const PositionFunction& f, const PositionFunction& g) {
  detail::check_dim(f.dim(), g.dim());
  if (f.has_local() || g.has_local())
    throw DomainError("undefined product of distributions", "undefined_product");
  PositionFunction out(f.dim());
  for (const auto& [kf, cf] : f.radial())
    for (const auto& [kg, cg] : g.radial())
      out.add_radial(cf * cg, kf.power + kg.power, kf.logpow + kg.logpow);
  return out;
}

/// Pointwise product in momentum space (polynomial parts included).
inline MomentumFunction mul(const MomentumFunction& f, const MomentumFunction& g) {
  detail::check_dim(f.dim(), g.dim());
  MomentumFunction out(f.dim());
  auto as_terms = [](const MomentumFunction& F) {
    std::vector<MomentumTerm> ts = F.momentum_terms();
    for (const auto& [j, c] : F.poly()) ts.push_back({c, Rational(2 * j), 0});
    return ts;
  };
  for (const auto& a : as_terms(f))
    for (const auto& b : as_terms(g)) out.add_term(a.coeff * b.coeff, a.ppow + b.ppow, a.logpow + b.logpow);
  return out;
}

inline double eval_position(const PositionFunction& f, double r, double mass) {
  if (!(r > 0)) throw DomainError("eval_position requires r > 0");
  if (!(mass > 0)) throw DomainError("mass must be positive");
  if (f.has_local()) throw DomainError("cannot evaluate local terms pointwise", "local_terms");
  const double ell = std::log(r * r * mass * mass);
  double sum = 0.0;
  for (const auto& [k, c] : f.radial())
    sum += c.evaluate() * std::pow(r, to_double(k.power)) * std::pow(ell, k.logpow);
  return sum;
}

inline double eval_momentum(const MomentumFunction& F, double p, double mass) {
  if (!(p > 0)) throw DomainError("eval_momentum requires p > 0");
  if (!(mass > 0)) throw DomainError("mass must be positive");
  const double L = std::log(p * p / (mass * mass));
  double sum = 0.0;
  for (const auto& [k, c] : F.terms())
    sum += c.evaluate() * std::pow(p, to_double(k.power)) * std::pow(L, k.logpow);
  for (const auto& [j, c] : F.poly()) sum += c.evaluate() * std::pow(p * p, j);
  return sum;
}

}  // namespace difren

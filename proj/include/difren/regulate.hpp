#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "difren/fourier.hpp"
#include "difren/operators.hpp"
#include "difren/printer.hpp"
#include "difren/representation.hpp"

namespace difren {

namespace detail {

/// Exact solve of A c = b with rational A and Coefficient right-hand side.
/// Returns nullopt when inconsistent; throws when the solution is not unique.
inline std::optional<std::vector<Coefficient>> solve_exact(std::vector<std::vector<Rational>> A,
                                                           std::vector<Coefficient> b) {
  const std::size_t rows = A.size();
  const std::size_t cols = rows ? A.front().size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && A[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(A[piv], A[r]);
    std::swap(b[piv], b[r]);
    const Rational inv = Rational(1) / A[r][c];
    for (auto& x : A[r]) x *= inv;
    b[r] = Coefficient(inv) * b[r];
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      const Rational f = A[i][c];
      for (std::size_t j = 0; j < cols; ++j) A[i][j] -= f * A[r][j];
      b[i] -= Coefficient(f) * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (!b[i].is_zero()) return std::nullopt;
  if (r < cols) throw DomainError("underdetermined seed system after the minimality rule", "underdetermined");
  std::vector<Coefficient> x(cols);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

inline void check_regulate_target(const PositionFunction& target) {
  const int n = target.dim();
  if (target.has_local()) throw DomainError("precondition violated: target must be radial-only", "precondition");
  if (target.is_zero()) throw DomainError("precondition violated: target is zero", "precondition");
  if (is_fourier_safe(target))
    throw DomainError("precondition violated: target is Fourier-safe", "precondition");
  for (const auto& t : target.radial_terms()) {
    if (!is_integer(t.rpow))
      throw DomainError("term " + to_string(t) + " has a non-integer exponent", "precondition");
    if (t.rpow > -n)
      throw DomainError("precondition violated: term " + to_string(t) + " is not singular (exponent > -" +
                            std::to_string(n) + ")",
                        "precondition");
  }
}

}  // namespace detail

/// Finds (box^m, g) with box^m g = target away from the origin and g Fourier-safe, for the
/// smallest m <= max_box_power. Seeds annihilated by box^m get coefficient zero.
inline Representation find_representation(const PositionFunction& target, int max_box_power = 4) {
  if (max_box_power < 1) throw DomainError("max box power must be >= 1", "usage");
  detail::check_regulate_target(target);
  const int n = target.dim();
  const int max_log = target.max_logpow();

  std::set<Rational> target_powers;
  for (const auto& [key, c] : target.radial()) target_powers.insert(key.power);

  for (int m = 1; m <= max_box_power; ++m) {
    const DiffOperator op = DiffOperator::box_power(m);
    std::vector<PowerLogKey> basis;
    std::vector<PositionFunction> images;
    std::set<PowerLogKey> row_keys;
    for (const auto& [key, c] : target.radial()) row_keys.insert(key);
    for (const Rational& a : target_powers)
      for (int j = 0; j <= max_log + m; ++j) {
        const PowerLogKey key{a + 2 * m, j};
        PositionFunction image = apply_operator(op, PositionFunction::term(n, 1, key.power, key.logpow)).function.radial_part();
        if (image.is_zero()) continue;  // kernel element: minimality rule
        for (const auto& [k, c] : image.radial()) row_keys.insert(k);
        basis.push_back(key);
        images.push_back(std::move(image));
      }

    const std::vector<PowerLogKey> rows(row_keys.begin(), row_keys.end());
    std::vector<std::vector<Rational>> A(rows.size(), std::vector<Rational>(basis.size()));
    std::vector<Coefficient> b(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto it = target.radial().find(rows[i]);
      if (it != target.radial().end()) b[i] = it->second;
      for (std::size_t j = 0; j < basis.size(); ++j) {
        auto jt = images[j].radial().find(rows[i]);
        if (jt != images[j].radial().end()) A[i][j] = jt->second.rational_value();
      }
    }

    const auto solution = detail::solve_exact(A, b);
    if (!solution) continue;
    PositionFunction seed(n);
    for (std::size_t j = 0; j < basis.size(); ++j) seed.add_radial((*solution)[j], basis[j].power, basis[j].logpow);
    if (!is_fourier_safe(seed)) continue;
    return Representation{op, seed, target};
  }
  throw DomainError("not representable in class within box^" + std::to_string(max_box_power),
                    "not_representable");
}

/// M -> lambda M, carried exactly through ln(lambda).
class MassRatio {
 public:
  static MassRatio from_log(const Coefficient& log_lambda) { return MassRatio(log_lambda); }

  /// Rational lambda is exact only when ln(lambda) lies in the symbol set: lambda = 2^k.
  static MassRatio from_rational(const Rational& lambda) {
    if (lambda <= 0) throw DomainError("mass ratio must be positive");
    Rational x = lambda;
    int k = 0;
    while (x > 1 && is_integer(x) && to_int(x) % 2 == 0) x /= 2, ++k;
    while (x < 1 && is_integer(Rational(1) / x) && to_int(Rational(1) / x) % 2 == 0) x *= 2, --k;
    if (x != 1)
      throw DomainError("ln(" + lambda.str() + ") is outside the exact symbol set", "exact_symbol_set");
    return MassRatio(Coefficient(k) * Coefficient::ln2());
  }

  const Coefficient& log() const { return log_; }
  double value() const { return std::exp(log_.evaluate()); }

 private:
  explicit MassRatio(Coefficient log_lambda) : log_(std::move(log_lambda)) {}
  Coefficient log_;
};

/// f(M) -> f(lambda M) re-expanded in the ln(r^2 M^2) basis, returned as the difference.
inline PositionFunction mass_shift_difference(const PositionFunction& f, const MassRatio& ratio) {
  const Coefficient t = 2 * ratio.log();
  PositionFunction out(f.dim());
  for (const auto& term : f.radial_terms())
    for (int i = 0; i < term.logpow; ++i)
      out.add_radial(Coefficient(binomial(term.logpow, i)) * t.pow(term.logpow - i) * term.coeff, term.rpow, i);
  return out;
}

struct MassShift {
  PositionFunction seed_shift;       ///< g_{lambda M} - g_M
  ApplyResult image;                 ///< L applied to seed_shift
  MomentumFunction momentum_shift;   ///< fourier_formal difference
  bool local_only = false;           ///< image has no radial part
};

inline Representation shifted(const Representation& rep, const MassRatio& ratio) {
  return Representation{rep.op, add(rep.seed, mass_shift_difference(rep.seed, ratio)),
                        add(rep.target, mass_shift_difference(rep.target, ratio))};
}

inline MassShift mass_shift(const Representation& rep, const MassRatio& ratio) {
  MassShift out{mass_shift_difference(rep.seed, ratio), ApplyResult{PositionFunction(rep.dim()), {}},
                MomentumFunction(rep.dim()), false};
  out.image = apply_operator(rep.op, out.seed_shift);
  out.local_only = out.image.function.radial().empty();
  out.momentum_shift = subtract(fourier_formal(shifted(rep, ratio)), fourier_formal(rep));
  return out;
}

}  // namespace difren

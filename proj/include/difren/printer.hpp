#pragma once

#include <string>
#include <vector>

#include "difren/algebra.hpp"
#include "difren/operators.hpp"

namespace difren {

namespace detail {

inline std::string power_text(const Rational& e) {
  return is_integer(e) ? e.str() : "(" + e.str() + ")";
}

/// coefficient * named factors * var^power; emits grammar-valid text.
inline std::string product_text(const Coefficient& c, const std::vector<std::string>& factors,
                                const std::string& var, const Rational& power) {
  std::string lead;
  const bool plain = factors.empty() && power == 0;
  if (c == Coefficient(1)) {
    lead = plain ? "1" : "";
  } else if (c == Coefficient(-1)) {
    lead = plain ? "-1" : "-";
  } else {
    lead = c.to_string();
  }
  std::string body;
  for (const auto& f : factors) body += (body.empty() ? "" : "*") + f;
  std::string out = lead;
  if (!body.empty()) out += (out.empty() || out == "-" ? "" : "*") + body;
  if (power == 0) return out;
  const bool rational_lead = c.is_rational() && !is_integer(c.rational_value());
  if (power < 0 && !(out.empty() || out == "-") && !(body.empty() && rational_lead))
    return out + "/" + var + "^" + power_text(-power);
  return out + (out.empty() || out == "-" ? "" : "*") + var + "^" + power_text(power);
}

inline std::string join_sum(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (!parts[i].empty() && parts[i][0] == '-')
      out += " - " + parts[i].substr(1);
    else
      out += " + " + parts[i];
  }
  return out;
}

inline std::string log_factor(const char* base, int k) {
  if (k == 0) return {};
  return k == 1 ? std::string(base) : std::string(base) + "^" + std::to_string(k);
}

inline std::string box_factor(int j) {
  if (j == 0) return {};
  return j == 1 ? "box" : "box^" + std::to_string(j);
}

}  // namespace detail

inline std::string to_string(const RadialTerm& t) {
  std::vector<std::string> factors;
  if (t.logpow > 0) factors.push_back(detail::log_factor("log(r^2*M^2)", t.logpow));
  return detail::product_text(t.coeff, factors, "r", t.rpow);
}

inline std::string to_string(const LocalTerm& t) {
  std::vector<std::string> factors;
  if (t.boxpow > 0) factors.push_back(detail::box_factor(t.boxpow));
  factors.push_back("delta");
  return detail::product_text(t.coeff, factors, "r", 0);
}

inline std::string to_string(const MomentumTerm& t) {
  std::vector<std::string> factors;
  if (t.logpow > 0) factors.push_back(detail::log_factor("log(p^2/M^2)", t.logpow));
  return detail::product_text(t.coeff, factors, "p", t.ppow);
}

inline std::string to_string(const PositionFunction& f) {
  std::vector<std::string> parts;
  for (const auto& t : f.radial_terms()) parts.push_back(to_string(t));
  for (const auto& t : f.local_terms()) parts.push_back(to_string(t));
  return detail::join_sum(parts);
}

inline std::string to_string(const MomentumFunction& F) {
  std::vector<std::string> parts;
  for (const auto& t : F.momentum_terms()) parts.push_back(to_string(t));
  for (const auto& [j, c] : F.poly()) parts.push_back(detail::product_text(c, {}, "p", 2 * j));
  return detail::join_sum(parts);
}

inline std::string to_string(const DiffOperator& L) {
  std::vector<std::string> parts;
  for (auto it = L.coeffs().rbegin(); it != L.coeffs().rend(); ++it) {
    std::vector<std::string> factors;
    if (it->first > 0) factors.push_back(detail::box_factor(it->first));
    parts.push_back(detail::product_text(it->second, factors, "", 0));
  }
  return detail::join_sum(parts);
}

}  // namespace difren

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "difren/fourier.hpp"
#include "difren/numeric.hpp"
#include "difren/parser.hpp"
#include "difren/printer.hpp"
#include "difren/quotient.hpp"
#include "difren/regulate.hpp"
#include "difren/surface.hpp"

namespace difren::cli {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kConfigEnv = "DIFREN_CONFIG";

enum ExitCode { exit_ok = 0, exit_check_failed = 1, exit_usage = 2, exit_numeric = 3 };

// ---------------------------------------------------------------- serialization

namespace detail {

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void dump(const json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += std::string("{") + nl;
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += std::string(",") + nl;
        first = false;
        out += pad + json(k).dump() + (indent > 0 ? ": " : ":");
        dump(v, out, indent, depth + 1);
      }
      out += nl + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += std::string("[") + nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += std::string(",") + nl;
        out += pad;
        dump(j[i], out, indent, depth + 1);
      }
      out += nl + close + "]";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// JSON text with every floating-point number written to 17 significant digits.
inline std::string dump17(const json& j, int indent = 2) {
  std::string out;
  detail::dump(j, out, indent, 0);
  return out;
}

// ---------------------------------------------------------------- structured terms

inline json terms_json(const PositionFunction& f) {
  json out = json::array();
  for (const auto& t : f.radial_terms())
    out.push_back({{"kind", "radial"}, {"coeff", t.coeff.to_string()}, {"rpow", t.rpow.str()}, {"logpow", t.logpow},
                   {"text", to_string(t)}});
  for (const auto& t : f.local_terms())
    out.push_back({{"kind", "local"}, {"coeff", t.coeff.to_string()}, {"boxpow", t.boxpow}, {"text", to_string(t)}});
  return out;
}

inline json terms_json(const MomentumFunction& F) {
  json out = json::array();
  for (const auto& t : F.momentum_terms())
    out.push_back({{"kind", "momentum"}, {"coeff", t.coeff.to_string()}, {"ppow", t.ppow.str()}, {"logpow", t.logpow},
                   {"text", to_string(t)}});
  return out;
}

inline json terms_json(const DiffOperator& L) {
  json out = json::array();
  for (auto it = L.coeffs().rbegin(); it != L.coeffs().rend(); ++it)
    out.push_back({{"kind", "box"}, {"coeff", it->second.to_string()}, {"boxpow", it->first}});
  return out;
}

inline std::string surface_text(const SurfaceExpansion& se) {
  std::vector<std::string> parts;
  for (const auto& [key, value] : se.entries) {
    std::string factor;
    if (key.power != 0) factor += "eps^" + ::difren::detail::power_text(key.power);
    if (key.logpow > 0) {
      if (!factor.empty()) factor += "*";
      factor += key.logpow == 1 ? "log(eps*M)" : "log(eps*M)^" + std::to_string(key.logpow);
    }
    const std::string v = to_string(value);
    const bool single = value.momentum_terms().size() + value.poly().size() == 1 && v.find(" + ") == std::string::npos &&
                        v.find(" - ") == std::string::npos;
    if (factor.empty())
      parts.push_back(v);
    else
      parts.push_back((single ? v : "(" + v + ")") + "*" + factor);
  }
  return ::difren::detail::join_sum(parts);
}

// ---------------------------------------------------------------- report

struct Report {
  std::string command;
  json inputs = json::object();
  std::string text;
  json terms = json::array();
  json symbolic_extra = json::object();
  json checks = json::array();
  std::vector<std::string> flags;
  json results = json::object();
  std::optional<std::pair<std::string, std::string>> error;

  /// pass iff abs_err <= tol (absolute) or rel_err <= tol (relative), per `relative`.
  bool check(const std::string& name, double expected, double actual, double tol, bool relative) {
    const double abs_err = std::abs(actual - expected);
    const double rel_err = expected != 0.0 ? abs_err / std::abs(expected) : abs_err;
    const bool pass = std::isfinite(actual) && (relative ? rel_err : abs_err) <= tol;
    checks.push_back({{"name", name},
                      {"expected", expected},
                      {"actual", actual},
                      {"abs_err", abs_err},
                      {"rel_err", rel_err},
                      {"tolerance", tol},
                      {"tolerance_kind", relative ? "relative" : "absolute"},
                      {"pass", pass}});
    return pass;
  }

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c["pass"].get<bool>()) return false;
    return true;
  }

  std::string status() const { return !error && all_pass() ? "ok" : "error"; }

  json to_json() const {
    json sym = symbolic_extra;
    sym["text"] = text;
    sym["terms"] = terms;
    json j = {{"command", command},    {"version", kVersion}, {"inputs", inputs}, {"symbolic", sym},
              {"numeric_checks", checks}, {"flags", flags},      {"results", results}, {"status", status()}};
    if (error) j["error"] = {{"code", error->first}, {"message", error->second}};
    return j;
  }

  std::string to_text() const {
    std::ostringstream out;
    if (!text.empty()) out << text << "\n";
    for (const auto& f : flags) out << "flag: " << f << "\n";
    for (const auto& [k, v] : results.items())
      out << k << " = " << (v.is_number_float() ? detail::format_short(v.get<double>()) : dump17(v, 0)) << "\n";
    for (const auto& c : checks)
      out << "check " << c["name"].get<std::string>() << ": actual " << detail::format_short(c["actual"].get<double>())
          << ", expected " << detail::format_short(c["expected"].get<double>()) << ", " << c["tolerance_kind"].get<std::string>()
          << " error " << detail::format_short(c[c["tolerance_kind"] == "relative" ? "rel_err" : "abs_err"].get<double>())
          << " (tol " << detail::format_short(c["tolerance"].get<double>()) << ") " << (c["pass"].get<bool>() ? "pass" : "FAIL")
          << "\n";
    if (error) out << "error [" << error->first << "]: " << error->second << "\n";
    if (!checks.empty() || error) out << "status: " << status() << "\n";
    return out.str();
  }
};

// ---------------------------------------------------------------- settings

/// Defaults, overridden by the config file, overridden by explicit flags.
struct Settings {
  int dim = 4;
  double mass = 1.0;
  std::optional<double> tol;
  int max_box = 4;
  double fd_step = 1e-3;
  double defect_c = 1.0;
  double defect_floor = 1e-3;
  QuadratureConfig quad;
};

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw DomainError("not a number: '" + item + "'", "usage");
  }
  if (out.empty()) throw DomainError("empty list", "usage");
  return out;
}

inline void apply_config_value(Settings& s, const std::string& key, const std::string& value) {
  auto num = [&] {
    const auto v = parse_list(value);
    if (v.size() != 1) throw DomainError("config key '" + key + "' expects one number", "config");
    return v.front();
  };
  if (key == "dim") s.dim = static_cast<int>(num());
  else if (key == "mass") s.mass = num();
  else if (key == "tol") s.tol = num();
  else if (key == "max_box") s.max_box = static_cast<int>(num());
  else if (key == "fd_step") s.fd_step = num();
  else if (key == "defect_c") s.defect_c = num();
  else if (key == "defect_floor") s.defect_floor = num();
  else if (key == "rel_tol") s.quad.rel_tol = num();
  else if (key == "abs_tol") s.quad.abs_tol = num();
  else if (key == "max_depth") s.quad.max_depth = static_cast<int>(num());
  else if (key == "tail_radius_factor") s.quad.tail_radius_factor = num();
  else if (key == "damping") s.quad.damping = parse_list(value);
  else if (key == "tail_agreement") s.quad.tail_agreement = num();
  else if (key == "cross_check_tail") {
    if (value != "true" && value != "false") throw DomainError("cross_check_tail must be true or false", "config");
    s.quad.cross_check_tail = value == "true";
  } else if (key == "tail_method") {
    if (value == "damping") s.quad.tail_method = TailMethod::damping;
    else if (value == "asymptotic") s.quad.tail_method = TailMethod::asymptotic;
    else throw DomainError("tail_method must be damping or asymptotic", "config");
  } else {
    throw DomainError("unknown config key '" + key + "'", "config");
  }
}

/// key = value lines; '#' starts a comment.
inline void load_config(Settings& s, std::istream& in, const std::string& origin) {
  std::string line;
  int lineno = 0;
  auto trim = [](std::string t) {
    const auto b = t.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return t.substr(b, t.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError(origin + ":" + std::to_string(lineno) + ": expected key = value", "config");
    try {
      apply_config_value(s, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const DomainError& e) {
      throw DomainError(origin + ":" + std::to_string(lineno) + ": " + e.what(), "config");
    }
  }
}

inline void load_config_file(Settings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'", "config");
  load_config(s, in, path);
}

// ---------------------------------------------------------------- commands

struct Flags {
  std::optional<int> dim;
  std::optional<double> mass;
  std::optional<double> tol;
  std::optional<std::string> config;
  bool json = false;
  bool text = false;

  std::string op, fn, target, rep_target, a, b, eps_grid;
  std::optional<double> at, eps, p, p0;
  std::optional<int> order, max_box;
};

inline double require_positive(const std::optional<double>& v, const char* name) {
  if (!v) throw DomainError(std::string("missing --") + name, "usage");
  if (!(*v > 0)) throw DomainError(std::string("--") + name + " must be positive", "usage");
  return *v;
}

inline void echo_common(Report& r, const Settings& s) {
  r.inputs["dim"] = s.dim;
  r.inputs["mass"] = s.mass;
  if (s.tol) r.inputs["tol"] = *s.tol;
}

inline void run_apply(Report& r, const Flags& f, const Settings& s) {
  r.inputs["op"] = f.op;
  r.inputs["fn"] = f.fn;
  const auto res = apply_operator(parse_operator(f.op), parse_position(f.fn, s.dim));
  r.text = to_string(res.function);
  r.terms = terms_json(res.function);
  r.flags.assign(res.flags.begin(), res.flags.end());
}

inline void describe_representation(Report& r, const Representation& rep) {
  r.symbolic_extra["operator"] = to_string(rep.op);
  r.symbolic_extra["operator_terms"] = terms_json(rep.op);
  r.symbolic_extra["seed"] = to_string(rep.seed);
}

inline void run_regulate(Report& r, const Flags& f, const Settings& s) {
  r.inputs["target"] = f.target;
  const int max_box = f.max_box.value_or(s.max_box);
  r.inputs["max_box"] = max_box;
  const auto target = parse_position(f.target, s.dim);
  const auto rep = find_representation(target, max_box);
  describe_representation(r, rep);
  r.text = "(" + to_string(rep.op) + ", " + to_string(rep.seed) + ")";
  r.terms = terms_json(rep.seed);
  const auto image = apply_operator(rep.op, rep.seed);
  r.flags.assign(image.flags.begin(), image.flags.end());
  r.symbolic_extra["round_trip_exact"] = image.function.radial_part() == target.radial_part();
}

inline void run_transform(Report& r, const Flags& f, const Settings& s) {
  if (f.fn.empty() == f.rep_target.empty()) throw DomainError("give exactly one of --fn or --rep-target", "usage");
  MomentumFunction F(s.dim);
  std::optional<PositionFunction> direct;
  if (!f.fn.empty()) {
    r.inputs["fn"] = f.fn;
    direct = parse_position(f.fn, s.dim);
    F = fourier_base(*direct);
  } else {
    r.inputs["rep_target"] = f.rep_target;
    const auto rep = find_representation(parse_position(f.rep_target, s.dim), s.max_box);
    describe_representation(r, rep);
    F = fourier_formal(rep);
  }
  r.text = to_string(F);
  r.terms = terms_json(F);
  if (!f.at) return;
  const double p = require_positive(f.at, "at");
  r.inputs["at"] = p;
  const double symbolic = eval_momentum(F, p, s.mass);
  r.results["value"] = symbolic;
  if (direct) {
    const auto num = hankel_numeric(*direct, p, s.mass, s.quad);
    r.results["numeric_error_estimate"] = num.error;
    r.check("hankel_oracle", symbolic, num.value, s.tol.value_or(1e-5), true);
  }
}

struct DefectRow {
  double eps, truncated, formal, surface, defect, bound;
};

inline DefectRow defect_row(const PositionFunction& target, const MomentumFunction& formal,
                            const SurfaceExpansion& se, double p, double eps, const Settings& s) {
  DefectRow row{};
  row.eps = eps;
  row.truncated = truncated_ft_numeric(target, p, s.mass, eps, s.quad).value;
  row.formal = eval_momentum(formal, p, s.mass);
  row.surface = se.evaluate(eps, p, s.mass);
  row.defect = row.truncated - row.formal - row.surface;
  double scale = 0.0;
  if (se.remainder_pow)
    scale = std::pow(eps, to_double(*se.remainder_pow)) * std::pow(std::abs(std::log(eps)), se.remainder_log);
  row.bound = std::max(s.tol.value_or(s.defect_floor), s.defect_c * scale);
  return row;
}

inline json row_json(const DefectRow& d) {
  return {{"eps", d.eps},         {"truncated", d.truncated}, {"formal", d.formal},
          {"surface", d.surface}, {"defect", d.defect},       {"bound", d.bound}};
}

inline void describe_surface(Report& r, const SurfaceExpansion& se) {
  r.text = surface_text(se);
  r.terms = json::array();
  for (const auto& [key, value] : se.entries)
    r.terms.push_back({{"kind", "surface"}, {"eps_pow", key.power.str()}, {"log_pow", key.logpow},
                       {"value", to_string(value)}});
  if (se.remainder_pow)
    r.symbolic_extra["remainder"] = {{"eps_pow", se.remainder_pow->str()}, {"log_pow", se.remainder_log}};
  if (const auto lead = leading_divergence(se))
    r.symbolic_extra["leading_divergence"] = {
        {"eps_pow", lead->eps_pow.str()}, {"log_pow", lead->log_pow}, {"value", to_string(lead->value)}};
  else
    r.symbolic_extra["leading_divergence"] = "finite";
}

inline void run_surface(Report& r, const Flags& f, const Settings& s) {
  r.inputs["target"] = f.target;
  const double eps = require_positive(f.eps, "eps");
  const double p = f.p ? require_positive(f.p, "p") : 1.0;
  r.inputs["eps"] = eps;
  r.inputs["p"] = p;
  if (f.order) r.inputs["order"] = *f.order;
  const auto target = parse_position(f.target, s.dim);
  const auto rep = find_representation(target, s.max_box);
  describe_representation(r, rep);
  const auto se = surface_expansion(rep.op, rep.seed, f.order);
  describe_surface(r, se);
  const auto row = defect_row(target, fourier_formal(rep), se, p, eps, s);
  r.results["defect_row"] = row_json(row);
  r.check("defect_identity", row.formal + row.surface, row.truncated, row.bound, false);
}

inline void run_verify(Report& r, const Flags& f, const Settings& s) {
  r.inputs["target"] = f.target;
  const double p = require_positive(f.p, "p");
  r.inputs["p"] = p;
  r.inputs["eps_grid"] = f.eps_grid;
  const auto grid = parse_list(f.eps_grid);
  for (double e : grid)
    if (!(e > 0)) throw DomainError("epsilon values must be positive", "usage");
  const auto target = parse_position(f.target, s.dim);
  const auto rep = find_representation(target, s.max_box);
  describe_representation(r, rep);
  const auto se = surface_expansion(rep.op, rep.seed);
  describe_surface(r, se);
  const auto formal = fourier_formal(rep);
  json table = json::array();
  std::vector<DefectRow> rows;
  double fitted_c = 0.0;
  for (double eps : grid) {
    rows.push_back(defect_row(target, formal, se, p, eps, s));
    const auto& row = rows.back();
    table.push_back(row_json(row));
    r.check("defect_identity eps=" + detail::format_double(eps), row.formal + row.surface, row.truncated, row.bound,
            false);
    if (se.remainder_pow) {
      const double scale =
          std::pow(eps, to_double(*se.remainder_pow)) * std::pow(std::abs(std::log(eps)), se.remainder_log);
      if (scale > 0) fitted_c = std::max(fitted_c, std::abs(row.defect) / scale);
    }
  }
  r.results["table"] = table;
  r.results["fitted_c"] = fitted_c;
  // Shrinking as eps decreases, whatever order the grid was given in.
  std::vector<DefectRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.eps > y.eps; });
  double violations = 0.0;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (std::abs(sorted[i].defect) >= std::abs(sorted[i - 1].defect)) violations += 1.0;
  r.check("defect_monotone", 0.0, violations, 0.0, false);
}

inline void run_cs(Report& r, const Flags& f, const Settings& s) {
  r.inputs["target"] = f.target;
  const double p = require_positive(f.p, "p");
  r.inputs["p"] = p;
  const auto rep = find_representation(parse_position(f.target, s.dim), s.max_box);
  describe_representation(r, rep);
  const auto F = fourier_formal(rep);
  const auto D = mass_derivative(F);
  r.text = to_string(D);
  r.terms = terms_json(D);
  r.symbolic_extra["transform"] = to_string(F);
  const double symbolic = eval_momentum(D, p, s.mass);
  const double fd =
      finite_diff_lnM([&](double m) { return eval_momentum(F, p, m); }, s.mass, s.fd_step);
  r.results["value"] = symbolic;
  r.check("finite_difference_lnM", symbolic, fd, s.tol.value_or(1e-6), true);
}

inline json transform_json(const TransformValue& t) {
  json j = {{"value", t.value}, {"route", t.route}};
  if (!t.symbolic.empty()) j["symbolic"] = t.symbolic;
  return j;
}

inline void run_audit(Report& r, const Flags& f, const Settings& s) {
  r.inputs["a"] = f.a;
  r.inputs["b"] = f.b;
  const double p0 = f.p0 ? require_positive(f.p0, "p0") : 1.0;
  r.inputs["p0"] = p0;
  const IdealElement elem(parse_position(f.a, s.dim), parse_position(f.b, s.dim));
  const Character ch{s.dim, p0, s.mass};
  const auto audit = diagram_audit(elem, ch, s.quad);
  r.text = to_string(audit.product);
  r.terms = terms_json(audit.product);
  const auto reduced = reduce_mod_ideal(elem, ch);
  if (const auto exact = reduced.exact()) r.symbolic_extra["reduced"] = to_string(*exact);
  json character = {{"value", audit.character.value}};
  if (audit.character.exact) character["exact"] = audit.character.exact->to_string();
  r.results["character"] = character;
  r.results["transform_product"] = transform_json(audit.transform_product);
  r.results["transform_a"] = transform_json(audit.transform_a);
  r.results["difference"] = audit.difference;
  r.results["residual"] = audit.residual;
  const double tol = s.tol.value_or(1e-9);
  const double scale = std::max({1.0, std::abs(audit.transform_product.value),
                                 std::abs(audit.character.value * audit.transform_a.value)});
  r.flags.push_back("residual " + detail::format_double(audit.residual));
  r.flags.push_back(audit.residual <= tol * scale ? "residual within tolerance" : "residual exceeds tolerance");
}

inline void run_oracle(Report& r, const Flags& f, const Settings& s) {
  r.inputs["fn"] = f.fn;
  const double p = require_positive(f.p, "p");
  r.inputs["p"] = p;
  const auto fn = parse_position(f.fn, s.dim);
  NumericResult res;
  if (f.eps) {
    const double eps = require_positive(f.eps, "eps");
    r.inputs["eps"] = eps;
    res = truncated_ft_numeric(fn, p, s.mass, eps, s.quad);
  } else {
    res = hankel_numeric(fn, p, s.mass, s.quad);
  }
  r.text = to_string(fn);
  r.terms = terms_json(fn);
  r.results["value"] = res.value;
  r.results["error_estimate"] = res.error;
  r.results["tail_method"] = to_string(s.quad.tail_method);
}

// ---------------------------------------------------------------- dispatch

inline void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--dim", f.dim, "spacetime dimension n");
  sub->add_option("--mass", f.mass, "renormalization mass M");
  sub->add_option("--tol", f.tol, "tolerance for numeric checks");
  sub->add_option("--config", f.config, "config file (key = value); default from $DIFREN_CONFIG");
  auto* j = sub->add_flag("--json", f.json, "emit a JSON report");
  auto* t = sub->add_flag("--text", f.text, "emit a text report (default)");
  j->excludes(t);
}

inline Settings resolve_settings(const Flags& f) {
  Settings s;
  if (f.config) {
    load_config_file(s, *f.config);
  } else if (const char* env = std::getenv(kConfigEnv); env && *env) {
    load_config_file(s, env);
  }
  if (f.dim) s.dim = *f.dim;
  if (f.mass) s.mass = *f.mass;
  if (f.tol) s.tol = *f.tol;
  if (s.dim < 2) throw DomainError("--dim must be >= 2", "usage");
  if (!(s.mass > 0)) throw DomainError("--mass must be positive", "usage");
  if (s.tol && !(*s.tol >= 0)) throw DomainError("--tol must be non-negative", "usage");
  if (!(s.fd_step > 0)) throw DomainError("fd_step must be positive", "config");
  s.quad.validate();
  return s;
}

/// Runs one command; writes the report to `out` and diagnostics to `err`.
inline int cli_dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularization-by-operator workbench", "difren"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);
  Flags f;

  auto* apply = app.add_subcommand("apply", "apply a polynomial in box to a function");
  apply->add_option("--op", f.op)->required();
  apply->add_option("--fn", f.fn)->required();

  auto* regulate = app.add_subcommand("regulate", "find (L, g) with L g equal to the target");
  regulate->add_option("--target", f.target)->required();
  regulate->add_option("--max-box", f.max_box);

  auto* transform = app.add_subcommand("transform", "exact Fourier transform");
  transform->add_option("--fn", f.fn);
  transform->add_option("--rep-target", f.rep_target);
  transform->add_option("--at", f.at);

  auto* surface = app.add_subcommand("surface", "dropped surface terms and defect check");
  surface->add_option("--target", f.target)->required();
  surface->add_option("--eps", f.eps)->required();
  surface->add_option("--order", f.order);
  surface->add_option("--p", f.p);

  auto* verify = app.add_subcommand("verify", "defect identity over an epsilon grid");
  verify->add_option("--target", f.target)->required();
  verify->add_option("--p", f.p)->required();
  verify->add_option("--eps-grid", f.eps_grid)->required();

  auto* cs = app.add_subcommand("cs", "M d/dM of the regularized transform");
  cs->add_option("--target", f.target)->required();
  cs->add_option("--p", f.p)->required();

  auto* audit = app.add_subcommand("audit", "quotient diagram audit");
  audit->add_option("--a", f.a)->required();
  audit->add_option("--b", f.b)->required();
  audit->add_option("--p0", f.p0);

  auto* oracle = app.add_subcommand("oracle", "numeric transform only");
  oracle->add_option("--fn", f.fn)->required();
  oracle->add_option("--p", f.p)->required();
  oracle->add_option("--eps", f.eps);

  for (auto* sub : {apply, regulate, transform, surface, verify, cs, audit, oracle}) add_common(sub, f);

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();  // program name
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    if (std::find(argv.begin(), argv.end(), "--json") != argv.end()) {
      Report r;
      for (auto* sub : app.get_subcommands({})) if (sub->parsed()) r.command = sub->get_name();
      if (r.command.empty() && argv.size() > 1) r.command = argv[1];
      r.error = {"usage", e.what()};
      out << dump17(r.to_json()) << "\n";
    }
    return exit_usage;
  }

  Report r;
  r.command = app.get_subcommands().front()->get_name();
  int code = exit_ok;
  try {
    const Settings s = resolve_settings(f);
    echo_common(r, s);
    if (r.command == "apply") run_apply(r, f, s);
    else if (r.command == "regulate") run_regulate(r, f, s);
    else if (r.command == "transform") run_transform(r, f, s);
    else if (r.command == "surface") run_surface(r, f, s);
    else if (r.command == "verify") run_verify(r, f, s);
    else if (r.command == "cs") run_cs(r, f, s);
    else if (r.command == "audit") run_audit(r, f, s);
    else if (r.command == "oracle") run_oracle(r, f, s);
    if (!r.all_pass()) code = exit_check_failed;
  } catch (const NumericError& e) {
    r.error = {e.code(), e.what()};
    r.results["partial"] = e.partial();
    code = exit_numeric;
  } catch (const Error& e) {
    r.error = {e.code(), e.what()};
    code = exit_usage;
  }
  if (f.json) {
    out << dump17(r.to_json()) << "\n";
  } else {
    out << r.to_text();
  }
  if (r.error && f.json) err << "error [" << r.error->first << "]: " << r.error->second << "\n";
  return code;
}

inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  return cli_dispatch(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace difren::cli

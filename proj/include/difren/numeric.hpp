#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "difren/algebra.hpp"
#include "difren/errors.hpp"
#include "difren/special.hpp"

namespace difren {

enum class TailMethod { damping, asymptotic };

inline const char* to_string(TailMethod m) { return m == TailMethod::damping ? "damping" : "asymptotic"; }

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_depth = 40;
  /// Tail starts at R = tail_radius_factor / p (or tail_radius_factor when p = 0).
  double tail_radius_factor = 200.0;
  TailMethod tail_method = TailMethod::damping;
  /// Damping strengths in units of p: the tail is weighted by exp(-delta p (r - R)).
  std::vector<double> damping{0.02, 0.01, 0.005};
  /// When both tail methods apply, they must agree to this relative tolerance.
  bool cross_check_tail = false;
  double tail_agreement = 1e-6;

  void validate() const {
    if (!(rel_tol > 0)) throw DomainError("relTol must be positive", "config");
    if (!(abs_tol >= 0)) throw DomainError("absTol must be non-negative", "config");
    if (max_depth < 1) throw DomainError("maxDepth must be >= 1", "config");
    if (!(tail_radius_factor > 0)) throw DomainError("tail radius must be positive", "config");
    if (damping.empty()) throw DomainError("damping list must be non-empty", "config");
    for (std::size_t i = 0; i < damping.size(); ++i) {
      if (!(damping[i] > 0)) throw DomainError("damping values must be positive", "config");
      if (i > 0 && !(damping[i] < damping[i - 1]))
        throw DomainError("damping list must be strictly decreasing", "config");
    }
  }
};

struct NumericResult {
  double value = 0.0;
  double error = 0.0;
};

/// A radial profile for the oracle: either an exact power-log function or a smooth closed form.
struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  /// Exact terms, when known; enables the asymptotic tail and origin analysis.
  std::optional<PositionFunction> terms;
  double mass = 1.0;
  /// Decays faster than any power: the tail beyond R is neglected.
  bool rapid_decay = false;
  std::string name;

  static RadialProfile of(const PositionFunction& f, double mass);
  /// exp(-r^2)
  static RadialProfile gaussian();
  /// box exp(-r^2) = (4 r^2 - 2n) exp(-r^2) in n dimensions.
  static RadialProfile gaussian_laplacian(int n);
};

/// d/dr of a radial power-log function.
inline PositionFunction radial_derivative(const PositionFunction& f) {
  if (f.has_local()) throw DomainError("cannot differentiate local terms pointwise", "local_terms");
  PositionFunction out(f.dim());
  for (const auto& t : f.radial_terms()) {
    out.add_radial(t.coeff * Coefficient(t.rpow), t.rpow - 1, t.logpow);
    if (t.logpow > 0) out.add_radial(t.coeff * Coefficient(2 * t.logpow), t.rpow - 1, t.logpow - 1);
  }
  return out;
}

inline RadialProfile RadialProfile::of(const PositionFunction& f, double mass) {
  if (f.has_local()) throw DomainError("numeric oracle requires a radial-only function", "local_terms");
  RadialProfile prof;
  const PositionFunction df = radial_derivative(f);
  prof.value = [f, mass](double r) { return eval_position(f, r, mass); };
  prof.derivative = [df, mass](double r) { return eval_position(df, r, mass); };
  prof.terms = f;
  prof.mass = mass;
  return prof;
}

inline RadialProfile RadialProfile::gaussian() {
  RadialProfile prof;
  prof.value = [](double r) { return std::exp(-r * r); };
  prof.derivative = [](double r) { return -2.0 * r * std::exp(-r * r); };
  prof.rapid_decay = true;
  prof.name = "exp(-r^2)";
  return prof;
}

inline RadialProfile RadialProfile::gaussian_laplacian(int n) {
  RadialProfile prof;
  prof.value = [n](double r) { return (4.0 * r * r - 2.0 * n) * std::exp(-r * r); };
  prof.derivative = [n](double r) {
    return (8.0 * r - 2.0 * r * (4.0 * r * r - 2.0 * n)) * std::exp(-r * r);
  };
  prof.rapid_decay = true;
  prof.name = "box exp(-r^2)";
  return prof;
}

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelSum {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

template <class F>
void gk15(const F& f, double a, double b, double& kronrod, double& gauss, double& abs_kronrod) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  kronrod = fc * kWgk[7];
  gauss = fc * kWg[3];
  abs_kronrod = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[static_cast<std::size_t>(j)];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kronrod += kWgk[static_cast<std::size_t>(j)] * (f1 + f2);
    abs_kronrod += kWgk[static_cast<std::size_t>(j)] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
  }
  kronrod *= h;
  gauss *= h;
  abs_kronrod *= std::abs(h);
}

/// Recursive bisection with a fixed traversal order, so results are bit-reproducible.
template <class F>
void adaptive(const F& f, double a, double b, const QuadratureConfig& cfg, int depth, PanelSum& acc) {
  double k = 0, g = 0, ak = 0;
  gk15(f, a, b, k, g, ak);
  const double err = std::abs(k - g);
  if (err <= std::max(cfg.abs_tol, cfg.rel_tol * ak) || !std::isfinite(k)) {
    acc.value += k;
    acc.error += err;
    if (!std::isfinite(k)) acc.converged = false;
    return;
  }
  if (depth >= cfg.max_depth) {
    acc.value += k;
    acc.error += err;
    acc.converged = false;
    return;
  }
  const double m = 0.5 * (a + b);
  adaptive(f, a, m, cfg, depth + 1, acc);
  adaptive(f, m, b, cfg, depth + 1, acc);
}

/// Polynomial extrapolation of (x_i, y_i) to x = 0 (Neville). Returns value and the
/// difference to the extrapolant that omits the last point.
inline NumericResult extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y) {
  auto neville = [&](std::size_t count) {
    std::vector<double> t(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(count));
    for (std::size_t m = 1; m < count; ++m)
      for (std::size_t i = 0; i + m < count; ++i)
        t[i] = (x[i + m] * t[i] - x[i] * t[i + 1]) / (x[i + m] - x[i]);
    return t[0];
  };
  const double full = neville(x.size());
  const double reduced = x.size() > 1 ? neville(x.size() - 1) : full;
  return {full, std::abs(full - reduced)};
}

/// Coefficients c_q of sum_q c_q r^s ln^q(r^2 M^2); differentiate in r (s drops by one).
inline void differentiate_power_log(std::vector<std::complex<double>>& c, double& s) {
  std::vector<std::complex<double>> out(c.size());
  for (std::size_t q = 0; q < c.size(); ++q) {
    out[q] += c[q] * s;
    if (q + 1 < c.size()) out[q] += c[q + 1] * (2.0 * static_cast<double>(q + 1));
  }
  c = std::move(out);
  s -= 1.0;
}

inline std::complex<double> eval_power_log(const std::vector<std::complex<double>>& c, double s, double r,
                                           double mass) {
  const double ell = std::log(r * r * mass * mass);
  std::complex<double> sum = 0.0;
  double lp = 1.0;
  for (const auto& cq : c) {
    sum += cq * lp;
    lp *= ell;
  }
  return sum * std::pow(r, s);
}

/// int_R^inf r^s ln^k(r^2 M^2) e^{ipr} dr by the integration-by-parts asymptotic series.
inline std::complex<double> oscillatory_tail(std::vector<std::complex<double>> c, double s, double R, double p,
                                             double mass, double& err) {
  const std::complex<double> ip(0.0, p);
  std::complex<double> sum = 0.0;
  std::complex<double> denom = ip;
  double prev = INFINITY;
  err = 0.0;
  for (int j = 0; j < 60; ++j) {
    const std::complex<double> term = eval_power_log(c, s, R, mass) / denom * (j % 2 == 0 ? 1.0 : -1.0);
    const double mag = std::abs(term);
    if (j > 2 && mag > prev) break;
    sum += term;
    err = mag;
    prev = mag;
    if (mag <= 1e-17 * std::abs(sum)) break;
    differentiate_power_log(c, s);
    denom *= ip;
  }
  return -std::exp(ip * R) * sum;
}

}  // namespace detail

/// Omega_{n-1} int_lo^inf f(r) A_n(pr) r^{n-1} dr. Shared engine of the transform oracles.
class HankelIntegrator {
 public:
  HankelIntegrator(const RadialProfile& f, double p, int n, QuadratureConfig cfg)
      : f_(f), p_(p), n_(n), cfg_(std::move(cfg)), omega_(sphere_area_numeric(n)) {
    cfg_.validate();
    if (!(p >= 0)) throw DomainError("momentum must be non-negative");
  }

  NumericResult integrate(double lo) const {
    const double half_period = p_ > 0 ? numeric_constants::pi / p_ : 1.0;
    const double R = lo + (p_ > 0 ? cfg_.tail_radius_factor / p_ : cfg_.tail_radius_factor);
    detail::PanelSum acc;

    auto h = [this](double r) { return integrand(r); };

    // First panel, with a power substitution at a singular origin.
    const double first_end = std::min(lo + half_period, R);
    if (lo == 0.0) {
      const double s = origin_exponent() + n_ - 1;
      const double gamma = s < 1.0 ? 2.0 / (s + 1.0) : 1.0;
      auto sub = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double r = first_end * std::pow(t, gamma);
        return integrand(r) * first_end * gamma * std::pow(t, gamma - 1.0);
      };
      detail::adaptive(sub, 0.0, 1.0, cfg_, 0, acc);
    } else {
      double a = lo;
      while (a * 2.0 < first_end && a < 0.25 * half_period) {
        detail::adaptive(h, a, 2.0 * a, cfg_, 0, acc);
        a *= 2.0;
      }
      detail::adaptive(h, a, first_end, cfg_, 0, acc);
    }
    for (double a = first_end; a < R;) {
      const double b = std::min(a + half_period, R);
      detail::adaptive(h, a, b, cfg_, 0, acc);
      a = b;
    }
    if (!acc.converged)
      throw NumericError("adaptive quadrature did not converge within maxDepth " + std::to_string(cfg_.max_depth),
                         acc.value);

    NumericResult tail = this->tail(R, half_period);
    return {acc.value + tail.value, acc.error + tail.error};
  }

 private:
  double integrand(double r) const {
    return omega_ * f_.value(r) * angular_kernel(n_, p_ * r) * std::pow(r, n_ - 1);
  }

  double origin_exponent() const {
    if (!f_.terms) return 0.0;
    double s = INFINITY;
    for (const auto& [key, c] : f_.terms->radial()) s = std::min(s, to_double(key.power));
    return std::isfinite(s) ? s : 0.0;
  }

  NumericResult tail(double R, double half_period) const {
    if (f_.rapid_decay) return {};
    if (p_ == 0.0) throw DomainError("p = 0 requires a rapidly decaying profile");
    const bool have_terms = f_.terms.has_value();
    if (cfg_.tail_method == TailMethod::asymptotic) {
      if (!have_terms) throw DomainError("asymptotic tail needs an exact power-log profile", "config");
      return asymptotic_tail(R);
    }
    NumericResult damped = damping_tail(R, half_period);
    if (cfg_.cross_check_tail && have_terms) {
      const NumericResult asym = asymptotic_tail(R);
      const double scale = std::max(std::abs(asym.value), 1.0);
      if (std::abs(asym.value - damped.value) > cfg_.tail_agreement * scale + damped.error + asym.error)
        throw NumericError("tail regulators disagree: damping " + std::to_string(damped.value) + " vs asymptotic " +
                               std::to_string(asym.value),
                           damped.value);
    }
    return damped;
  }

  NumericResult damping_tail(double R, double half_period) const {
    std::vector<double> xs, ys;
    double quad_err = 0.0;
    for (double delta : cfg_.damping) {
      const double rate = delta * p_;
      const double end = R + 41.5 / rate;  // exp(-41.5) ~ 1e-18
      auto hd = [&](double r) { return integrand(r) * std::exp(-rate * (r - R)); };
      detail::PanelSum acc;
      for (double a = R; a < end;) {
        const double b = std::min(a + half_period, end);
        detail::adaptive(hd, a, b, cfg_, 0, acc);
        a = b;
      }
      if (!acc.converged) throw NumericError("damped tail quadrature did not converge", acc.value);
      xs.push_back(delta);
      ys.push_back(acc.value);
      quad_err += acc.error;
    }
    NumericResult r = detail::extrapolate_to_zero(xs, ys);
    r.error += quad_err;
    return r;
  }

  /// Hankel expansion of J_nu times the exact power-log terms, integrated term by term.
  NumericResult asymptotic_tail(double R) const {
    const double nu = 0.5 * n_ - 1.0;
    const double phase = 0.5 * nu * numeric_constants::pi + 0.25 * numeric_constants::pi;
    const double prefactor = omega_ * std::tgamma(0.5 * n_) * std::pow(2.0 / p_, nu) *
                             std::sqrt(2.0 / (numeric_constants::pi * p_));
    const std::complex<double> rot = std::exp(std::complex<double>(0.0, -phase));
    std::complex<double> total = 0.0;
    double err = 0.0;
    for (const auto& [key, c] : f_.terms->radial()) {
      const double coeff = c.evaluate();
      std::complex<double> im = 1.0;  // i^m
      double prev = INFINITY;
      for (int m = 0; m < 60; ++m) {
        const double am = hankel_coefficient(nu, m) / std::pow(p_, m);
        const double size = std::abs(am) * std::pow(R, -m);
        if (m > 0 && (size == 0.0 || size > prev)) break;
        prev = size;
        std::vector<std::complex<double>> cq(static_cast<std::size_t>(key.logpow) + 1, 0.0);
        cq.back() = coeff * prefactor * am * im;
        const double s = to_double(key.power) + n_ - 1 - nu - 0.5 - m;
        double term_err = 0.0;
        total += rot * detail::oscillatory_tail(cq, s, R, p_, f_.mass, term_err);
        err += term_err;
        im *= std::complex<double>(0.0, 1.0);
        if (size < 1e-18) break;
      }
    }
    return {total.real(), err};
  }

  const RadialProfile& f_;
  double p_;
  int n_;
  QuadratureConfig cfg_;
  double omega_;
};

/// Full-space transform of an integrable radial profile.
inline NumericResult hankel_numeric(const RadialProfile& f, double p, int n, const QuadratureConfig& cfg = {}) {
  if (f.terms) {
    for (const auto& [key, c] : f.terms->radial())
      if (key.power <= -n)
        throw DomainError("integrand is not integrable at the origin (exponent <= -n); use the truncated transform",
                          "non_integrable");
  }
  return HankelIntegrator(f, p, n, cfg).integrate(0.0);
}

inline NumericResult hankel_numeric(const PositionFunction& f, double p, double mass, const QuadratureConfig& cfg = {}) {
  return hankel_numeric(RadialProfile::of(f, mass), p, f.dim(), cfg);
}

/// Transform restricted to |x| > epsilon.
inline NumericResult truncated_ft_numeric(const RadialProfile& f, double p, int n, double epsilon,
                                          const QuadratureConfig& cfg = {}) {
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  return HankelIntegrator(f, p, n, cfg).integrate(epsilon);
}

inline NumericResult truncated_ft_numeric(const PositionFunction& f, double p, double mass, double epsilon,
                                          const QuadratureConfig& cfg = {}) {
  return truncated_ft_numeric(RadialProfile::of(f, mass), p, f.dim(), epsilon, cfg);
}

/// Radial flux of grad f through the sphere |x| = radius.
inline double gauss_flux_numeric(const RadialProfile& f, double radius, int n) {
  if (!(radius > 0)) throw DomainError("radius must be positive");
  return sphere_area_numeric(n) * std::pow(radius, n - 1) * f.derivative(radius);
}

inline double gauss_flux_numeric(const PositionFunction& f, double radius, double mass = 1.0) {
  return gauss_flux_numeric(RadialProfile::of(f, mass), radius, f.dim());
}

/// Central difference in ln M, i.e. an estimate of M dF/dM.
inline double finite_diff_lnM(const std::function<double(double)>& pipeline, double mass, double h) {
  if (!(h > 0)) throw DomainError("step must be positive");
  return (pipeline(mass * std::exp(h)) - pipeline(mass * std::exp(-h))) / (2.0 * h);
}

}  // namespace difren

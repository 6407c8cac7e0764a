#include <gtest/gtest.h>

#include "difren/fourier.hpp"
#include "difren/numeric.hpp"
#include "difren/parser.hpp"
#include "difren/regulate.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace difren;

TEST(Fourier, InverseSquareInFourDimensions) {
  const auto F = fourier_base(PositionFunction::term(4, 1, -2));
  EXPECT_EQ(F, MomentumFunction::term(4, 4 * Coefficient::pi(2), -2));
  EXPECT_EQ(to_string(F), "4*pi^2/p^2");
}

TEST(Fourier, InverseSquareTimesLog) {
  const auto F = fourier_base(PositionFunction::term(4, 1, -2, 1));
  // -(4 pi^2 / p^2) [log(p^2/M^2) + 2 gammaE - 2 ln2]
  MomentumFunction expected(4);
  expected.add_term(-4 * Coefficient::pi(2), -2, 1);
  expected.add_term(-8 * Coefficient::pi(2) * (Coefficient::gamma_e() - Coefficient::ln2()), -2, 0);
  EXPECT_EQ(F, expected);
}

TEST(Fourier, LocalTerms) {
  auto f = PositionFunction::delta(4, 3);
  f.add_local(2, 1);
  MomentumFunction expected(4);
  expected.add_poly(3, 0);
  expected.add_poly(-2, 1);
  EXPECT_EQ(fourier_base(f), expected);
}

// Every integer exponent in the window, k <= 2, against derivatives of the Gamma-function
// closed form taken numerically.
TEST(Fourier, MasterFormulaAgainstGammaDerivatives) {
  for (int n : {2, 3, 4, 5, 6}) {
    for (int a = 1 - n; a <= -1; ++a) {
      for (int k = 0; k <= 2; ++k) {
        const auto F = fourier_base(PositionFunction::term(n, 1, a, k));
        for (double p : {0.5, 1.0, 3.0}) {
          const double mass = 1.7;
          const double expected = oracle::power_log_ft(a, k, p, mass, n);
          const double scale = std::abs(expected) + 10 * std::abs(oracle::power_log_ft(a, 0, p, mass, n));
          EXPECT_NEAR(eval_momentum(F, p, mass), expected, 1e-7 * scale)
              << "n=" << n << " a=" << a << " k=" << k << " p=" << p;
        }
      }
    }
  }
}

// Closed form against the quadrature oracle, including non-integer exponents.
TEST(Fourier, ClosedFormAgainstQuadrature) {
  QuadratureConfig cfg;
  cfg.tail_method = TailMethod::asymptotic;
  for (double aprime : {0.6, 1.0, 1.4}) {
    for (double p : {0.5, 1.0, 2.0}) {
      const auto f = PositionFunction::term(4, 1, Rational(static_cast<int>(std::lround(-20 * aprime)), 10));
      const double expected = oracle::power_ft(-aprime, p, 1.0, 4);
      const auto num = hankel_numeric(f, p, 1.0, cfg);
      EXPECT_NEAR(num.value, expected, 1e-6 * std::abs(expected)) << aprime << " " << p;
      const auto damped = hankel_numeric(f, p, 1.0);
      EXPECT_NEAR(damped.value, expected, 1e-5 * std::abs(expected)) << aprime << " " << p;
    }
  }
}

TEST(Fourier, CubicLogAgainstQuadrature) {
  QuadratureConfig cfg;
  cfg.tail_method = TailMethod::asymptotic;
  const auto f = PositionFunction::term(4, 1, -2, 3);
  const auto F = fourier_base(f);
  for (double p : {0.5, 2.0}) {
    const double expected = eval_momentum(F, p, 1.0);
    EXPECT_NEAR(hankel_numeric(f, p, 1.0, cfg).value, expected, 1e-6 * std::abs(expected)) << p;
  }
}

TEST(Fourier, RejectsOutsideWindowAndSymbolSet) {
  auto code_of = [](const PositionFunction& f) {
    try {
      (void)fourier_base(f);
    } catch (const DomainError& e) {
      return e.code();
    }
    return std::string("none");
  };
  EXPECT_EQ(code_of(PositionFunction::term(4, 1, -4)), "not_fourier_safe");
  EXPECT_EQ(code_of(PositionFunction::term(4, 1, 0)), "not_fourier_safe");
  EXPECT_EQ(code_of(PositionFunction::term(4, 1, -2, 4)), "exact_symbol_set");
  EXPECT_EQ(code_of(PositionFunction::term(4, 1, Rational(-3, 2))), "exact_symbol_set");
  EXPECT_FALSE(is_fourier_safe(PositionFunction::term(4, 1, -2, 4)));
  EXPECT_TRUE(is_fourier_safe(PositionFunction::term(4, 1, Rational(-3, 2))));
}

TEST(Fourier, InverseRoundTrip) {
  auto g = oracle::rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    auto f = gen::fourier_safe(g, n, 3, 3);
    if (trial % 4 == 0) f.add_local(gen::small_coefficient(g), trial % 3);
    EXPECT_EQ(inverse_fourier_base(fourier_base(f)), f) << to_string(f);
  }
}

TEST(Fourier, CsCommutesWithTransform) {
  auto g = oracle::rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = gen::fourier_safe(g, 4, 3, 3);
    EXPECT_EQ(fourier_base(cs_derivative(f)), cs_derivative(fourier_base(f)));
    EXPECT_EQ(mass_derivative(fourier_base(f)), scale(2, cs_derivative(fourier_base(f))));
  }
}

TEST(Fourier, CsDerivativeSigns) {
  EXPECT_EQ(cs_derivative(MomentumFunction::term(4, 1, -2, 2)), MomentumFunction::term(4, -2, -2, 1));
  EXPECT_EQ(cs_derivative(PositionFunction::term(4, 1, -2, 2)), PositionFunction::term(4, 2, -2, 1));
  EXPECT_TRUE(cs_derivative(MomentumFunction::term(4, 1, -2, 0)).is_zero());
}

TEST(Fourier, RegularizedPointMassDerivative) {
  const auto rep = find_representation(parse_position("r^-4", 4));
  const auto F = fourier_formal(rep);
  EXPECT_EQ(to_string(F), "-pi^2*log(p^2/M^2) + (2*pi^2*ln2 - 2*pi^2*gammaE)");
  EXPECT_EQ(mass_derivative(F), MomentumFunction::constant(4, 2 * Coefficient::pi(2)));
  // numerically: M dF/dM by central differences
  const double fd = finite_diff_lnM([&](double m) { return eval_momentum(F, 1.0, m); }, 1.0, 1e-3);
  EXPECT_NEAR(fd, 2 * M_PI * M_PI, 1e-9);
}

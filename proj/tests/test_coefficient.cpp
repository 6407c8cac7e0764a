#include <gtest/gtest.h>

#include <random>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "difren/special.hpp"
#include "oracles.hpp"

using namespace difren;

namespace {

Coefficient random_coefficient(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 6), e0(-2, 3), e(0, 2), count(0, 3);
  Coefficient c;
  for (int i = count(gen); i > 0; --i)
    c += Coefficient::monomial(Rational(num(gen), den(gen)), {e0(gen), e(gen), e(gen), e(gen)});
  return c;
}

}  // namespace

TEST(Coefficient, ZeroIsEmptyAndCancels) {
  const Coefficient a = Coefficient::pi(2) * Rational(3, 4) + Coefficient::gamma_e();
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(Coefficient(0), Coefficient());
  EXPECT_EQ((a - a).to_string(), "0");
}

TEST(Coefficient, ProductCollectsExponents) {
  const Coefficient c = (Coefficient::pi() + Coefficient::ln2()) * (Coefficient::pi() - Coefficient::ln2());
  EXPECT_EQ(c, Coefficient::pi(2) - Coefficient::ln2() * Coefficient::ln2());
}

TEST(Coefficient, InverseOnlyForPiMonomials) {
  const Coefficient c = Coefficient::monomial(Rational(-3, 2), {2, 0, 0, 0});
  EXPECT_EQ(c * c.inverse(), Coefficient(1));
  EXPECT_EQ(c.pow(-2), Coefficient::monomial(Rational(4, 9), {-4, 0, 0, 0}));
  EXPECT_THROW((void)Coefficient::gamma_e().inverse(), DomainError);
  EXPECT_THROW((void)(Coefficient::pi() + 1).inverse(), DomainError);
  EXPECT_THROW((void)Coefficient::monomial(1, {0, -1, 0, 0}), DomainError);
}

TEST(Coefficient, Printing) {
  EXPECT_EQ(Coefficient(Rational(-1, 4)).to_string(), "-1/4");
  EXPECT_EQ(Coefficient::monomial(2, {2, 0, 0, 0}).to_string(), "2*pi^2");
  EXPECT_EQ((Coefficient::monomial(-1, {2, 1, 0, 0})).to_string(), "-pi^2*gammaE");
  EXPECT_EQ((2 * Coefficient::pi(2) * Coefficient::ln2() - 2 * Coefficient::pi(2) * Coefficient::gamma_e()).to_string(),
            "(2*pi^2*ln2 - 2*pi^2*gammaE)");
}

// Evaluation is a ring homomorphism to double.
TEST(Coefficient, EvaluationHomomorphism) {
  auto gen = oracle::rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const Coefficient a = random_coefficient(gen), b = random_coefficient(gen);
    const double va = a.evaluate(), vb = b.evaluate();
    const double scale = 1.0 + std::abs(va) + std::abs(vb) + std::abs(va * vb);
    EXPECT_NEAR((a + b).evaluate(), va + vb, 1e-14 * scale);
    EXPECT_NEAR((a * b).evaluate(), va * vb, 1e-14 * scale);
  }
}

TEST(Coefficient, RingAxioms) {
  auto gen = oracle::rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const Coefficient a = random_coefficient(gen), b = random_coefficient(gen), c = random_coefficient(gen);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(Special, ExactGammaMatchesBoost) {
  for (int twice = 1; twice <= 21; ++twice) {
    const Rational x(twice, 2);
    const ExactGamma g = exact_gamma(x);
    const double value = to_double(g.rational) * std::pow(M_PI, g.half_pi_power / 2.0);
    EXPECT_NEAR(value / boost::math::tgamma(twice / 2.0), 1.0, 1e-14) << x;
  }
  EXPECT_THROW((void)exact_gamma(Rational(1, 3)), DomainError);
  EXPECT_THROW((void)exact_gamma(0), DomainError);
}

TEST(Special, PolygammaMatchesBoost) {
  for (int twice = 1; twice <= 15; ++twice) {
    const double x = twice / 2.0;
    EXPECT_NEAR(exact_digamma(Rational(twice, 2)).evaluate(), boost::math::digamma(x), 1e-13) << x;
    EXPECT_NEAR(exact_trigamma(Rational(twice, 2)).evaluate(), boost::math::trigamma(x), 1e-13) << x;
    EXPECT_NEAR(exact_tetragamma(Rational(twice, 2)).evaluate(), boost::math::polygamma(2, x), 1e-12) << x;
  }
}

TEST(Special, SphereArea) {
  EXPECT_EQ(sphere_area(2), 2 * Coefficient::pi());
  EXPECT_EQ(sphere_area(3), 4 * Coefficient::pi());
  EXPECT_EQ(sphere_area(4), 2 * Coefficient::pi(2));
  EXPECT_EQ(sphere_area(1), Coefficient(2));
  for (int n = 1; n <= 11; ++n) {
    EXPECT_NEAR(sphere_area(n).evaluate(), oracle::sphere_area(n), 1e-12 * oracle::sphere_area(n));
    EXPECT_NEAR(sphere_area_numeric(n), oracle::sphere_area(n), 1e-12 * oracle::sphere_area(n));
  }
}

TEST(Special, BesselAcrossCrossover) {
  for (double nu : {0.0, 0.5, 1.0, 2.0, 3.5}) {
    for (double z : {0.0, 0.3, 2.0, 7.5, 11.9, 12.0, 12.1, 30.0, 250.0, 4000.0}) {
      const double ref = boost::math::cyl_bessel_j(nu, z);
      EXPECT_NEAR(bessel_j(nu, z), ref, 1e-9 * std::max(1.0, 1.0 / std::sqrt(std::max(z, 1.0)))) << nu << " " << z;
    }
  }
  EXPECT_THROW((void)bessel_j(-1.0, 1.0), DomainError);
}

TEST(Special, AngularKernelIsNormalizedBessel) {
  for (int n : {2, 3, 4, 6}) {
    EXPECT_DOUBLE_EQ(angular_kernel(n, 0.0), 1.0);
    const double nu = n / 2.0 - 1.0;
    for (double z : {0.5, 3.0, 11.0, 13.0, 60.0}) {
      const double ref = boost::math::tgamma(n / 2.0) * std::pow(2.0 / z, nu) * boost::math::cyl_bessel_j(nu, z);
      EXPECT_NEAR(angular_kernel(n, z), ref, 1e-9) << n << " " << z;
    }
  }
  // n = 3: sin z / z
  EXPECT_NEAR(angular_kernel(3, 5.0), std::sin(5.0) / 5.0, 1e-13);
}

#include <gtest/gtest.h>

#include "difren/parser.hpp"
#include "difren/quotient.hpp"

using namespace difren;

TEST(Character, ExactAtPowerOfTwoMomentum) {
  const auto b = parse_position("r^-2", 4);
  const auto v = character_eval(b, Character{4, 1.0, 1.0});
  ASSERT_TRUE(v.exact);
  EXPECT_EQ(*v.exact, 4 * Coefficient::pi(2));
  EXPECT_NEAR(v.value, 4 * M_PI * M_PI, 1e-12);

  const auto logged = character_eval(parse_position("log(r^2*M^2)/r^2", 4), Character{4, 2.0, 1.0});
  ASSERT_TRUE(logged.exact);
  EXPECT_NEAR(logged.exact->evaluate(), logged.value, 1e-12);
  EXPECT_FALSE(character_eval(parse_position("log(r^2*M^2)/r^2", 4), Character{4, 3.0, 1.0}).exact);
}

TEST(Character, RequiresFourierSafe) {
  EXPECT_THROW((void)character_eval(parse_position("r^-4", 4), Character{}), DomainError);
  EXPECT_THROW(IdealElement(parse_position("r^-2", 4), parse_position("r^-4", 4)), DomainError);
}

TEST(Reduce, ScalarTimesFactor) {
  const IdealElement elem(parse_position("r^-1", 4), parse_position("r^-2", 4));
  const auto red = reduce_mod_ideal(elem, Character{});
  ASSERT_TRUE(red.exact());
  EXPECT_EQ(*red.exact(), PositionFunction::term(4, 4 * Coefficient::pi(2), -1));
}

TEST(Audit, ZeroFactorHasZeroResidual) {
  const IdealElement elem(PositionFunction(4), parse_position("r^-2", 4));
  const auto rep = diagram_audit(elem, Character{});
  EXPECT_EQ(rep.residual, 0.0);
  EXPECT_EQ(rep.transform_product.route, "zero");
}

TEST(Audit, PhiFourPair) {
  const IdealElement elem(parse_position("r^-2", 4), parse_position("r^-2", 4));
  const auto rep = diagram_audit(elem, Character{});
  EXPECT_EQ(rep.product, PositionFunction::term(4, 1, -4));
  EXPECT_EQ(rep.transform_product.route, "regularized");
  EXPECT_EQ(rep.transform_a.route, "exact");
  const double formal = -M_PI * M_PI * (2 * 0.57721566490153286 - 2 * std::log(2.0));
  EXPECT_NEAR(rep.transform_product.value, formal, 1e-12);
  EXPECT_NEAR(rep.difference, formal - 16 * std::pow(M_PI, 4), 1e-9);
  EXPECT_NEAR(rep.residual, std::abs(rep.difference), 0.0);
}

TEST(Audit, NumericRouteForInexactSymbols) {
  const IdealElement elem(parse_position("r^-1/2", 4), parse_position("r^-1", 4));
  const auto rep = diagram_audit(elem, Character{4, 1.0, 1.0});
  EXPECT_EQ(rep.transform_product.route, "numeric");
  EXPECT_TRUE(std::isfinite(rep.residual));
}

TEST(Audit, ScalarBilinearity) {
  const auto a = parse_position("r^-1", 4), b = parse_position("r^-2 + 3*r^-1", 4);
  const auto base = diagram_audit(IdealElement(a, b), Character{});
  for (int s : {-3, 2, 5}) {
    const auto left = diagram_audit(IdealElement(scale(s, a), b), Character{});
    const auto right = diagram_audit(IdealElement(a, scale(s, b)), Character{});
    EXPECT_NEAR(left.difference, s * base.difference, 1e-9 * std::max(1.0, std::abs(s * base.difference)));
    EXPECT_NEAR(right.difference, s * base.difference, 1e-9 * std::max(1.0, std::abs(s * base.difference)));
  }
}

TEST(Audit, AdditivityInFirstArgument) {
  const auto a1 = parse_position("r^-1", 4), a2 = parse_position("log(r^2*M^2)/r", 4);
  const auto b = parse_position("r^-2", 4);
  const Character ch{4, 2.0, 1.0};
  const double d1 = diagram_audit(IdealElement(a1, b), ch).difference;
  const double d2 = diagram_audit(IdealElement(a2, b), ch).difference;
  const double d12 = diagram_audit(IdealElement(add(a1, a2), b), ch).difference;
  EXPECT_NEAR(d12, d1 + d2, 1e-9 * std::max(1.0, std::abs(d12)));
}

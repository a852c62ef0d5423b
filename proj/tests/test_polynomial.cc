#include <gtest/gtest.h>

#include <cmath>

#include "dequant/polynomial.hh"

using namespace dequant;

TEST(EvenPolynomial, EvaluationAndReducedForm) {
  const EvenPolynomial p({0.25, 1.5, -0.5});
  EXPECT_EQ(p.degree(), 4);
  EXPECT_DOUBLE_EQ(p(0.0), 0.25);
  EXPECT_DOUBLE_EQ(p(1.0), 1.25);
  EXPECT_DOUBLE_EQ(p(-0.5), 0.25 + 1.5 * 0.25 - 0.5 * 0.0625);
  for (double y : {0.0, 0.3, 0.9}) {
    EXPECT_NEAR(p.reduced(y), p(std::sqrt(y)) - p.constant_term(), 1e-15);
    if (y > 0) EXPECT_NEAR(p.reduced_over_y(y), p.reduced(y) / y, 1e-15);
  }
  EXPECT_DOUBLE_EQ(p.reduced_over_y(0.0), 1.5);
  EXPECT_THROW(EvenPolynomial({}), std::invalid_argument);
}

TEST(EvenPolynomial, BoundednessOnUnitInterval) {
  EXPECT_TRUE(EvenPolynomial({0.0, 1.5, -0.5}).bounded_on_unit_interval());
  EXPECT_FALSE(EvenPolynomial({0.0, 2.0}).bounded_on_unit_interval());
  // Chebyshev T4 = 8x^4 - 8x^2 + 1 peaks at exactly 1.
  EXPECT_NEAR(EvenPolynomial({1.0, -8.0, 8.0}).max_abs_on_unit_interval(), 1.0, 1e-12);
}

TEST(EvenPolynomial, ClippedFunctionMatchesAndIsFlatOutside) {
  const EvenPolynomial p({0.1, 1.5, -0.5});
  const auto f = p.clipped();
  EXPECT_NEAR(f.f(0.5).real(), p.reduced(0.5), 1e-15);
  EXPECT_NEAR(f.f(3.0).real(), p.reduced(1.0), 1e-15);
  EXPECT_NEAR(f.fbar(3.0).real(), p.reduced(1.0) / 3.0, 1e-15);
  // q(y) = 1.5 y - 0.5 y^2: q' in [0.5, 2.5] on [-1, 1]; qbar' = -0.5.
  EXPECT_NEAR(f.lipschitz, 2.5, 1e-9);
  EXPECT_NEAR(f.fbar_max, 2.0, 1e-9);
  EXPECT_NEAR(f.lipschitz_bar, 2.0, 1e-9);
}

TEST(EvenPolynomial, ClippedLipschitzHoldsOnGrid) {
  const EvenPolynomial p({0.0, 0.9, -1.2, 0.6});
  const auto f = p.clipped();
  for (int k = 0; k < 400; ++k) {
    const double x = -2.0 + k / 100.0, y = x + 0.01;
    EXPECT_LE(std::abs(f.f(x) - f.f(y)), f.lipschitz * 0.01 + 1e-12);
    if (x > 0.0) EXPECT_LE(std::abs(f.fbar(x) - f.fbar(y)), f.lipschitz_bar * 0.01 + 1e-12);
  }
}

TEST(ThresholdTransfer, RecommendationShape) {
  const ThresholdTransfer t(TransferKind::Recommendation, 0.5, 0.2);
  const double lo = 0.64 * 0.25, hi = 1.44 * 0.25;
  EXPECT_DOUBLE_EQ(t.ramp_start(), lo);
  EXPECT_EQ(t.t(lo - 1e-9), 0.0);
  EXPECT_NEAR(t.t(lo), 0.0, 1e-15);
  EXPECT_NEAR(t.t(hi - 1e-12), 1.0, 1e-9);
  EXPECT_EQ(t.t(hi), 1.0);
  EXPECT_NEAR(t.t(0.5 * (lo + hi)), 0.5, 1e-12);
  EXPECT_NEAR(t.tbar(0.3), t.t(0.3) / 0.3, 1e-15);
  EXPECT_DOUBLE_EQ(t.t_max(), 1.0);
}

TEST(ThresholdTransfer, InversionShape) {
  const ThresholdTransfer t(TransferKind::Inversion, 0.5, 0.2);
  EXPECT_DOUBLE_EQ(t.t(0.25), 4.0);
  EXPECT_DOUBLE_EQ(t.t(0.5), 2.0);
  EXPECT_NEAR(t.t(0.25 - 1e-12), 4.0, 1e-8);
  EXPECT_EQ(t.t(0.1), 0.0);
  EXPECT_DOUBLE_EQ(t.tbar(0.5), 4.0);
  EXPECT_DOUBLE_EQ(t.t_max(), 4.0);
  EXPECT_DOUBLE_EQ(t.tbar_max(), 16.0);
}

TEST(ThresholdTransfer, BoundsHoldOnGrid) {
  for (auto kind : {TransferKind::Recommendation, TransferKind::Inversion}) {
    const ThresholdTransfer t(kind, 0.4, 0.25);
    for (int k = 1; k < 2000; ++k) {
      const double x = k / 1000.0, y = x + 0.001;
      EXPECT_LE(std::abs(t.t(x) - t.t(y)), t.lipschitz() * 0.001 + 1e-12);
      EXPECT_LE(std::abs(t.tbar(x) - t.tbar(y)), t.lipschitz_bar() * 0.001 + 1e-9);
      EXPECT_LE(t.t(x), t.t_max() + 1e-12);
      EXPECT_LE(t.tbar(x), t.tbar_max() + 1e-12);
    }
  }
}

TEST(ThresholdTransfer, RejectsBadParameters) {
  EXPECT_THROW(ThresholdTransfer(TransferKind::Inversion, 0.0, 0.2), std::domain_error);
  EXPECT_THROW(ThresholdTransfer(TransferKind::Inversion, 0.5, 1.0), std::domain_error);
}

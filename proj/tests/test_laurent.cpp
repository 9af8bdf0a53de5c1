#include "helpers.hpp"

namespace annulus {
namespace {

using test::rat;

TEST(LaurentExpand, OuterGeometricCoefficients) {
  const auto s = laurent_expand(rat(0.5, {1.0}, {2.0}), 10);
  EXPECT_NEAR(std::abs(s.factor_pos[0] + 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.factor_pos[1] + 0.25), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.factor_pos[2] + 0.125), 0.0, 1e-15);
  EXPECT_NEAR(s.rho1, 0.5, 1e-15);
  for (int j = -10; j < 0; ++j) EXPECT_EQ(s.coeff(j), cplx{});
}

TEST(LaurentExpand, InnerGeometricCoefficients) {
  const auto s = laurent_expand(rat(0.5, {1.0}, {}, {0.1}), 10);
  EXPECT_NEAR(std::abs(s.coeff(-1) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.coeff(-2) - 0.1), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.coeff(-3) - 0.01), 0.0, 1e-15);
  EXPECT_EQ(s.coeff(0), cplx{});
  EXPECT_NEAR(s.rho2, 0.1, 1e-15);
}

TEST(LaurentExpand, PolynomialIsItsOwnSeries) {
  const auto s = laurent_expand(rat(0.5, {3.0, 0.0, 2.0}), 6);
  for (int j = -6; j <= 6; ++j) {
    const cplx want = j == 0 ? 3.0 : j == 2 ? 2.0 : 0.0;
    EXPECT_EQ(s.coeff(j), want) << j;
  }
  EXPECT_EQ(s.tail_bound, 0.0);
}

TEST(LaurentExpand, PositiveCoefficientsVanishWithoutOuterPart) {
  const auto s = laurent_expand(rat(0.5, {2.0}, {}, {0.2, -0.1}), 12);
  for (int j = 1; j <= 12; ++j) EXPECT_EQ(s.coeff(j), cplx{});
}

TEST(LaurentExpand, Errors) {
  EXPECT_EQ(test::code_of([] { laurent_expand(rat(0.5, {1.0}, {0.5}), 4); }), Errc::InvalidRational);
  EXPECT_EQ(test::code_of([] { laurent_expand(rat(0.5, {1.0}), 0); }), Errc::InvalidRational);
}

TEST(LaurentExpand, RepeatedRootsStillBounded) {
  const auto f = rat(0.5, {1.0}, {1.5, 1.5}, {0.2, 0.2});
  const auto s = laurent_expand(f, 40);
  EXPECT_TRUE(s.clustered_roots);
  double worst = 0.0;
  for (int k = 0; k < 256; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 256.0;
    for (double rad : {1.0, 0.5}) {
      const cplx z = std::polar(rad, t);
      worst = std::max(worst, std::abs(eval(f, z) - eval_truncation(s, z)));
    }
  }
  EXPECT_LE(worst, s.tail_bound);
}

TEST(GeometricProductSeries, MatchesDirectConvolution) {
  GeometricProductSeries g(2.0, 1, {0.5, -0.3});
  const auto c = g.coefficients(8);
  // 2 z / ((1 - 0.5 z)(1 + 0.3 z))
  std::vector<cplx> a(9), b(9);
  for (int n = 0; n <= 8; ++n) {
    a[n] = std::pow(0.5, n);
    b[n] = std::pow(-0.3, n);
  }
  for (int n = 0; n <= 8; ++n) {
    cplx want = 0.0;
    if (n >= 1)
      for (int k = 0; k <= n - 1; ++k) want += 2.0 * a[k] * b[n - 1 - k];
    EXPECT_NEAR(std::abs(c[n] - want), 0.0, 1e-14) << n;
  }
}

TEST(OrderForTolerance, MeetsTarget) {
  const auto f = rat(0.5, {1.0, 0.3}, {1.4, -2.0}, {0.3});
  const int M = order_for_tolerance(f, 1e-10);
  EXPECT_LE(laurent_expand(f, M).tail_bound, 1e-10);
  EXPECT_GT(laurent_expand(f, M - 1).tail_bound, 1e-10);
}

}  // namespace
}  // namespace annulus

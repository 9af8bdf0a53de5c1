#include "helpers.hpp"

namespace annulus {
namespace {

using test::dist;
using test::rat;

TEST(Egervary, UnitaryDilatesItself) {
  const cplx lambda = std::polar(1.0, 0.8);
  const auto dil = egervary_dilation(lambda * identity(1), 3);
  ASSERT_EQ(dil.U.rows(), 1);
  EXPECT_EQ(dil.U(0, 0), lambda);
}

TEST(Egervary, ZeroScalar) {
  const auto dil = egervary_dilation(ComplexMatrix::Zero(1, 1), 2);
  ASSERT_EQ(dil.U.rows(), 3);
  EXPECT_LE(unitarity_defect(dil.U), 1e-15);
  ComplexMatrix P = identity(3);
  for (int k = 1; k <= 2; ++k) {
    P = dil.U * P;
    EXPECT_EQ(P(0, 0), cplx{});
  }
}

TEST(Egervary, RandomContractionMoments) {
  const auto T = gen::contraction(3, 5);
  const auto dil = egervary_dilation(T, 4);
  EXPECT_LE(unitarity_defect(dil.U), 1e-12);
  ComplexMatrix P = identity(dil.U.rows()), Tn = identity(3);
  double worst = 0.0;
  for (int k = 0; k <= 4; ++k) {
    worst = std::max(worst, dist(dil.embed.adjoint() * P * dil.embed, Tn));
    P = dil.U * P;
    Tn = T * Tn;
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Egervary, Errors) {
  EXPECT_EQ(test::code_of([] { egervary_dilation(2.0 * identity(2), 3); }), Errc::NotContraction);
}

TEST(AndoPair, UnitaryPairMoments) {
  const auto U = random_unitary(2, 6);
  const int M = 5;
  const auto pair = ando_pair(U, U, M);
  const auto w = word_residuals(pair, U, U, M - 1);
  for (double x : w) EXPECT_LE(x, 1e-10);
}

TEST(AndoPair, ScalarPair) {
  ComplexMatrix a(1, 1), b(1, 1);
  a(0, 0) = 0.6;
  b(0, 0) = 0.3;
  const auto pair = ando_pair(a, b, 5);
  ComplexMatrix P1 = identity(pair.space_dim());
  for (int m = 0; m <= 4; ++m) {
    ComplexMatrix P = P1;
    for (int k = 0; m + k <= 4; ++k) {
      const cplx got = (pair.embed.adjoint() * P * pair.embed)(0, 0);
      EXPECT_NEAR(std::abs(got - std::pow(0.6, m) * std::pow(0.3, k)), 0.0, 1e-12) << m << "," << k;
      P = pair.V2 * P;
    }
    P1 = pair.V1 * P1;
  }
}

TEST(AndoPair, CommutingContractions) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto [T1, T2] = gen::commuting_pair(3, s);
    const auto pair = ando_pair(T1, T2, 8);
    EXPECT_LE(budget_commutator(pair), 1e-10);
    EXPECT_LE(budget_isometry_defect(pair), 1e-10);
    EXPECT_LE(unitarity_defect(pair.G), 1e-12);
    for (double x : word_residuals(pair, T1, T2, 6)) EXPECT_LE(x, 1e-10);
  }
}

TEST(AndoPair, Errors) {
  const auto A = gen::contraction(2, 1), B = gen::contraction(2, 2);
  EXPECT_EQ(test::code_of([&] { ando_pair(A, B, 4); }), Errc::NotCommuting);
  EXPECT_EQ(test::code_of([&] { ando_pair(2.0 * A / operator_norm(A), A, 4); }), Errc::NotContractions);
  EXPECT_EQ(test::code_of([&] { ando_pair(A, A, 1); }), Errc::BudgetExceeded);
  EXPECT_EQ(test::code_of([&] { ando_pair(A, identity(3), 4); }), Errc::DimensionMismatch);
}

TEST(BuildModel, UnitaryIsExact) {
  const double r = 0.5;
  const auto T = random_unitary(3, 2);
  const auto m = build_model(T, r, 20);
  EXPECT_TRUE(m.exact);
  EXPECT_LE(dist(m.N, block_diag(T, T)), 1e-15);
  EXPECT_LE(dist(m.inner_inverse_carrier, r * T.adjoint()), 1e-12);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto f = gen::rational(r, s);
    const auto v = verify_model(m, T, f);
    EXPECT_LE(v.residual, 1e-10 * std::max(1.0, operator_norm(eval_direct(f, T))));
  }
}

TEST(BuildModel, FlipProperties) {
  const double r = 0.5;
  const auto T = gen::singular_value_windowed(2, r, 4);
  const auto m = build_model(T, r, 6);
  EXPECT_TRUE(m.F == m.F.adjoint());
  EXPECT_TRUE(m.F * m.F == identity(m.F.rows()));
  const Eigen::Index k = m.carrier_dim();
  const ComplexMatrix FNF = flip_conjugate(m.N);
  EXPECT_TRUE(FNF.topLeftCorner(k, k) == m.N.bottomRightCorner(k, k));
  EXPECT_TRUE(FNF.bottomRightCorner(k, k) == m.N.topLeftCorner(k, k));
  EXPECT_EQ(flip_residual(m, rat(r, {1.0}, {}, {0.1, 0.2})), 0.0);
}

TEST(VerifyModel, IdentityFunction) {
  const double r = 0.5;
  const auto T = gen::singular_value_windowed(3, r, 7);
  const auto m = build_model(T, r, 4);
  EXPECT_LE(verify_model(m, T, rat(r, {0.0, 1.0})).residual, 1e-12);
}

TEST(VerifyModel, PolynomialMatchesEgervary) {
  const double r = 0.5;
  const auto T = gen::singular_value_windowed(3, r, 8);
  const auto f = rat(r, {0.3, -1.0, 0.5, 0.2});
  const auto m = build_model(T, r, 4);
  EXPECT_LE(verify_model(m, T, f).residual, 1e-10);
  const auto eg = verify_outer_only(T, r, f);
  EXPECT_LE(eg.residual, 1e-10);
}

TEST(VerifyModel, BudgetedWithinTail) {
  const double r = 0.5;
  const auto T = gen::singular_value_windowed(3, r, 9);
  const auto f = rat(r, {1.0, 0.5}, {3.0}, {0.05});
  const auto m = build_model(T, r, 16);
  const auto v = verify_model(m, T, f);
  EXPECT_LE(v.residual, v.tail.bound + 1e-8);
  EXPECT_LE(v.tail.bound, 1e-8);
}

TEST(VerifyModel, BudgetExceeded) {
  const double r = 0.5;
  const auto T = gen::singular_value_windowed(3, r, 9);
  const auto m = build_model(T, r, 2);
  EXPECT_EQ(test::code_of([&] { verify_model(m, T, rat(r, {1.0}, {1.2}, {0.45})); }), Errc::BudgetExceeded);
}

TEST(VerifyMoments, Examples) {
  const double r = 0.4;
  const auto U = random_unitary(3, 1);
  const auto mu = build_model(r * U, r, 4);
  EXPECT_EQ(verify_moments(mu, r * U, 0), 0.0);
  EXPECT_LE(verify_moments(mu, r * U, 4), 1e-11);

  const auto T = gen::singular_value_windowed(3, r, 3);
  const auto m = build_model(T, r, 8);
  EXPECT_LE(verify_moments(m, T, 8), 1e-10);
  EXPECT_EQ(test::code_of([&] { verify_moments(m, T, 9); }), Errc::BudgetExceeded);
}

TEST(SingleCarrier, OuterAndInner) {
  const double r = 0.5;
  const auto T = gen::singular_value_windowed(3, r, 10);
  const auto g = rat(r, {1.0, -0.4}, {1.5, std::polar(2.0, 1.0)});
  EXPECT_LE(verify_outer_only(T, r, g).residual, 1e-10);
  const auto f = rat(r, {0.7}, {}, {0.2, cplx{0.0, -0.3}});
  EXPECT_LE(verify_inner_only(T, r, f).residual, 1e-10);
  EXPECT_EQ(test::code_of([&] { verify_inner_only(T, r, rat(r, {0.0, 0.0, 1.0}, {}, {0.2})); }),
            Errc::InvalidRational);
}

}  // namespace
}  // namespace annulus

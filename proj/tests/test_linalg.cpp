#include "helpers.hpp"

namespace annulus {
namespace {

using test::dist;

TEST(EigNormal, Identity) {
  const auto e = eig_normal(identity(2));
  ASSERT_EQ(e.lambdas.size(), 2u);
  EXPECT_NEAR(std::abs(e.lambdas[0] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e.lambdas[1] - 1.0), 0.0, 1e-14);
  EXPECT_LE(dist(e.Q.adjoint() * e.Q, identity(2)), 1e-12);
}

TEST(EigNormal, DiagonalOrderedByModulus) {
  const auto e = eig_normal(gen::diag({0.25, 1.0}));
  EXPECT_NEAR(e.lambdas[0].real(), 1.0, 1e-14);
  EXPECT_NEAR(e.lambdas[1].real(), 0.25, 1e-14);
}

TEST(EigNormal, RecoversConjugatedPhases) {
  const std::vector<double> theta{0.3, 1.7, -2.2};
  std::vector<cplx> lambdas;
  for (double t : theta) lambdas.push_back(std::polar(1.0, t));
  const auto Q0 = random_unitary(3, 11);
  const auto e = eig_normal(gen::conjugate(Q0, gen::diag(lambdas)));
  for (const auto& l : lambdas) {
    double best = 1.0;
    for (const auto& m : e.lambdas) best = std::min(best, std::abs(l - m));
    EXPECT_LE(best, 1e-10);
  }
  // ties in modulus break by ascending argument
  EXPECT_LT(std::arg(e.lambdas[0]), std::arg(e.lambdas[1]));
  EXPECT_LT(std::arg(e.lambdas[1]), std::arg(e.lambdas[2]));
}

TEST(EigNormal, RejectsNonNormalAndNonSquare) {
  EXPECT_EQ(test::code_of([] { eig_normal(gen::example_matrix(0.25)); }), Errc::NotNormal);
  EXPECT_EQ(test::code_of([] { eig_normal(ComplexMatrix::Zero(2, 3)); }), Errc::NotSquare);
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(identity(3)), 1.0, 1e-14);
  EXPECT_NEAR(operator_norm(gen::example_matrix(0.25)), 1.0, 1e-12);
  EXPECT_NEAR(operator_norm(gen::diag({0.3, 0.9})), 0.9, 1e-14);
}

TEST(Solve, Examples) {
  const auto B = random_gaussian(3, 2, 5);
  EXPECT_LE(dist(solve(identity(3), B), B), 1e-15);
  const ComplexMatrix X = solve(gen::diag({2.0, 4.0}), identity(2));
  EXPECT_LE(dist(X, gen::diag({0.5, 0.25})), 1e-15);
  const ComplexMatrix A = random_unitary(5, 3) + 0.1 * random_gaussian(5, 5, 4);
  const ComplexMatrix C = random_gaussian(5, 2, 6);
  EXPECT_LE(operator_norm(A * solve(A, C) - C) / operator_norm(C), 1e-10);
}

TEST(Solve, Errors) {
  EXPECT_EQ(test::code_of([] { solve(gen::diag({1.0, 0.0}), identity(2)); }), Errc::Singular);
  EXPECT_EQ(test::code_of([] { solve(identity(2), identity(3)); }), Errc::DimensionMismatch);
}

TEST(RandomUnitary, UnitaryAndDeterministic) {
  const auto u = random_unitary(1, 42);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-15);
  EXPECT_LE(unitarity_defect(random_unitary(4, 7)), 1e-12);
  const auto a = random_unitary(4, 7), b = random_unitary(4, 7);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == random_unitary(4, 8));
}

TEST(UnitaryCompletion, Examples) {
  const ComplexMatrix e1 = identity(3).leftCols(1);
  const auto U = unitary_completion(e1);
  EXPECT_LE(unitarity_defect(U), 1e-12);
  EXPECT_LE(dist(U.leftCols(1), e1), 1e-15);

  const auto W = random_unitary(3, 2);
  EXPECT_LE(dist(unitary_completion(W), W), 1e-15);

  const ComplexMatrix V = random_unitary(5, 9).leftCols(2);
  const auto U5 = unitary_completion(V);
  EXPECT_LE(unitarity_defect(U5), 1e-12);
  EXPECT_LE(dist(U5.leftCols(2), V), 1e-15);

  EXPECT_EQ(test::code_of([] { unitary_completion(2.0 * identity(2).leftCols(1)); }), Errc::NotIsometric);
}

TEST(Linalg, ZeroDimension) {
  const ComplexMatrix Z(0, 0);
  EXPECT_EQ(operator_norm(Z), 0.0);
  EXPECT_TRUE(eig_normal(Z).lambdas.empty());
}

}  // namespace
}  // namespace annulus

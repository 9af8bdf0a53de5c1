#include "helpers.hpp"

namespace annulus {
namespace {

using test::dist;

TEST(IsArUnitary, Examples) {
  const double r = 0.5;
  EXPECT_TRUE(is_ar_unitary(gen::diag({1.0, cplx{0.0, r}}), r));
  EXPECT_FALSE(is_ar_unitary(gen::diag({0.7}), r));
  EXPECT_FALSE(is_ar_unitary(gen::example_matrix(0.25), 0.25));
}

TEST(MakeArUnitary, Examples) {
  const double r = 0.5;
  const auto N = make_ar_unitary(identity(2), identity(3), r);
  EXPECT_LE(dist(N, gen::diag({1.0, 1.0, r, r, r})), 1e-15);
  const auto U1 = random_unitary(3, 2);
  EXPECT_LE(dist(make_ar_unitary(U1, ComplexMatrix(0, 0), r), U1), 1e-15);
  EXPECT_TRUE(is_ar_unitary(make_ar_unitary(U1, random_unitary(2, 3), r), r));
  EXPECT_EQ(test::code_of([&] { make_ar_unitary(2.0 * identity(2), identity(1), r); }), Errc::NotUnitary);
}

TEST(Decompose, TrivialSplits) {
  const double r = 0.5;
  const auto U = random_unitary(3, 8);
  const auto a = decompose(U, r);
  EXPECT_LE(dist(a.P1, identity(3)), 1e-10);
  EXPECT_LE(operator_norm(a.P2), 1e-10);
  const auto b = decompose(r * U, r);
  EXPECT_LE(operator_norm(b.P1), 1e-10);
  EXPECT_LE(dist(b.P2, identity(3)), 1e-10);
}

TEST(Decompose, ConjugatedBlocks) {
  const double r = 0.3;
  const auto inst = gen::conjugated_ar_unitary(3, 2, r, 5);
  const auto d = decompose(inst.N, r);
  const ComplexMatrix P1 = inst.Q * gen::diag({1.0, 1.0, 1.0, 0.0, 0.0}) * inst.Q.adjoint();
  EXPECT_LE(dist(d.P1, P1), 1e-10);
  EXPECT_LE(dist(d.P2, identity(5) - P1), 1e-10);
  EXPECT_LE(d.residual, 1e-9);
  EXPECT_EQ(d.U1.rows(), 3);
  EXPECT_EQ(d.U2.rows(), 2);
  // U1 and U2 match up to a change of basis: same spectra
  auto sorted = [](std::vector<cplx> v) {
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return std::arg(a) < std::arg(b); });
    return v;
  };
  const auto e1 = sorted(eigenvalues(d.U1)), w1 = sorted(eigenvalues(inst.U1));
  for (std::size_t i = 0; i < e1.size(); ++i) EXPECT_LE(std::abs(e1[i] - w1[i]), 1e-9);
}

TEST(Decompose, Roundtrip) {
  const double r = 0.6;
  const auto N = make_ar_unitary(random_unitary(2, 1), random_unitary(3, 2), r);
  const auto d = decompose(N, r);
  EXPECT_LE(dist(d.P1, gen::diag({1.0, 1.0, 0.0, 0.0, 0.0})), 1e-10);
  EXPECT_LE(dist(d.P2, gen::diag({0.0, 0.0, 1.0, 1.0, 1.0})), 1e-10);
}

TEST(Decompose, RejectsNonMembers) {
  EXPECT_EQ(test::code_of([] { decompose(gen::example_matrix(0.25), 0.25); }), Errc::NotArUnitary);
  EXPECT_EQ(test::code_of([] { decompose(gen::diag({0.7}), 0.5); }), Errc::NotArUnitary);
}

TEST(MembershipSubspaces, Examples) {
  const double r = 0.5;
  const auto U = random_unitary(3, 4);
  EXPECT_LE(dist(membership_subspaces(U, r).P1, identity(3)), 1e-9);
  EXPECT_LE(dist(membership_subspaces(r * U, r).P2, identity(3)), 1e-9);
  const auto inst = gen::conjugated_ar_unitary(2, 3, r, 12);
  const auto m = membership_subspaces(inst.N, r);
  const auto d = decompose(inst.N, r);
  EXPECT_LE(dist(m.P1, d.P1), 1e-9);
  EXPECT_LE(dist(m.P2, d.P2), 1e-9);
}

}  // namespace
}  // namespace annulus

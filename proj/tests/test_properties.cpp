// Seeded property sweeps over the module invariants.
#include "helpers.hpp"

namespace annulus {
namespace {

using test::dist;

constexpr std::uint64_t kSeed = 0xA11A5;

class Seeded : public ::testing::TestWithParam<std::uint64_t> {
 protected:
  std::uint64_t seed() const { return derive_seed(kSeed, GetParam()); }
  double radius() const { return 0.2 + 0.7 * Rng(seed()).uniform(); }
};

INSTANTIATE_TEST_SUITE_P(Sweep, Seeded, ::testing::Range<std::uint64_t>(0, 12));

TEST_P(Seeded, EigNormalReconstructs) {
  const auto A = gen::normal_in_annulus(5, radius(), seed());
  const auto e = eig_normal(A);
  EXPECT_LE(dist(A, e.Q * gen::diag(e.lambdas) * e.Q.adjoint()), 10 * 1e-10 * operator_norm(A));
}

TEST_P(Seeded, NormUnitarilyInvariant) {
  const auto A = random_gaussian(4, 4, seed());
  const double a = operator_norm(A);
  EXPECT_NEAR(operator_norm(A.adjoint()), a, 1e-12 * a);
  EXPECT_NEAR(operator_norm(random_unitary(4, seed() + 1) * A * random_unitary(4, seed() + 2)), a, 1e-12 * a);
}

TEST_P(Seeded, LaurentTailIsCertified) {
  const double r = radius();
  const auto f = gen::rational(r, seed());
  const auto s = laurent_expand(f, 24);
  double worst = 0.0;
  for (int k = 0; k < 256; ++k) {
    const cplx z = std::polar(k % 2 ? 1.0 : r, 2.0 * std::numbers::pi * (k / 2) / 128.0);
    worst = std::max(worst, std::abs(eval(f, z) - eval_truncation(s, z)));
  }
  EXPECT_LE(worst, s.tail_bound * (1 + 1e-12) + 1e-13);
  EXPECT_LE(laurent_expand(f, 32).tail_bound, s.tail_bound);
  EXPECT_LT(s.rho1, 1.0);
  EXPECT_LT(s.rho2, r);
}

TEST_P(Seeded, ThreeRoutesAgree) {
  const double r = radius();
  const auto T = gen::normal_in_open_annulus(3, r, seed());
  const auto f = gen::rational(r, seed() + 7);
  const auto direct = eval_direct(f, T);
  const int M = order_for_tolerance(f, 1e-10, operator_norm(T), operator_norm(inverse(T)));
  const auto lau = eval_laurent(f, T, M);
  const auto con = eval_contour(f, T, ContourSpec{default_contour(f).delta, 512});
  const double scale = std::max(1.0, operator_norm(direct));
  EXPECT_LE(dist(direct, lau.value), 1e-8 * scale);
  EXPECT_LE(dist(direct, con), 1e-8 * scale);
  EXPECT_LE(dist(direct, lau.value), lau.bound + 1e-12 * scale);
}

TEST_P(Seeded, Multiplicative) {
  const double r = radius();
  const auto T = gen::normal_in_annulus(3, r, seed());
  const auto f = gen::rational(r, seed() + 1), g = gen::rational(r, seed() + 2);
  const auto fg = eval_direct(multiply(f, g), T);
  EXPECT_LE(dist(fg, eval_direct(f, T) * eval_direct(g, T)), 1e-9 * std::max(1.0, operator_norm(fg)));
}

TEST_P(Seeded, RieszProjectorsSumToIdentity) {
  const double r = radius();
  const auto inst = gen::conjugated_ar_unitary(2, 2, r, seed());
  const ContourSpec spec{0.45 * std::min(r, 1.0 - r), 512};
  const auto P = riesz_projection(inst.N, r, SpectralPart::Outer, spec);
  const auto Q = riesz_projection(inst.N, r, SpectralPart::Inner, spec);
  EXPECT_LE(dist(P + Q, identity(4)), 1e-8);
}

TEST_P(Seeded, InvolutionSymmetry) {
  const double r = radius();
  const auto T = gen::normal_in_annulus(3, r, seed());
  const auto battery = make_test_battery(r, 100, seed());
  const auto a = vonneumann_stress(T, r, battery, seed());
  const auto b = vonneumann_stress(involution(T, r), r, involuted_battery(battery), seed());
  EXPECT_LE(a.max_ratio, 1.0 + 1e-10);
  EXPECT_LE(b.max_ratio, 1.0 + 2e-8);
  EXPECT_EQ(double_contraction_check(T, r), double_contraction_check(involution(T, r), r));
  const auto W = gen::contraction(3, seed());
  EXPECT_EQ(double_contraction_check(W, r), double_contraction_check(involution(W, r), r));
}

TEST_P(Seeded, CnnProjectorsReduce) {
  const auto T = gen::contraction(4, seed());
  ComplexMatrix J = ComplexMatrix::Zero(2, 2);
  J(0, 1) = 0.5;
  const auto Q = random_unitary(5, seed());
  const ComplexMatrix A = Q * block_diag(block_diag(gen::diag({0.3}), J), gen::diag({0.9, 0.4})) * Q.adjoint();
  for (const auto& X : std::vector<ComplexMatrix>{T, A}) {
    const auto s = cnn_split(X);
    EXPECT_LE(operator_norm(s.P_cnn * s.P_cnn - s.P_cnn), 1e-10);
    EXPECT_LE(operator_norm(s.P_cnn * X - X * s.P_cnn), 1e-9);
    const ComplexMatrix Xn = s.P_normal * X * s.P_normal;
    EXPECT_LE(self_commutator_norm(Xn), 1e-9);
    EXPECT_LE(dist(s.P_cnn + s.P_normal, identity(X.rows())), 1e-12);
  }
}

TEST_P(Seeded, ArUnitaryRouteIndependence) {
  const double r = radius();
  const auto inst = gen::conjugated_ar_unitary(1 + GetParam() % 3, 1 + (GetParam() / 3) % 3, r, seed());
  const auto d = decompose(inst.N, r);
  const auto m = membership_subspaces(inst.N, r);
  EXPECT_LE(dist(d.P1, m.P1), 1e-9);
  EXPECT_LE(dist(d.P2, m.P2), 1e-9);
  EXPECT_LE(operator_norm(d.P1 * d.P2), 1e-10);
  EXPECT_LE(dist(inst.N, d.P1 * inst.N * d.P1 + d.P2 * inst.N * d.P2), 1e-10);
}

TEST_P(Seeded, DegreeBudgetExact) {
  const double r = radius();
  const auto T = gen::singular_value_windowed(2, r, seed());
  const int d = 5;
  const auto pair = ando_pair(T, involution(T, r), d + 1);
  for (double x : word_residuals(pair, T, involution(T, r), d)) EXPECT_LE(x, 1e-10);
}

TEST_P(Seeded, TailSoundness) {
  const double r = radius();
  const auto T = gen::singular_value_windowed(2, r, seed());
  gen::RationalShape shape;
  shape.outer_min = 2.5;
  shape.inner_max_frac = 0.3;
  const auto f = gen::rational(r, seed(), shape);
  const auto m10 = build_model(T, r, 10);
  const auto m14 = build_model(T, r, 14);
  const auto a = verify_model(m10, T, f, 1.0);
  const auto b = verify_model(m14, T, f, 1.0);
  EXPECT_LE(std::abs(a.residual - b.residual), a.tail.bound + 1e-10);
}

TEST_P(Seeded, FlipIdentityExact) {
  const double r = radius();
  const auto T = gen::singular_value_windowed(2, r, seed());
  const auto m = build_model(T, r, 3);
  EXPECT_EQ(flip_residual(m, gen::rational(r, seed())), 0.0);
}

}  // namespace
}  // namespace annulus

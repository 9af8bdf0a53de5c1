#pragma once

// A_r-unitaries: normal operators with spectrum on the two boundary circles.
// Every such N splits uniquely as U1 (+) rU2 with U1, U2 unitary.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "annulus/calculus.hpp"
#include "annulus/linalg.hpp"

namespace annulus {

inline bool is_ar_unitary(const ComplexMatrix& N, double r, const Tolerances& tol = {}) {
  require_square(N, "is_ar_unitary operand");
  if (N.rows() == 0) return true;
  const double scale = operator_norm(N);
  if (self_commutator_norm(N) > tol.eig_tol * std::max(scale * scale, 1e-300)) return false;
  const double band = 10.0 * tol.eig_tol;
  for (const auto& lambda : eigenvalues(N, tol)) {
    const double m = std::abs(lambda);
    if (std::abs(m - 1.0) > band && std::abs(m - r) > band) return false;
  }
  return true;
}

inline ComplexMatrix make_ar_unitary(const ComplexMatrix& U1, const ComplexMatrix& U2, double r,
                                     const Tolerances& tol = {}) {
  if (!(r > 0.0 && r < 1.0)) fail(Errc::BadRadius, "r = " + num(r));
  require_square(U1, "U1");
  require_square(U2, "U2");
  const double band = 10.0 * tol.eig_tol;
  if (unitarity_defect(U1) > band) fail(Errc::NotUnitary, "U1 is not unitary");
  if (unitarity_defect(U2) > band) fail(Errc::NotUnitary, "U2 is not unitary");
  return block_diag(U1, r * U2);
}

struct ArUnitaryDecomposition {
  ComplexMatrix P1, P2;
  ComplexMatrix U1, U2;  // N restricted to ran P1, and (1/r) N restricted to ran P2, in the bases Q1, Q2
  ComplexMatrix Q1, Q2;  // orthonormal bases of ran P1, ran P2
  double residual = 0.0;
};

namespace detail {

/// Node count for the Riesz cross-check: the worst trapezoid contraction
/// factor raised to the node count drops below 1e-14.
inline int riesz_nodes(double r, double delta) {
  const double middle = 0.5 * (1.0 + r);
  const double rate = std::max({r / middle, middle, 1.0 / (1.0 + delta)});
  const int n = static_cast<int>(std::ceil(std::log(1e-14) / std::log(rate)));
  return std::clamp(n, 64, 4096);
}

}  // namespace detail

inline ArUnitaryDecomposition decompose(const ComplexMatrix& N, double r, const Tolerances& tol = {}) {
  require_square(N, "decompose operand");
  if (!(r > 0.0 && r < 1.0)) fail(Errc::BadRadius, "r = " + num(r));
  if (1.0 - r <= 20.0 * tol.eig_tol) fail(Errc::NoSpectralGap, "the circles |z| = 1 and |z| = r coincide within tolerance");
  if (!is_ar_unitary(N, r, tol)) fail(Errc::NotArUnitary, "operand is not an A_r-unitary");

  const Eigen::Index n = N.rows();
  const auto eig = eig_normal(N, tol);
  std::vector<Eigen::Index> outer, inner;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double m = std::abs(eig.lambdas[static_cast<std::size_t>(k)]);
    (std::abs(m - 1.0) <= std::abs(m - r) ? outer : inner).push_back(k);
  }
  ArUnitaryDecomposition d;
  d.Q1.resize(n, static_cast<Eigen::Index>(outer.size()));
  d.Q2.resize(n, static_cast<Eigen::Index>(inner.size()));
  for (std::size_t i = 0; i < outer.size(); ++i) d.Q1.col(static_cast<Eigen::Index>(i)) = eig.Q.col(outer[i]);
  for (std::size_t i = 0; i < inner.size(); ++i) d.Q2.col(static_cast<Eigen::Index>(i)) = eig.Q.col(inner[i]);
  d.P1 = d.Q1 * d.Q1.adjoint();
  d.P2 = d.Q2 * d.Q2.adjoint();
  d.U1 = d.Q1.adjoint() * N * d.Q1;
  d.U2 = (d.Q2.adjoint() * N * d.Q2) / r;

  const ComplexMatrix I = identity(n);
  double res = std::max({operator_norm(d.P1 + d.P2 - I), operator_norm(d.P1 * d.P2), unitarity_defect(d.U1),
                         unitarity_defect(d.U2), operator_norm(N * d.P1 - d.P1 * N * d.P1),
                         operator_norm(N * d.P2 - d.P2 * N * d.P2)});
  if (!outer.empty() && !inner.empty()) {
    ContourSpec spec;
    spec.delta = 0.25 * std::min(1.0 - r, r);
    spec.nodes = detail::riesz_nodes(r, spec.delta);
    res = std::max(res, operator_norm(riesz_projection(N, r, SpectralPart::Outer, spec, tol) - d.P1));
  }
  d.residual = res;
  return d;
}

namespace detail {

/// Projector onto the common kernel of I - A^n* A^n and I - A^n A^n* for
/// n = 1..n_max.
inline ComplexMatrix norm_preserving_projector(const ComplexMatrix& A, int n_max) {
  const Eigen::Index n = A.rows();
  const ComplexMatrix I = identity(n);
  ComplexMatrix stack(2 * n * n_max, n);
  ComplexMatrix power = I;
  for (int k = 0; k < n_max; ++k) {
    power = A * power;
    stack.middleRows(2 * n * k, n) = I - power.adjoint() * power;
    stack.middleRows(2 * n * k + n, n) = I - power * power.adjoint();
  }
  const ComplexMatrix B = null_basis(stack, 1e-6);
  return B * B.adjoint();
}

}  // namespace detail

struct MembershipProjectors {
  ComplexMatrix P1;
  ComplexMatrix P2;
};

/// Projectors from the norm conditions alone: vectors on which N^n is
/// isometric and co-isometric (P1), and the same for rN^{-1} (P2).
inline MembershipProjectors membership_subspaces(const ComplexMatrix& N, double r, int n_max = 2,
                                                 const Tolerances& tol = {}) {
  require_square(N, "membership_subspaces operand");
  if (n_max < 1) fail(Errc::BudgetExceeded, "n_max must be at least 1");
  if (!is_ar_unitary(N, r, tol)) fail(Errc::NotArUnitary, "operand is not an A_r-unitary");
  if (N.rows() == 0) return {N, N};
  const ComplexMatrix S = r * inverse(N, tol);
  return {detail::norm_preserving_projector(N, n_max), detail::norm_preserving_projector(S, n_max)};
}

}  // namespace annulus

#pragma once

// Dense complex linear algebra substrate. Factorizations are delegated to
// Eigen; this header fixes the conventions the rest of the toolkit relies on
// (eigenvalue ordering, tolerance semantics, error codes).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "annulus/error.hpp"
#include "annulus/rng.hpp"

namespace annulus {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct Tolerances {
  double eig_tol = 1e-10;
  double norm_tol = 1e-12;
  double rank_tol = 1e-9;
  double verify_tol = 1e-8;

  bool valid() const { return eig_tol > 0 && norm_tol > 0 && rank_tol > 0 && verify_tol > 0; }
};

struct EigDecomposition {
  ComplexMatrix Q;
  std::vector<cplx> lambdas;
  double residual = 0.0;
};

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

inline bool all_finite(const ComplexMatrix& A) {
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (!std::isfinite(A(i, j).real()) || !std::isfinite(A(i, j).imag())) return false;
  return true;
}

inline void require_square(const ComplexMatrix& A, const char* what) {
  if (A.rows() != A.cols())
    fail(Errc::NotSquare, std::string(what) + " is " + std::to_string(A.rows()) + "x" +
                              std::to_string(A.cols()));
}

/// Largest singular value. Computed from the Hermitian eigenproblem of the
/// smaller Gram matrix, then refined by one application of A to the top
/// eigenvector (never exceeds the true value by more than rounding).
inline double operator_norm(const ComplexMatrix& A) {
  if (A.size() == 0) return 0.0;
  const bool tall = A.rows() >= A.cols();
  const ComplexMatrix gram = tall ? ComplexMatrix(A.adjoint() * A) : ComplexMatrix(A * A.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
  const Eigen::Index top = gram.rows() - 1;
  const double lambda_max = std::max(es.eigenvalues()(top), 0.0);
  const ComplexVector v = es.eigenvectors().col(top);
  const double refined = tall ? (A * v).norm() : (A.adjoint() * v).norm();
  return std::max(std::sqrt(lambda_max), refined);
}

/// Deterministic spectrum ordering: descending modulus, ties (within
/// `tie_tol`) by ascending argument in (-pi, pi].
inline std::vector<std::size_t> spectral_order(const std::vector<cplx>& values, double tie_tol) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(values[a]) > std::abs(values[b]);
  });
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t stop = start + 1;
    while (stop < idx.size() &&
           std::abs(values[idx[start]]) - std::abs(values[idx[stop]]) <= tie_tol)
      ++stop;
    std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start),
                     idx.begin() + static_cast<std::ptrdiff_t>(stop),
                     [&](std::size_t a, std::size_t b) { return std::arg(values[a]) < std::arg(values[b]); });
    start = stop;
  }
  return idx;
}

/// Complex Schur form A = Z S Z*, with Z unitary and S upper triangular.
inline Eigen::ComplexSchur<ComplexMatrix> schur(const ComplexMatrix& A) {
  require_square(A, "schur input");
  Eigen::ComplexSchur<ComplexMatrix> cs(A.rows());
  cs.setMaxIterations(60 * std::max<Eigen::Index>(A.rows(), 1));
  cs.compute(A, true);
  if (cs.info() != Eigen::Success) fail(Errc::NoConvergence, "Schur iteration cap hit");
  return cs;
}

/// Eigenvalues of an arbitrary square matrix, in spectral_order.
inline std::vector<cplx> eigenvalues(const ComplexMatrix& A, const Tolerances& tol = {}) {
  require_square(A, "eigenvalues input");
  if (A.rows() == 0) return {};
  const auto cs = schur(A);
  std::vector<cplx> vals(static_cast<std::size_t>(A.rows()));
  for (Eigen::Index i = 0; i < A.rows(); ++i) vals[static_cast<std::size_t>(i)] = cs.matrixT()(i, i);
  const auto order = spectral_order(vals, tol.eig_tol * std::max(1.0, std::abs(vals.front())));
  std::vector<cplx> sorted;
  sorted.reserve(vals.size());
  for (auto i : order) sorted.push_back(vals[i]);
  return sorted;
}

inline double self_commutator_norm(const ComplexMatrix& A) {
  return operator_norm(A.adjoint() * A - A * A.adjoint());
}

/// Unitary eigendecomposition of a normal matrix. The Schur vectors of a
/// normal matrix already form an orthonormal eigenbasis, so Q is unitary to
/// working precision without a separate re-orthonormalization step.
inline EigDecomposition eig_normal(const ComplexMatrix& A, const Tolerances& tol = {}) {
  require_square(A, "eig_normal input");
  const Eigen::Index n = A.rows();
  EigDecomposition out;
  if (n == 0) return out;
  const double scale = operator_norm(A);
  const double commutator = self_commutator_norm(A);
  if (commutator > tol.eig_tol * std::max(scale * scale, 1e-300))
    fail(Errc::NotNormal, "||A*A - AA*|| = " + num(commutator));

  const auto cs = schur(A);
  std::vector<cplx> vals(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = cs.matrixT()(i, i);
  const auto order = spectral_order(vals, tol.eig_tol * std::max(1.0, scale));

  out.Q.resize(n, n);
  out.lambdas.reserve(vals.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.Q.col(k) = cs.matrixU().col(static_cast<Eigen::Index>(src));
    out.lambdas.push_back(vals[src]);
  }
  ComplexMatrix lambda = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) lambda(k, k) = out.lambdas[static_cast<std::size_t>(k)];
  out.residual = operator_norm(A * out.Q - out.Q * lambda) + operator_norm(out.Q.adjoint() * out.Q - identity(n));
  if (out.residual > 10.0 * tol.eig_tol * std::max(1.0, scale))
    fail(Errc::NoConvergence, "eigendecomposition residual " + num(out.residual));
  return out;
}

/// Solves A X = B. Fails with Singular when the reciprocal condition
/// estimate of A drops below rank_tol.
inline ComplexMatrix solve(const ComplexMatrix& A, const ComplexMatrix& B, const Tolerances& tol = {}) {
  require_square(A, "solve lhs");
  if (A.rows() != B.rows())
    fail(Errc::DimensionMismatch, "solve: lhs has " + std::to_string(A.rows()) + " rows, rhs " +
                                      std::to_string(B.rows()));
  if (A.rows() == 0) return B;
  Eigen::PartialPivLU<ComplexMatrix> lu(A);
  // rcond() is meaningless once a pivot is exactly zero, so check pivots first
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  double rcond = pivots.minCoeff() / std::max(pivots.maxCoeff(), 1e-300);
  if (rcond > 0.0) rcond = std::min(rcond, lu.rcond());
  if (!(rcond >= tol.rank_tol)) fail(Errc::Singular, "reciprocal condition estimate " + num(rcond));
  ComplexMatrix X = lu.solve(B);
  if (!all_finite(X)) fail(Errc::Singular, "non-finite solution");
  return X;
}

inline ComplexMatrix inverse(const ComplexMatrix& A, const Tolerances& tol = {}) {
  return solve(A, identity(A.rows()), tol);
}

inline ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix G(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) G(i, j) = rng.complex_normal();
  return G;
}

/// Q factor of a Householder QR with the phases chosen so that R has a
/// real positive diagonal. Columns beyond min(rows, cols) complete the basis.
inline ComplexMatrix phase_fixed_q(const ComplexMatrix& A) {
  Eigen::HouseholderQR<ComplexMatrix> qr(A);
  ComplexMatrix Q = qr.householderQ() * identity(A.rows());
  const ComplexMatrix& R = qr.matrixQR();
  const Eigen::Index k = std::min(A.rows(), A.cols());
  for (Eigen::Index j = 0; j < k; ++j) {
    const double mag = std::abs(R(j, j));
    if (mag > 0.0) Q.col(j) *= R(j, j) / mag;
  }
  return Q;
}

/// Haar-distributed unitary from seeded complex Gaussians.
inline ComplexMatrix random_unitary(Eigen::Index n, std::uint64_t seed) {
  return phase_fixed_q(random_gaussian(n, n, seed));
}

/// Extends a matrix with orthonormal columns to a square unitary whose
/// leading columns are exactly V.
inline ComplexMatrix unitary_completion(const ComplexMatrix& V, const Tolerances& tol = {}) {
  const Eigen::Index n = V.rows();
  const Eigen::Index k = V.cols();
  if (k > n) fail(Errc::NotIsometric, "more columns than rows");
  if (k == 0) return identity(n);
  const double defect = operator_norm(V.adjoint() * V - identity(k));
  if (defect > tol.rank_tol) fail(Errc::NotIsometric, "||V*V - I|| = " + num(defect));
  ComplexMatrix U = phase_fixed_q(V);
  U.leftCols(k) = V;
  return U;
}

/// Principal square root of a Hermitian positive semidefinite matrix;
/// eigenvalues below rank_tol (including rounding negatives) are clamped to 0.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& A, const Tolerances& tol = {}) {
  require_square(A, "psd_sqrt input");
  if (A.rows() == 0) return A;
  const ComplexMatrix herm = 0.5 * (A + A.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
  Eigen::VectorXd roots = es.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i) roots(i) = roots(i) > tol.rank_tol ? std::sqrt(roots(i)) : 0.0;
  return es.eigenvectors() * roots.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Defect operator (I - A*A)^{1/2}.
inline ComplexMatrix defect(const ComplexMatrix& A, const Tolerances& tol = {}) {
  return psd_sqrt(identity(A.cols()) - A.adjoint() * A, tol);
}

/// Orthonormal basis of the column span of A, columns with singular value
/// above `threshold` kept.
inline ComplexMatrix range_basis(const ComplexMatrix& A, double threshold) {
  if (A.cols() == 0) return ComplexMatrix(A.rows(), 0);
  Eigen::JacobiSVD<ComplexMatrix> svd(A, Eigen::ComputeThinU);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > threshold) ++rank;
  return svd.matrixU().leftCols(rank);
}

/// Orthonormal basis of ker(A), singular values at or below `threshold`
/// counted as zero.
inline ComplexMatrix null_basis(const ComplexMatrix& A, double threshold) {
  const Eigen::Index n = A.cols();
  if (A.rows() == 0) return identity(n);
  Eigen::JacobiSVD<ComplexMatrix> svd(A, Eigen::ComputeFullV);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > threshold) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

inline ComplexMatrix block_diag(const ComplexMatrix& A, const ComplexMatrix& B) {
  ComplexMatrix out = ComplexMatrix::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  out.topLeftCorner(A.rows(), A.cols()) = A;
  out.bottomRightCorner(B.rows(), B.cols()) = B;
  return out;
}

inline double unitarity_defect(const ComplexMatrix& U) {
  if (U.size() == 0) return 0.0;
  return std::max(operator_norm(U.adjoint() * U - identity(U.cols())),
                  operator_norm(U * U.adjoint() - identity(U.rows())));
}

}  // namespace annulus

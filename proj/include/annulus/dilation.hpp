#pragma once

// Finite dilations and the annulus model.
//
//  * egervary_dilation: unitary U on H^{d+1} with P_H U^n |H = T^n for n <= d.
//  * ando_pair: truncated commuting isometric dilation of a commuting pair of
//    contractions on K0 = H (+) (H^4)^M. H is co-invariant for both V1 and V2,
//    so P_H w(V1, V2)|H = w(T1, T2) for every word; the truncation only shows
//    in commutation and isometry, which hold on the leading blocks.
//  * build_model / verify_model: the A_r-unitary N = U1 (+) U2, the flip F and
//    the embedding V realizing f(T) = V* p(N) q1(N)^{-1} q2(FNF)^{-1} V.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "annulus/calculus.hpp"
#include "annulus/classes.hpp"
#include "annulus/laurent.hpp"
#include "annulus/linalg.hpp"
#include "annulus/rational.hpp"
#include "annulus/unitary.hpp"

namespace annulus {

struct Dilation {
  ComplexMatrix U;
  ComplexMatrix embed;
};

/// Block companion dilation
///   [ T    0 ... 0  D_{T*} ]
///   [ D_T  0 ... 0  -T*    ]
///   [ 0    I         0     ]
///   [         ...          ]
///   [ 0   ...   I    0     ]
/// on H^{d+1}. A unitary T is returned as its own dilation.
inline Dilation egervary_dilation(const ComplexMatrix& T, int d, const Tolerances& tol = {}) {
  require_square(T, "egervary_dilation operand");
  if (d < 1) fail(Errc::BudgetExceeded, "degree budget must be at least 1");
  if (operator_norm(T) > 1.0 + tol.verify_tol) fail(Errc::NotContraction, "||T|| > 1");
  const Eigen::Index n = T.rows();
  if (unitarity_defect(T) <= tol.norm_tol) return {T, identity(n)};

  const Eigen::Index dim = n * (d + 1);
  Dilation out;
  out.U = ComplexMatrix::Zero(dim, dim);
  out.U.block(0, 0, n, n) = T;
  out.U.block(0, n * d, n, n) = defect(T.adjoint(), tol);
  out.U.block(n, 0, n, n) = defect(T, tol);
  out.U.block(n, n * d, n, n) = -T.adjoint();
  for (int i = 2; i <= d; ++i) out.U.block(n * i, n * (i - 1), n, n) = identity(n);
  out.embed = ComplexMatrix::Zero(dim, n);
  out.embed.topRows(n) = identity(n);
  return out;
}

struct AndoPair {
  ComplexMatrix V1, V2;
  int M = 2;
  int d = 1;  // degree budget, M - 1
  ComplexMatrix G;
  ComplexMatrix D1, D2;
  ComplexMatrix embed;

  Eigen::Index space_dim() const { return V1.rows(); }
  Eigen::Index h_dim() const { return embed.cols(); }
  /// Number of leading coordinates spanned by blocks 0..b.
  Eigen::Index leading(int b) const { return h_dim() * (4 * b + 1); }
};

namespace detail {

/// Isometric Schaffer-type extension with slot layout (h0, h1, ..., h_{4M}):
/// W(h0, h1, ...) = (T h0, D h0, 0, h1, h2, ...), truncated at slot 4M.
inline ComplexMatrix schaffer_isometry(const ComplexMatrix& T, const ComplexMatrix& D, int M) {
  const Eigen::Index n = T.rows();
  const int slots = 4 * M + 1;
  ComplexMatrix W = ComplexMatrix::Zero(n * slots, n * slots);
  W.block(0, 0, n, n) = T;
  W.block(n, 0, n, n) = D;
  for (int s = 1; s + 2 < slots; ++s) W.block(n * (s + 2), n * s, n, n) = identity(n);
  return W;
}

/// Polar factor X (X*X)^{-1/2} of a full-column-rank X.
inline ComplexMatrix orthonormalize(const ComplexMatrix& X) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ComplexMatrix(0.5 * (X.adjoint() * X + (X.adjoint() * X).adjoint())));
  Eigen::VectorXd s = es.eigenvalues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = 1.0 / std::sqrt(s(i));
  return X * es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Unitary G on H^4 carrying (D1 T2 h, 0, D2 h, 0) to (D2 T1 h, 0, D1 h, 0).
/// The two families have the same Gram matrix I - (T1T2)*(T1T2); both are
/// orthonormalized over its range and completed to unitaries.
inline ComplexMatrix ando_fixup(const ComplexMatrix& T1, const ComplexMatrix& T2, const ComplexMatrix& D1,
                                const ComplexMatrix& D2, const Tolerances& tol = {}) {
  const Eigen::Index n = T1.rows();
  ComplexMatrix X = ComplexMatrix::Zero(4 * n, n);
  ComplexMatrix Y = ComplexMatrix::Zero(4 * n, n);
  X.topRows(n) = D1 * T2;
  X.middleRows(2 * n, n) = D2;
  Y.topRows(n) = D2 * T1;
  Y.middleRows(2 * n, n) = D1;

  const ComplexMatrix gram = 0.5 * (X.adjoint() * X + Y.adjoint() * Y);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > tol.rank_tol) keep.push_back(i);
  if (keep.empty()) return identity(4 * n);
  ComplexMatrix Z(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) Z.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);

  const ComplexMatrix A = detail::orthonormalize(X * Z);
  const ComplexMatrix B = detail::orthonormalize(Y * Z);
  return unitary_completion(B, tol) * unitary_completion(A, tol).adjoint();
}

inline AndoPair ando_pair(const ComplexMatrix& T1, const ComplexMatrix& T2, int M, const Tolerances& tol = {}) {
  require_square(T1, "T1");
  require_square(T2, "T2");
  if (T1.rows() != T2.rows()) fail(Errc::DimensionMismatch, "T1 and T2 act on different spaces");
  if (M < 2) fail(Errc::BudgetExceeded, "block depth M must be at least 2");
  const double n1 = operator_norm(T1), n2 = operator_norm(T2);
  if (n1 > 1.0 + tol.verify_tol || n2 > 1.0 + tol.verify_tol)
    fail(Errc::NotContractions, "||T1|| = " + std::to_string(n1) + ", ||T2|| = " + std::to_string(n2));
  if (operator_norm(T1 * T2 - T2 * T1) > tol.verify_tol * std::max(1.0, n1 * n2))
    fail(Errc::NotCommuting, "T1 T2 != T2 T1");

  const Eigen::Index n = T1.rows();
  AndoPair out;
  out.M = M;
  out.d = M - 1;
  out.D1 = defect(T1, tol);
  out.D2 = defect(T2, tol);
  out.G = ando_fixup(T1, T2, out.D1, out.D2, tol);

  const ComplexMatrix W1 = detail::schaffer_isometry(T1, out.D1, M);
  const ComplexMatrix W2 = detail::schaffer_isometry(T2, out.D2, M);
  // G~ = I on slot 0 and G on each block of four slots; applied blockwise.
  auto lift_left = [&](const ComplexMatrix& A, const ComplexMatrix& g) {
    ComplexMatrix out_m = A;
    for (int b = 1; b <= M; ++b) {
      const Eigen::Index row = n * (4 * b - 3);
      out_m.middleRows(row, 4 * n) = g * A.middleRows(row, 4 * n);
    }
    return out_m;
  };
  auto lift_right = [&](const ComplexMatrix& A, const ComplexMatrix& g) {
    ComplexMatrix out_m = A;
    for (int b = 1; b <= M; ++b) {
      const Eigen::Index col = n * (4 * b - 3);
      out_m.middleCols(col, 4 * n) = A.middleCols(col, 4 * n) * g;
    }
    return out_m;
  };
  out.V1 = lift_left(W1, out.G);
  out.V2 = lift_right(W2, out.G.adjoint());
  out.embed = ComplexMatrix::Zero(n * (4 * M + 1), n);
  out.embed.topRows(n) = identity(n);
  return out;
}

/// Worst ||P_H w(V1, V2)|H - w(T1, T2)|| over all words w of each total
/// degree 0..degree (index = degree).
inline std::vector<double> word_residuals(const AndoPair& pair, const ComplexMatrix& T1, const ComplexMatrix& T2,
                                          int degree) {
  const Eigen::Index n = T1.rows();
  std::vector<double> worst(static_cast<std::size_t>(degree + 1), 0.0);
  // Depth-first over words, extending on the left: (V_w embed, w(T)).
  struct Frame {
    ComplexMatrix lifted, plain;
    int depth;
  };
  std::vector<Frame> stack{{pair.embed, identity(n), 0}};
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    auto& w = worst[static_cast<std::size_t>(fr.depth)];
    w = std::max(w, operator_norm(fr.lifted.topRows(n) - fr.plain));
    if (fr.depth == degree) continue;
    stack.push_back({pair.V1 * fr.lifted, T1 * fr.plain, fr.depth + 1});
    stack.push_back({pair.V2 * fr.lifted, T2 * fr.plain, fr.depth + 1});
  }
  return worst;
}

/// ||(V1V2 - V2V1) x|| over unit x supported in blocks 0..M-2.
inline double budget_commutator(const AndoPair& pair) {
  const Eigen::Index lead = pair.leading(pair.M - 2);
  const ComplexMatrix C = pair.V1 * pair.V2.leftCols(lead) - pair.V2 * pair.V1.leftCols(lead);
  return operator_norm(C);
}

/// max_i ||V_i* V_i x - x|| over unit x supported in blocks 0..M-1.
inline double budget_isometry_defect(const AndoPair& pair) {
  const Eigen::Index lead = pair.leading(pair.M - 1);
  const ComplexMatrix I = identity(lead);
  return std::max(operator_norm(pair.V1.leftCols(lead).adjoint() * pair.V1.leftCols(lead) - I),
                  operator_norm(pair.V2.leftCols(lead).adjoint() * pair.V2.leftCols(lead) - I));
}

// ---------------------------------------------------------------------------
// The model

struct TailReport {
  double q1_tail = 0.0;  // outer factor: truncation of sum q_{n1} T^n past degree d
  double q2_tail = 0.0;  // inner factor: truncation of sum q_{n2} T^{-n} past degree d
  double bound = 0.0;    // certified bound on ||f(T) - compressed truncated model||
};

struct ModelTriple {
  ComplexMatrix N;                      // diag(U1-carrier, U2-carrier) on K0 (+) K0
  ComplexMatrix F;                      // [[0, I], [I, 0]]
  ComplexMatrix V;                      // H -> K, into the first summand
  ComplexMatrix outer_carrier;          // V1: positive powers of U1
  ComplexMatrix inner_inverse_carrier;  // V2 with U2^{-1} = V2 / r
  ComplexMatrix embed;                  // H -> K0
  double r = 0.5;
  int d = 1;
  int M = 0;           // Ando block depth; 0 for the exact model
  bool exact = false;  // T is itself an A_r-unitary and N = T (+) T
  std::optional<TailReport> tail_report;

  Eigen::Index carrier_dim() const { return outer_carrier.rows(); }
};

inline ComplexMatrix flip_matrix(Eigen::Index half) {
  ComplexMatrix F = ComplexMatrix::Zero(2 * half, 2 * half);
  F.topRightCorner(half, half) = identity(half);
  F.bottomLeftCorner(half, half) = identity(half);
  return F;
}

inline ModelTriple build_model(const ComplexMatrix& T, double r, int d, const Tolerances& tol = {}) {
  require_square(T, "build_model operand");
  if (!(r > 0.0 && r < 1.0)) fail(Errc::BadRadius, "r = " + num(r));
  if (d < 1) fail(Errc::BudgetExceeded, "degree budget must be at least 1");
  if (!double_contraction_check(T, r, tol)) fail(Errc::NotContractions, "T or rT^{-1} is not a contraction");

  const Eigen::Index n = T.rows();
  ModelTriple m;
  m.r = r;
  m.d = d;
  if (is_ar_unitary(T, r, tol)) {
    m.exact = true;
    m.M = 0;
    m.outer_carrier = T;
    m.inner_inverse_carrier = involution(T, r, tol);
    m.embed = identity(n);
  } else {
    const auto pair = ando_pair(T, involution(T, r, tol), d + 1, tol);
    m.M = pair.M;
    m.outer_carrier = pair.V1;
    m.inner_inverse_carrier = pair.V2;
    m.embed = pair.embed;
  }
  const Eigen::Index k = m.outer_carrier.rows();
  // U2 = r V2^{-1}; V2 is isometric on the budget subspace, where V2^{-1} acts as V2*.
  const ComplexMatrix U2 = m.exact ? ComplexMatrix(T) : ComplexMatrix(r * m.inner_inverse_carrier.adjoint());
  m.N = block_diag(m.outer_carrier, U2);
  m.F = flip_matrix(k);
  m.V = ComplexMatrix::Zero(2 * k, n);
  m.V.topRows(k) = m.embed;
  return m;
}

/// Certified bound for the series route truncated at degree d, with the
/// factor series measured at radii ||T|| and ||T^{-1}||.
inline TailReport model_tail(const AnnulusRational& f, const ComplexMatrix& T, int d, const Tolerances& tol = {}) {
  const double R_pos = operator_norm(T);
  const double R_neg = operator_norm(inverse(T, tol));
  const auto outer = outer_factor_series(f);
  const auto inner = inner_factor_series(f);
  double p_weight = 0.0;
  double rk = 1.0;
  for (const auto& c : f.p) {
    p_weight += std::abs(c) * rk;
    rk *= R_pos;
  }
  TailReport t;
  t.q1_tail = p_weight * outer.tail(d + 1, R_pos);
  t.q2_tail = inner.tail(d + 1, R_neg);
  t.bound = t.q1_tail * inner.total(R_neg) + p_weight * outer.total(R_pos) * t.q2_tail;
  return t;
}

/// Budget heuristic: twice the Laurent order reaching 1e-10, capped at 24.
inline int default_budget(const AnnulusRational& f) {
  return std::min(24, 2 * order_for_tolerance(f, 1e-10, 1.0, 1.0 / f.r, 1 << 12));
}

struct ModelVerification {
  double residual = 0.0;       // max_h ||f(T)h - V* RHS V h||
  TailReport tail;
  double flip_residual = 0.0;  // max entry of |q2(FNF) - F q2(N) F|
};

namespace detail {

/// max column norm of A
inline double max_column_norm(const ComplexMatrix& A) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < A.cols(); ++j) best = std::max(best, A.col(j).norm());
  return best;
}

inline ComplexMatrix poly_apply(const std::vector<cplx>& coeffs, const ComplexMatrix& A, const ComplexMatrix& X) {
  ComplexMatrix acc = ComplexMatrix::Zero(X.rows(), X.cols());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = A * acc + (*it) * X;
  return acc;
}

/// prod (A - beta) evaluated on each diagonal block of a 2x2 block-diagonal
/// matrix; off-diagonal blocks of the result are zero.
inline ComplexMatrix q2_blockwise(const std::vector<cplx>& roots, const ComplexMatrix& A, Eigen::Index half) {
  ComplexMatrix out = ComplexMatrix::Zero(A.rows(), A.cols());
  for (int blk = 0; blk < 2; ++blk) {
    const ComplexMatrix B = A.block(blk * half, blk * half, half, half);
    ComplexMatrix Q = identity(half);
    for (const auto& b : roots) Q = (B - b * identity(half)) * Q;
    out.block(blk * half, blk * half, half, half) = Q;
  }
  return out;
}

}  // namespace detail

/// F X F for the flip F = [[0, I], [I, 0]]: a block permutation, formed by
/// moving entries so that it is exact.
inline ComplexMatrix flip_conjugate(const ComplexMatrix& X) {
  const Eigen::Index k = X.rows() / 2;
  ComplexMatrix out(X.rows(), X.cols());
  out.topLeftCorner(k, k) = X.bottomRightCorner(k, k);
  out.topRightCorner(k, k) = X.bottomLeftCorner(k, k);
  out.bottomLeftCorner(k, k) = X.topRightCorner(k, k);
  out.bottomRightCorner(k, k) = X.topLeftCorner(k, k);
  return out;
}

/// True when F is exactly the block flip, F = F* and F^2 = I entrywise.
inline bool flip_is_exact(const ComplexMatrix& F) {
  if (F.rows() != F.cols() || F.rows() % 2 != 0) return false;
  const Eigen::Index k = F.rows() / 2;
  ComplexMatrix F2(F.rows(), F.cols());  // F applied to F as a row-block swap
  F2.topRows(k) = F.bottomRows(k);
  F2.bottomRows(k) = F.topRows(k);
  return F == flip_matrix(F.rows() / 2) && F == ComplexMatrix(F.adjoint()) && F2 == identity(F.rows());
}

/// The flip identity q2(FNF) = F q2(N) F, with q2 evaluated blockwise on
/// both sides. Returns the largest entrywise difference.
inline double flip_residual(const ModelTriple& model, const AnnulusRational& f) {
  const Eigen::Index k = model.carrier_dim();
  const ComplexMatrix FNF = flip_conjugate(model.N);
  const ComplexMatrix lhs = detail::q2_blockwise(f.q2_roots, FNF, k);
  const ComplexMatrix rhs = flip_conjugate(detail::q2_blockwise(f.q2_roots, model.N, k));
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

inline ModelVerification verify_model(const ModelTriple& model, const ComplexMatrix& T, const AnnulusRational& f,
                                      double tol_request = 1e-8, const Tolerances& tol = {},
                                      bool check_flip = true) {
  try {
    validate(f);
  } catch (const Error& e) {
    fail(Errc::InvalidRational, e.what());
  }
  if (f.r != model.r) fail(Errc::InvalidRational, "function and model use different r");
  if (model.embed.cols() != T.rows()) fail(Errc::DimensionMismatch, "model was built for a different space");

  ModelVerification out;
  const ComplexMatrix target = eval_direct(f, T, tol);
  const Eigen::Index n = T.rows();

  if (model.exact) {
    // Full-space evaluation: p(N) q1(N)^{-1} q2(FNF)^{-1}, with FNF formed by permutation.
    const Eigen::Index dim = model.N.rows();
    const ComplexMatrix I = identity(dim);
    const ComplexMatrix FNF = flip_conjugate(model.N);
    ComplexMatrix X = detail::poly_apply(f.p, model.N, model.V);
    for (const auto& a : f.q1_roots) X = solve(model.N - a * I, X, tol);
    for (const auto& b : f.q2_roots) X = solve(FNF - b * I, X, tol);
    X /= f.scale;
    out.residual = detail::max_column_norm(target - model.V.adjoint() * X);
  } else {
    out.tail = model_tail(f, T, model.d, tol);
    if (out.tail.bound > tol_request)
      fail(Errc::BudgetExceeded, "tail bound " + num(out.tail.bound) + " exceeds " +
                                     num(tol_request) + " at d = " + std::to_string(model.d));
    const int d = model.d;
    const auto q1 = outer_factor_series(f).coefficients(d);
    const auto q2 = inner_factor_series(f).coefficients(d);
    const ComplexMatrix& V1 = model.outer_carrier;
    const ComplexMatrix& V2 = model.inner_inverse_carrier;

    // q2(U2)^{-1} = sum_n q_{n2} U2^{-n} = sum_n q_{n2} r^{-n} V2^n, applied to V h
    ComplexMatrix Z = model.embed;
    ComplexMatrix X = q2[0] * Z;
    for (int j = 1; j <= d; ++j) {
      Z = (V2 * Z) / model.r;
      X += q2[static_cast<std::size_t>(j)] * Z;
    }
    // q1(U1)^{-1} / scale = sum_n q_{n1} V1^n
    ComplexMatrix Y = q1[0] * X;
    Z = X;
    for (int j = 1; j <= d; ++j) {
      Z = V1 * Z;
      Y += q1[static_cast<std::size_t>(j)] * Z;
    }
    const ComplexMatrix rhs = detail::poly_apply(f.p, V1, Y);
    out.residual = detail::max_column_norm(target - rhs.topRows(n));
  }
  if (check_flip) out.flip_residual = flip_residual(model, f);
  return out;
}

/// max over 0 <= j <= j_max of ||T^j - P_H V1^j|_H|| and
/// ||T^{-j} - r^{-j} P_H V2^j|_H||, each divided by max(1, ||T^{+-j}||).
/// Inverse powers reach ||T^{-1}||^j, far beyond 1 for small r, and only
/// their relative error is resolvable in double precision.
inline double verify_moments(const ModelTriple& model, const ComplexMatrix& T, int j_max, const Tolerances& tol = {}) {
  if (j_max > model.d)
    fail(Errc::BudgetExceeded, "j_max = " + std::to_string(j_max) + " exceeds budget d = " + std::to_string(model.d));
  const Eigen::Index n = T.rows();
  if (model.embed.cols() != n) fail(Errc::DimensionMismatch, "model was built for a different space");
  const ComplexMatrix Tinv = inverse(T, tol);
  ComplexMatrix up = identity(n), down = identity(n);
  ComplexMatrix Z1 = model.embed, Z2 = model.embed;
  double worst = 0.0;
  for (int j = 1; j <= j_max; ++j) {
    up = T * up;
    down = Tinv * down;
    Z1 = model.outer_carrier * Z1;
    Z2 = (model.inner_inverse_carrier * Z2) / model.r;
    worst = std::max(worst, operator_norm(up - model.embed.adjoint() * Z1) / std::max(1.0, operator_norm(up)));
    worst = std::max(worst, operator_norm(down - model.embed.adjoint() * Z2) / std::max(1.0, operator_norm(down)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Single-factor cases: only one carrier is needed

struct SingleCarrierVerification {
  double residual = 0.0;  // ||f(T) - P_H f(carrier) |H||
  int degree = 0;         // Egervary degree used
  double bound = 0.0;     // certified compression error 2 sum_{n>d} |c_n|
};

namespace detail {

/// Smallest d with 2 * sum_{n>d} |g_n| <= target for g = p / (scale q1), cap on d.
inline int taylor_degree(const AnnulusRational& g, double target, int cap, double& bound) {
  const auto series = outer_factor_series(g);
  auto tail = [&](int d) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.p.size(); ++k) s += std::abs(g.p[k]) * series.tail(d + 1 - static_cast<int>(k), 1.0);
    return 2.0 * s;
  };
  for (int d = 1; d <= cap; ++d) {
    bound = tail(d);
    if (bound <= target) return d;
  }
  fail(Errc::BudgetExceeded, "Egervary degree above " + std::to_string(cap) + " needed");
}

}  // namespace detail

/// g = p / q1: dilate T to a unitary U and compress g(U).
inline SingleCarrierVerification verify_outer_only(const ComplexMatrix& T, double r, const AnnulusRational& g,
                                                   const Tolerances& tol = {}, int cap = 400) {
  validate(g);
  if (!g.q2_roots.empty()) fail(Errc::InvalidRational, "outer-only verification takes g = p / q1");
  if (g.r != r) fail(Errc::InvalidRational, "function uses a different r");
  SingleCarrierVerification out;
  out.degree = detail::taylor_degree(g, 1e-11, cap, out.bound);
  const auto dil = egervary_dilation(T, out.degree, tol);
  const ComplexMatrix compressed = dil.embed.adjoint() * eval_direct(g, dil.U, tol) * dil.embed;
  out.residual = operator_norm(eval_direct(g, T, tol) - compressed);
  return out;
}

/// f = p / q2 with deg p <= deg q2: dilate S = rT^{-1} to a unitary U; then
/// N~ = rU* has spectrum on |z| = r and P_H f(N~)|H = P_H h(U)|H with
/// h(w) = f(r/w) holomorphic on the closed disk.
inline SingleCarrierVerification verify_inner_only(const ComplexMatrix& T, double r, const AnnulusRational& f,
                                                   const Tolerances& tol = {}, int cap = 400) {
  validate(f);
  if (!f.q1_roots.empty()) fail(Errc::InvalidRational, "inner-only verification takes f = p / q2");
  if (f.r != r) fail(Errc::InvalidRational, "function uses a different r");
  if (numerator_degree(f) > f.q2_roots.size())
    fail(Errc::InvalidRational, "inner-only verification needs deg p <= deg q2");
  const auto h = involute(f);
  SingleCarrierVerification out;
  out.degree = detail::taylor_degree(h, 1e-11, cap, out.bound);
  const ComplexMatrix S = involution(T, r, tol);
  const auto dil = egervary_dilation(S, out.degree, tol);
  const ComplexMatrix Ntilde = r * dil.U.adjoint();
  const ComplexMatrix compressed = dil.embed.adjoint() * eval_direct(f, Ntilde, tol) * dil.embed;
  out.residual = operator_norm(eval_direct(f, T, tol) - compressed);
  return out;
}

}  // namespace annulus

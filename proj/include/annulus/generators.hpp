#pragma once

// Seeded instance generators for the property suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "annulus/linalg.hpp"
#include "annulus/rational.hpp"
#include "annulus/rng.hpp"

namespace annulus::gen {

inline ComplexMatrix diag(const std::vector<cplx>& values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  ComplexMatrix D = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) D(i, i) = values[static_cast<std::size_t>(i)];
  return D;
}

inline ComplexMatrix conjugate(const ComplexMatrix& Q, const ComplexMatrix& D) { return Q * D * Q.adjoint(); }

/// The Example matrix [[sqrt r, 1 - r], [0, sqrt r]].
inline ComplexMatrix example_matrix(double r) {
  ComplexMatrix T(2, 2);
  T << std::sqrt(r), 1.0 - r, 0.0, std::sqrt(r);
  return T;
}

/// Normal matrix with eigenvalues in the closed annulus: each modulus is 1, r,
/// or log-uniform in between, with probability 1/4, 1/4, 1/2.
inline ComplexMatrix normal_in_annulus(Eigen::Index n, double r, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  std::vector<cplx> lambdas;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double m = u < 0.25 ? 1.0 : u < 0.5 ? r : std::exp(std::log(r) * rng.uniform());
    lambdas.push_back(m * rng.unit_phase());
  }
  return conjugate(random_unitary(n, derive_seed(seed, 1)), diag(lambdas));
}

/// Normal matrix with moduli in [r + margin(1 - r), 1 - margin(1 - r)].
inline ComplexMatrix normal_in_open_annulus(Eigen::Index n, double r, std::uint64_t seed, double margin = 0.1) {
  Rng rng(derive_seed(seed, 0));
  const double lo = r + margin * (1.0 - r), hi = 1.0 - margin * (1.0 - r);
  std::vector<cplx> lambdas;
  for (Eigen::Index i = 0; i < n; ++i) lambdas.push_back(rng.uniform(lo, hi) * rng.unit_phase());
  return conjugate(random_unitary(n, derive_seed(seed, 1)), diag(lambdas));
}

/// U diag(sigma) W* with singular values uniform in [r, 1]; T and rT^{-1} are
/// then both contractions.
inline ComplexMatrix singular_value_windowed(Eigen::Index n, double r, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  std::vector<cplx> sigma;
  for (Eigen::Index i = 0; i < n; ++i) sigma.emplace_back(rng.uniform(r, 1.0), 0.0);
  return random_unitary(n, derive_seed(seed, 1)) * diag(sigma) * random_unitary(n, derive_seed(seed, 2)).adjoint();
}

/// Random contraction with norm uniform in [0.3, 1].
inline ComplexMatrix contraction(Eigen::Index n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  const ComplexMatrix G = random_gaussian(n, n, derive_seed(seed, 1));
  return G * (rng.uniform(0.3, 1.0) / operator_norm(G));
}

/// Commuting contractions: T1 random, T2 a random quadratic polynomial in T1,
/// each rescaled to norm at most 1.
inline std::pair<ComplexMatrix, ComplexMatrix> commuting_pair(Eigen::Index n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  const ComplexMatrix T1 = contraction(n, derive_seed(seed, 1));
  ComplexMatrix T2 = rng.complex_normal() * identity(n) + rng.complex_normal() * T1 + rng.complex_normal() * (T1 * T1);
  T2 *= rng.uniform(0.3, 1.0) / std::max(operator_norm(T2), 1e-300);
  return {T1, T2};
}

struct ConjugatedArUnitary {
  ComplexMatrix N, Q, U1, U2;
};

/// N = Q diag(U1, r U2) Q*.
inline ConjugatedArUnitary conjugated_ar_unitary(Eigen::Index n1, Eigen::Index n2, double r, std::uint64_t seed) {
  ConjugatedArUnitary out;
  out.U1 = random_unitary(n1, derive_seed(seed, 0));
  out.U2 = random_unitary(n2, derive_seed(seed, 1));
  out.Q = random_unitary(n1 + n2, derive_seed(seed, 2));
  out.N = conjugate(out.Q, block_diag(out.U1, r * out.U2));
  return out;
}

struct RationalShape {
  int max_degree = 3;
  int max_outer = 3;
  int max_inner = 3;
  double outer_min = 1.2;        // |alpha| in [outer_min, outer_max]
  double outer_max = 4.0;
  double inner_min_frac = 0.0;   // |beta| / r in [inner_min_frac, inner_max_frac]
  double inner_max_frac = 0.8;
};

inline AnnulusRational rational(double r, std::uint64_t seed, const RationalShape& shape = {}) {
  Rng rng(derive_seed(seed, 0));
  AnnulusRational f;
  f.r = r;
  f.p.resize(static_cast<std::size_t>(rng.uniform_int(0, shape.max_degree) + 1));
  for (auto& c : f.p) c = rng.complex_normal();
  const int k1 = rng.uniform_int(0, shape.max_outer);
  const int k2 = rng.uniform_int(0, shape.max_inner);
  for (int j = 0; j < k1; ++j)
    f.q1_roots.push_back(std::exp(rng.uniform(std::log(shape.outer_min), std::log(shape.outer_max))) * rng.unit_phase());
  for (int i = 0; i < k2; ++i)
    f.q2_roots.push_back(r * rng.uniform(shape.inner_min_frac, shape.inner_max_frac) * rng.unit_phase());
  f.scale = rng.complex_normal();
  if (std::abs(f.scale) < 0.1) f.scale = 1.0;
  return f;
}

}  // namespace annulus::gen

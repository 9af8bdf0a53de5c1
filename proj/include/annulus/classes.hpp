#pragma once

// Certification of A_r-contractions: the necessary conditions (spectrum in the
// annulus, norm window, double contraction), randomized von Neumann stress
// tests, and the Williams refutation via the completely non-normal part.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "annulus/calculus.hpp"
#include "annulus/linalg.hpp"
#include "annulus/rational.hpp"
#include "annulus/rng.hpp"

namespace annulus {

inline bool spectrum_in_annulus(const ComplexMatrix& T, double r, const Tolerances& tol = {}) {
  require_square(T, "spectrum_in_annulus operand");
  for (const auto& lambda : eigenvalues(T, tol)) {
    const double m = std::abs(lambda);
    if (m < r - tol.verify_tol || m > 1.0 + tol.verify_tol) return false;
  }
  return true;
}

struct NormWindow {
  bool passes = false;
  double norm = 0.0;
};

inline NormWindow norm_window(const ComplexMatrix& T, double r, const Tolerances& tol = {}) {
  require_square(T, "norm_window operand");
  const double norm = operator_norm(T);
  return {norm >= r - tol.verify_tol && norm <= 1.0 + tol.verify_tol, norm};
}

/// rT^{-1}
inline ComplexMatrix involution(const ComplexMatrix& T, double r, const Tolerances& tol = {}) {
  require_square(T, "involution operand");
  try {
    return r * inverse(T, tol);
  } catch (const Error& e) {
    if (e.code() == Errc::Singular) fail(Errc::NotInvertible, "involution: T is not invertible");
    throw;
  }
}

inline bool double_contraction_check(const ComplexMatrix& T, double r, const Tolerances& tol = {}) {
  const ComplexMatrix S = involution(T, r, tol);
  return operator_norm(T) <= 1.0 + tol.verify_tol && operator_norm(S) <= 1.0 + tol.verify_tol;
}

// ---------------------------------------------------------------------------
// Test functions

struct TestFunction {
  AnnulusRational f;
  double sup = 0.0;  // boundary_sup_norm(f, 1024)
};

/// Trial t of the stress distribution. Even trials draw a Laurent polynomial
///   sum_{j=0..K} c_j z^j + sum_{j=1..K} c_{-j} (r/z)^j,  K uniform in {1,2,3},
/// stored with K poles at 0. Odd trials draw a rational function with
/// deg p in 0..3, up to 4 roots per factor, |alpha| = exp(U(0, ln 4]) and
/// |beta| = r exp(U[ln 1/4, 0)), arguments uniform; all coefficients CN(0, 1).
inline AnnulusRational stress_test_function(double r, std::uint64_t seed, std::uint64_t trial) {
  Rng rng(derive_seed(seed, trial));
  AnnulusRational f;
  f.r = r;
  if (trial % 2 == 0) {
    const int K = rng.uniform_int(1, 3);
    f.p.assign(static_cast<std::size_t>(2 * K + 1), cplx{});
    for (int i = 0; i <= 2 * K; ++i) {
      const cplx c = rng.complex_normal();
      f.p[static_cast<std::size_t>(i)] = i < K ? c * std::pow(r, K - i) : c;
    }
    f.q2_roots.assign(static_cast<std::size_t>(K), cplx{});
    return f;
  }
  const int deg = rng.uniform_int(0, 3);
  f.p.resize(static_cast<std::size_t>(deg + 1));
  for (auto& c : f.p) c = rng.complex_normal();
  const int k1 = rng.uniform_int(0, 4);
  const int k2 = rng.uniform_int(0, 4);
  const double ln4 = std::log(4.0);
  for (int j = 0; j < k1; ++j) f.q1_roots.push_back(std::exp(ln4 * (1.0 - rng.uniform())) * rng.unit_phase());
  for (int i = 0; i < k2; ++i) f.q2_roots.push_back(r * std::exp(-ln4 * (1.0 - rng.uniform())) * rng.unit_phase());
  return f;
}

using TestBattery = std::vector<TestFunction>;

inline TestBattery make_test_battery(double r, int trials, std::uint64_t seed) {
  TestBattery battery;
  battery.reserve(static_cast<std::size_t>(std::max(trials, 0)));
  for (int t = 0; t < trials; ++t) {
    auto f = stress_test_function(r, seed, static_cast<std::uint64_t>(t));
    const double sup = boundary_sup_norm(f, 1024);
    battery.push_back({std::move(f), sup});
  }
  return battery;
}

/// The battery composed with z -> r/z, sup norms recomputed.
inline TestBattery involuted_battery(const TestBattery& battery) {
  TestBattery out;
  out.reserve(battery.size());
  for (const auto& item : battery) {
    auto g = involute(item.f);
    const double sup = boundary_sup_norm(g, 1024);
    out.push_back({std::move(g), sup});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

enum class Verdict { Refuted, PassedNecessary, PassedStress, WilliamsRefuted };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Refuted: return "Refuted";
    case Verdict::PassedNecessary: return "PassedNecessary";
    case Verdict::PassedStress: return "PassedStress";
    case Verdict::WilliamsRefuted: return "WilliamsRefuted";
  }
  return "Unknown";
}

struct CertificationReport {
  Verdict verdict = Verdict::PassedNecessary;
  double r = 0.5;
  double norm_T = 0.0;
  double norm_rTinv = 0.0;  // +inf for singular T
  bool spectrum_ok = false;
  int trials = 0;
  double max_ratio = 0.0;
  std::optional<AnnulusRational> witness;
  std::optional<int> witness_trial;  // stress trial that produced the witness
  std::uint64_t seed = 0;
};

inline int stress_threads() {
  int cap = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("ANNULUS_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) cap = std::min<long>(cap, v);
  }
  return cap;
}

namespace detail {

struct StressPartial {
  double max_ratio = 0.0;
  int argmax = -1;
};

inline StressPartial stress_range(const ComplexMatrix& T, const TestBattery& battery, std::size_t lo, std::size_t hi,
                                  const Tolerances& tol) {
  StressPartial part;
  for (std::size_t t = lo; t < hi; ++t) {
    const auto& item = battery[t];
    const double ratio = operator_norm(eval_direct(item.f, T, tol)) / item.sup;
    if (ratio > part.max_ratio) {
      part.max_ratio = ratio;
      part.argmax = static_cast<int>(t);
    }
  }
  return part;
}

}  // namespace detail

/// Runs T against a precomputed battery. The max ratio and its first
/// attaining trial do not depend on the thread count.
inline CertificationReport vonneumann_stress(const ComplexMatrix& T, double r, const TestBattery& battery,
                                             std::uint64_t seed, const Tolerances& tol = {}) {
  require_square(T, "vonneumann_stress operand");
  CertificationReport rep;
  rep.r = r;
  rep.seed = seed;
  rep.trials = static_cast<int>(battery.size());
  rep.norm_T = operator_norm(T);
  rep.spectrum_ok = spectrum_in_annulus(T, r, tol);
  rep.norm_rTinv = operator_norm(involution(T, r, tol));

  const std::size_t total = battery.size();
  const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(stress_threads()),
                                                             std::max<std::size_t>(total / 64, 1)));
  std::vector<detail::StressPartial> parts(static_cast<std::size_t>(threads));
  if (threads == 1) {
    parts[0] = detail::stress_range(T, battery, 0, total, tol);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int k = 0; k < threads; ++k) {
      const std::size_t lo = total * static_cast<std::size_t>(k) / static_cast<std::size_t>(threads);
      const std::size_t hi = total * static_cast<std::size_t>(k + 1) / static_cast<std::size_t>(threads);
      pool.emplace_back([&, k, lo, hi] {
        try {
          parts[static_cast<std::size_t>(k)] = detail::stress_range(T, battery, lo, hi, tol);
        } catch (...) {
          errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (const auto& part : parts)
    if (part.max_ratio > rep.max_ratio) {
      rep.max_ratio = part.max_ratio;
      rep.witness_trial = part.argmax;
    }

  if (rep.max_ratio > 1.0 + tol.verify_tol) {
    rep.verdict = Verdict::Refuted;
    rep.witness = battery[static_cast<std::size_t>(*rep.witness_trial)].f;
  } else {
    rep.verdict = Verdict::PassedStress;
    rep.witness_trial.reset();
  }
  return rep;
}

inline CertificationReport vonneumann_stress(const ComplexMatrix& T, double r, int trials, std::uint64_t seed,
                                             const Tolerances& tol = {}) {
  return vonneumann_stress(T, r, make_test_battery(r, trials, seed), seed, tol);
}

// ---------------------------------------------------------------------------
// Normal / completely non-normal split

struct CnnSplit {
  ComplexMatrix P_normal;
  ComplexMatrix P_cnn;
};

/// ran(P_cnn) is the smallest subspace containing ran(T*T - TT*) and
/// invariant under T and T*, found by Krylov closure.
inline CnnSplit cnn_split(const ComplexMatrix& T, const Tolerances& tol = {}) {
  require_square(T, "cnn_split operand");
  const Eigen::Index n = T.rows();
  const double scale = std::max(1.0, operator_norm(T));
  const ComplexMatrix C = T.adjoint() * T - T * T.adjoint();
  ComplexMatrix B = range_basis(C, tol.rank_tol * scale * scale);
  for (Eigen::Index it = 0;; ++it) {
    if (it > n + 1) fail(Errc::NoConvergence, "cnn_split: Krylov closure did not stabilize");
    if (B.cols() == 0 || B.cols() == n) break;
    ComplexMatrix S(n, 3 * B.cols());
    S << B, T * B, T.adjoint() * B;
    ComplexMatrix next = range_basis(S, tol.rank_tol * scale);
    const bool stable = next.cols() == B.cols();
    B = std::move(next);
    if (stable) break;
  }
  CnnSplit out;
  out.P_cnn = B.cols() == n ? identity(n) : ComplexMatrix(B * B.adjoint());
  out.P_normal = identity(n) - out.P_cnn;
  return out;
}

enum class WilliamsVerdict { NotApplicable, MinimalDiskRefutation };

inline const char* to_string(WilliamsVerdict v) {
  return v == WilliamsVerdict::MinimalDiskRefutation ? "MinimalDiskRefutation" : "NotApplicable";
}

/// A completely non-normal matrix of norm one has the closed unit disk as a
/// minimal spectral set, so no proper subset (in particular no annulus) is
/// a spectral set for it.
inline WilliamsVerdict williams_verdict(const ComplexMatrix& T, double /*r*/, const Tolerances& tol = {}) {
  require_square(T, "williams_verdict operand");
  if (T.rows() == 0) return WilliamsVerdict::NotApplicable;
  if (std::abs(operator_norm(T) - 1.0) > tol.verify_tol) return WilliamsVerdict::NotApplicable;
  const auto split = cnn_split(T, tol);
  if (operator_norm(split.P_cnn - identity(T.rows())) > tol.verify_tol) return WilliamsVerdict::NotApplicable;
  return WilliamsVerdict::MinimalDiskRefutation;
}

// ---------------------------------------------------------------------------
// Composite certification

namespace detail {

/// A function exhibiting the failure of a necessary condition, with its ratio.
inline std::pair<AnnulusRational, double> necessary_witness(const ComplexMatrix& T, double r, double norm_T,
                                                            double norm_rTinv, const Tolerances& tol) {
  if (std::isfinite(norm_rTinv) && norm_rTinv >= norm_T) {
    AnnulusRational g;  // r / z
    g.r = r;
    g.p = {cplx{r, 0.0}};
    g.q2_roots = {cplx{}};
    return {g, norm_rTinv};
  }
  if (std::isfinite(norm_rTinv)) return {polynomial(r, {cplx{}, cplx{1.0, 0.0}}), norm_T};
  // singular T: r / (z - beta) with a small beta avoiding the spectrum
  for (int k = 0; k < 16; ++k) {
    AnnulusRational g;
    g.r = r;
    g.p = {cplx{r, 0.0}};
    g.q2_roots = {std::polar(0.25 * r, 0.7 + 0.37 * k)};
    try {
      const double ratio = operator_norm(eval_direct(g, T, tol)) / boundary_sup_norm(g, 1024);
      return {g, ratio};
    } catch (const Error&) {
    }
  }
  return {polynomial(r, {cplx{}, cplx{1.0, 0.0}}), norm_T};
}

}  // namespace detail

/// Necessary conditions first, then the stress battery, then Williams.
inline CertificationReport certify(const ComplexMatrix& T, double r, const TestBattery& battery, std::uint64_t seed,
                                   const Tolerances& tol = {}) {
  require_square(T, "certify operand");
  if (!(r > 0.0 && r < 1.0)) fail(Errc::BadRadius, "r = " + num(r));
  CertificationReport rep;
  rep.r = r;
  rep.seed = seed;
  rep.norm_T = operator_norm(T);
  rep.spectrum_ok = spectrum_in_annulus(T, r, tol);
  try {
    rep.norm_rTinv = operator_norm(involution(T, r, tol));
  } catch (const Error&) {
    rep.norm_rTinv = std::numeric_limits<double>::infinity();
  }

  const bool necessary = rep.spectrum_ok && rep.norm_T <= 1.0 + tol.verify_tol && rep.norm_rTinv <= 1.0 + tol.verify_tol;
  if (!necessary) {
    auto [g, ratio] = detail::necessary_witness(T, r, rep.norm_T, rep.norm_rTinv, tol);
    rep.verdict = Verdict::Refuted;
    rep.witness = std::move(g);
    rep.max_ratio = ratio;
    return rep;
  }
  if (!battery.empty()) {
    auto stress = vonneumann_stress(T, r, battery, seed, tol);
    if (stress.verdict == Verdict::Refuted) return stress;
    rep.trials = stress.trials;
    rep.max_ratio = stress.max_ratio;
  }
  if (williams_verdict(T, r, tol) == WilliamsVerdict::MinimalDiskRefutation) {
    rep.verdict = Verdict::WilliamsRefuted;
    return rep;
  }
  rep.verdict = battery.empty() ? Verdict::PassedNecessary : Verdict::PassedStress;
  return rep;
}

inline CertificationReport certify(const ComplexMatrix& T, double r, int trials, std::uint64_t seed,
                                   const Tolerances& tol = {}) {
  return certify(T, r, make_test_battery(r, trials, seed), seed, tol);
}

}  // namespace annulus

#pragma once

// Rational functional calculus f(T) by three independent routes: direct
// factor solves, the truncated Laurent series, and trapezoidal quadrature of
// the resolvent over the two-circle cycle bounding {r - delta <= |z| <= 1 + delta}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "annulus/laurent.hpp"
#include "annulus/linalg.hpp"
#include "annulus/rational.hpp"

namespace annulus {

struct ContourSpec {
  double delta = 0.05;
  int nodes = 512;
};

enum class SpectralPart { Outer, Inner };

/// p(T) q1(T)^{-1} q2(T)^{-1} / scale. The factors are polynomials in T and
/// commute, so each root is divided out by one solve.
inline ComplexMatrix eval_direct(const AnnulusRational& f, const ComplexMatrix& T, const Tolerances& tol = {}) {
  require_square(T, "eval_direct operand");
  const Eigen::Index n = T.rows();
  const ComplexMatrix I = identity(n);
  ComplexMatrix X = ComplexMatrix::Zero(n, n);
  for (auto it = f.p.rbegin(); it != f.p.rend(); ++it) X = T * X + (*it) * I;
  for (const auto& a : f.q1_roots) X = solve(T - a * I, X, tol);
  for (const auto& b : f.q2_roots) X = solve(T - b * I, X, tol);
  return X / f.scale;
}

struct LaurentEvaluation {
  ComplexMatrix value;
  double bound = 0.0;  // certified bound on ||value - f(T)||
  int order = 0;
};

/// sum_{|j|<=M} f_j T^j with powers and inverse powers built incrementally.
/// The bound uses ||T|| and ||T^{-1}|| as the radii of the two factor series.
inline LaurentEvaluation eval_laurent(const AnnulusRational& f, const ComplexMatrix& T, int M,
                                      const Tolerances& tol = {}) {
  require_square(T, "eval_laurent operand");
  const Eigen::Index n = T.rows();
  ComplexMatrix Tinv;
  try {
    Tinv = inverse(T, tol);
  } catch (const Error& e) {
    if (e.code() == Errc::Singular) fail(Errc::NotInvertible, "eval_laurent: T is not invertible");
    throw;
  }
  const double norm_T = operator_norm(T);
  const double norm_inv = operator_norm(Tinv);
  if (norm_T > 1.0 + tol.verify_tol || f.r * norm_inv > 1.0 + tol.verify_tol)
    fail(Errc::SeriesDivergent, "||T|| = " + std::to_string(norm_T) + ", ||rT^-1|| = " + std::to_string(f.r * norm_inv));

  const auto series = laurent_expand(f, M);
  LaurentEvaluation out;
  out.order = M;
  out.value = series.coeff(0) * identity(n);
  ComplexMatrix up = identity(n);
  ComplexMatrix down = identity(n);
  for (int j = 1; j <= M; ++j) {
    up = T * up;
    down = Tinv * down;
    out.value += series.coeff(j) * up + series.coeff(-j) * down;
  }
  out.bound = truncation_bound(f, M, norm_T, norm_inv).bound;
  return out;
}

/// Default margin: half the smallest of the pole clearances and r.
inline ContourSpec default_contour(const AnnulusRational& f, int nodes = 512) {
  double delta = 0.5 * f.r;
  for (const auto& a : f.q1_roots) delta = std::min(delta, 0.5 * (std::abs(a) - 1.0));
  for (const auto& b : f.q2_roots) delta = std::min(delta, 0.5 * (f.r - std::abs(b)));
  return {delta, nodes};
}

namespace detail {

/// (1/n) sum_k g(w_k) w_k (w_k - T)^{-1} over the circle |w| = radius, the
/// trapezoid rule for (1/2 pi i) \oint g(w) (w - T)^{-1} dw.
template <class Weight>
ComplexMatrix circle_resolvent_integral(const ComplexMatrix& T, double radius, int nodes, Weight&& weight,
                                        const Tolerances& tol) {
  const Eigen::Index n = T.rows();
  const ComplexMatrix I = identity(n);
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < nodes; ++k) {
    const cplx w = std::polar(radius, 2.0 * std::numbers::pi * k / nodes);
    acc += (weight(w) * w) * solve(w * I - T, I, tol);
  }
  return acc / static_cast<double>(nodes);
}

inline void check_contour_spec(const ContourSpec& spec, double r) {
  if (!(spec.delta > 0.0) || !(spec.delta < r))
    fail(Errc::SpectrumOnContour, "contour margin delta = " + num(spec.delta) + " must lie in (0, r)");
  if (spec.nodes < 1) fail(Errc::SpectrumOnContour, "contour needs at least one node");
}

}  // namespace detail

inline ComplexMatrix eval_contour(const AnnulusRational& f, const ComplexMatrix& T, const ContourSpec& spec,
                                  const Tolerances& tol = {}) {
  require_square(T, "eval_contour operand");
  validate(f);
  detail::check_contour_spec(spec, f.r);
  const double outer = 1.0 + spec.delta;
  const double inner = f.r - spec.delta;
  for (const auto& a : f.q1_roots)
    if (std::abs(a) <= outer) fail(Errc::PoleInsideContour, "q1 root " + detail::fmt(a) + " inside outer circle");
  for (const auto& b : f.q2_roots)
    if (std::abs(b) >= inner) fail(Errc::PoleInsideContour, "q2 root " + detail::fmt(b) + " outside inner circle");

  const auto spectrum = eigenvalues(T, tol);
  const double margin = 1e-3 * spec.delta;
  for (const auto& lambda : spectrum)
    if (std::abs(lambda) >= outer - margin || std::abs(lambda) <= inner + margin)
      fail(Errc::SpectrumOnContour, "eigenvalue " + detail::fmt(lambda) + " not inside the contour region");

  auto g = [&](cplx w) { return eval(f, w); };
  return detail::circle_resolvent_integral(T, outer, spec.nodes, g, tol) -
         detail::circle_resolvent_integral(T, inner, spec.nodes, g, tol);
}

/// Riesz projection onto the spectral part near |z| = 1 (Outer) or near
/// |z| = r (Inner). Eigenvalues are split at modulus sqrt(r); the inner part
/// is integrated over the circle through the middle of the gap.
inline ComplexMatrix riesz_projection(const ComplexMatrix& T, double r, SpectralPart part, const ContourSpec& spec,
                                      const Tolerances& tol = {}) {
  require_square(T, "riesz_projection operand");
  if (!(r > 0.0 && r < 1.0)) fail(Errc::BadRadius, "r = " + num(r));
  detail::check_contour_spec(spec, r);
  const Eigen::Index n = T.rows();
  const auto spectrum = eigenvalues(T, tol);
  const double split = std::sqrt(r);
  double min_outer = std::numeric_limits<double>::infinity();
  double max_inner = 0.0;
  bool has_outer = false, has_inner = false;
  for (const auto& lambda : spectrum) {
    const double m = std::abs(lambda);
    if (m > 1.0 + spec.delta * (1.0 - 1e-3))
      fail(Errc::SpectrumOnContour, "eigenvalue " + detail::fmt(lambda) + " outside the outer circle");
    if (m >= split) {
      has_outer = true;
      min_outer = std::min(min_outer, m);
    } else {
      has_inner = true;
      max_inner = std::max(max_inner, m);
    }
  }
  const ComplexMatrix I = identity(n);
  if (!has_inner) return part == SpectralPart::Outer ? I : ComplexMatrix(ComplexMatrix::Zero(n, n));
  if (!has_outer) return part == SpectralPart::Inner ? I : ComplexMatrix(ComplexMatrix::Zero(n, n));
  if (!(min_outer - max_inner > 2.0 * spec.delta))
    fail(Errc::NoSpectralGap, "gap " + num(min_outer - max_inner) + " <= 2 delta");

  const double middle = 0.5 * (min_outer + max_inner);
  auto one = [](cplx) { return cplx{1.0, 0.0}; };
  const ComplexMatrix inner_part = detail::circle_resolvent_integral(T, middle, spec.nodes, one, tol);
  if (part == SpectralPart::Inner) return inner_part;
  return detail::circle_resolvent_integral(T, 1.0 + spec.delta, spec.nodes, one, tol) - inner_part;
}

}  // namespace annulus

#pragma once

// Rational functions with poles off the closed annulus r <= |z| <= 1, kept in
// the factored form
//
//     f(z) = p(z) / (scale * prod_j (z - alpha_j) * prod_i (z - beta_i)),
//
// with |alpha_j| > 1 (outer poles, the zeros of q1) and |beta_i| < r (inner
// poles, the zeros of q2). Roots rather than expanded denominators are stored
// because the validity condition and every convergence rate read off them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "annulus/error.hpp"

namespace annulus {

using cplx = std::complex<double>;

struct AnnulusRational {
  double r = 0.5;
  std::vector<cplx> p{cplx{1.0, 0.0}};  // ascending powers
  std::vector<cplx> q1_roots;
  std::vector<cplx> q2_roots;
  cplx scale{1.0, 0.0};
};

namespace detail {

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline std::string fmt(cplx z) {
  return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

}  // namespace detail

inline void validate(const AnnulusRational& f) {
  if (!(f.r > 0.0 && f.r < 1.0)) fail(Errc::BadRadius, "r = " + std::to_string(f.r) + " not in (0, 1)");
  if (f.p.empty()) fail(Errc::InvalidRational, "numerator has no coefficients");
  if (!detail::finite(f.scale) || f.scale == cplx{}) fail(Errc::InvalidRational, "scale must be finite and nonzero");
  for (const auto& c : f.p)
    if (!detail::finite(c)) fail(Errc::InvalidRational, "non-finite numerator coefficient");
  for (const auto& a : f.q1_roots)
    if (!detail::finite(a) || std::abs(a) <= 1.0)
      fail(Errc::RootInClosedDisk, "q1 root " + detail::fmt(a) + " has modulus <= 1");
  for (const auto& b : f.q2_roots)
    if (!detail::finite(b) || std::abs(b) >= f.r)
      fail(Errc::RootOutsideInnerDisk, "q2 root " + detail::fmt(b) + " has modulus >= r");
}

inline bool is_valid(const AnnulusRational& f) {
  try {
    validate(f);
    return true;
  } catch (const Error&) {
    return false;
  }
}

inline cplx horner(const std::vector<cplx>& coeffs, cplx z) {
  cplx acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

/// Index of the highest nonzero numerator coefficient (0 for the zero polynomial).
inline std::size_t numerator_degree(const AnnulusRational& f) {
  std::size_t d = f.p.size();
  while (d > 1 && f.p[d - 1] == cplx{}) --d;
  return d - 1;
}

inline bool is_polynomial(const AnnulusRational& f) { return f.q1_roots.empty() && f.q2_roots.empty(); }

inline cplx eval(const AnnulusRational& f, cplx z) {
  constexpr double pole_tol = 1e-14;
  cplx denom = f.scale;
  for (const auto& a : f.q1_roots) {
    if (std::abs(z - a) <= pole_tol * std::max(1.0, std::abs(a))) fail(Errc::PoleHit, "z at q1 root " + detail::fmt(a));
    denom *= (z - a);
  }
  for (const auto& b : f.q2_roots) {
    if (std::abs(z - b) <= pole_tol * std::max(1.0, std::abs(b))) fail(Errc::PoleHit, "z at q2 root " + detail::fmt(b));
    denom *= (z - b);
  }
  return horner(f.p, z) / denom;
}

inline std::vector<cplx> poly_multiply(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<cplx> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

/// Pointwise product, kept in canonical form (root lists concatenated).
inline AnnulusRational multiply(const AnnulusRational& f, const AnnulusRational& g) {
  if (f.r != g.r) fail(Errc::InvalidRational, "multiply: inner radii differ");
  AnnulusRational h;
  h.r = f.r;
  h.p = poly_multiply(f.p, g.p);
  h.q1_roots = f.q1_roots;
  h.q1_roots.insert(h.q1_roots.end(), g.q1_roots.begin(), g.q1_roots.end());
  h.q2_roots = f.q2_roots;
  h.q2_roots.insert(h.q2_roots.end(), g.q2_roots.begin(), g.q2_roots.end());
  h.scale = f.scale * g.scale;
  return h;
}

inline AnnulusRational polynomial(double r, std::vector<cplx> coeffs) {
  AnnulusRational f;
  f.r = r;
  f.p = std::move(coeffs);
  return f;
}

/// g(z) = f(r/z), rewritten in canonical form. The annulus automorphism
/// z -> r/z sends outer poles alpha to r/alpha (inside rD) and inner poles
/// beta != 0 to r/beta (outside the closed disk); a pole at 0 becomes a
/// factor z in the numerator. Net powers of z are rebalanced into p or into
/// extra poles at 0.
inline AnnulusRational involute(const AnnulusRational& f) {
  try {
    validate(f);
  } catch (const Error& e) {
    fail(Errc::InvalidRational, e.what());
  }
  const double r = f.r;
  const std::size_t d = numerator_degree(f);

  // p(r/z) = z^{-d} * sum_k p_k r^k z^{d-k}
  std::vector<cplx> flipped(d + 1);
  double rk = 1.0;
  for (std::size_t k = 0; k <= d; ++k, rk *= r) flipped[d - k] = f.p[k] * rk;

  AnnulusRational g;
  g.r = r;
  cplx scale = f.scale;
  // (r/z - alpha) = -alpha z^{-1} (z - r/alpha)
  for (const auto& a : f.q1_roots) {
    scale *= -a;
    g.q2_roots.push_back(r / a);
  }
  // (r/z - beta) = -beta z^{-1} (z - r/beta) for beta != 0, and r z^{-1} for beta = 0
  for (const auto& b : f.q2_roots) {
    if (b == cplx{}) {
      scale *= r;
    } else {
      scale *= -b;
      g.q1_roots.push_back(r / b);
    }
  }
  const long shift = static_cast<long>(f.q1_roots.size() + f.q2_roots.size()) - static_cast<long>(d);
  if (shift >= 0) {
    g.p.assign(static_cast<std::size_t>(shift), cplx{});
    g.p.insert(g.p.end(), flipped.begin(), flipped.end());
  } else {
    g.p = std::move(flipped);
    g.q2_roots.insert(g.q2_roots.end(), static_cast<std::size_t>(-shift), cplx{});
  }
  g.scale = scale;
  return g;
}

namespace detail {

inline double circle_modulus(const AnnulusRational& f, double radius, double theta) {
  return std::abs(eval(f, std::polar(radius, theta)));
}

/// Golden-section maximization of |f(radius e^{i theta})| on [lo, hi].
inline double refine_peak(const AnnulusRational& f, double radius, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = circle_modulus(f, radius, x1);
  double f2 = circle_modulus(f, radius, x2);
  double best = std::max(f1, f2);
  for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = circle_modulus(f, radius, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = circle_modulus(f, radius, x1);
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

inline double circle_sup(const AnnulusRational& f, double radius, int nodes) {
  const double step = 2.0 * std::numbers::pi / nodes;
  std::vector<double> vals(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) vals[static_cast<std::size_t>(k)] = circle_modulus(f, radius, k * step);
  double best = *std::max_element(vals.begin(), vals.end());

  // Polish the largest sampled local maxima; every value produced is still a
  // genuine sample of |f| on the circle, so the result stays a lower bound.
  std::vector<int> peaks;
  for (int k = 0; k < nodes; ++k) {
    const double left = vals[static_cast<std::size_t>((k + nodes - 1) % nodes)];
    const double right = vals[static_cast<std::size_t>((k + 1) % nodes)];
    const double mid = vals[static_cast<std::size_t>(k)];
    if (mid >= left && mid >= right) peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) {
    return vals[static_cast<std::size_t>(a)] > vals[static_cast<std::size_t>(b)];
  });
  constexpr std::size_t max_polished = 8;
  for (std::size_t i = 0; i < std::min(peaks.size(), max_polished); ++i) {
    const double centre = peaks[i] * step;
    best = std::max(best, refine_peak(f, radius, centre - step, centre + step));
  }
  return best;
}

}  // namespace detail

/// Sampled sup of |f| over the two boundary circles |z| = 1 and |z| = r: a
/// lower bound on the sup over the closed annulus (maximum modulus).
/// `nodes` equispaced samples per circle starting at angle 0, with the
/// largest sampled local maxima polished by golden-section search.
inline double boundary_sup_norm(const AnnulusRational& f, int nodes = 1024) {
  validate(f);
  if (nodes < 64) fail(Errc::InvalidRational, "boundary_sup_norm needs at least 64 nodes");
  return std::max(detail::circle_sup(f, 1.0, nodes), detail::circle_sup(f, f.r, nodes));
}

}  // namespace annulus

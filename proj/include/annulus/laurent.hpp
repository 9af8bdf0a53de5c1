#pragma once

// Two-sided Laurent expansion of an AnnulusRational with certified tails.
//
// f = A(z) * B(z) where
//   A(z) = p(z) / (scale * prod (z - alpha_j)) = sum_{n>=0} a_n z^n   (|z| <= 1)
//   B(z) = 1 / prod (z - beta_i)               = sum_{n>=0} b_n z^{-n} (|z| >= r)
// Truncating both factors at order M gives sum_{|j|<=M} f_j z^j exactly
// (the Cauchy product of two degree-M pieces never leaves |j| <= M), and
//   |f - A_M B_M| <= tail(A) * sup|B| + sup|A| * tail(B).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "annulus/error.hpp"
#include "annulus/rational.hpp"

namespace annulus {

/// Power series c(x) = prefactor * x^shift * prod_i 1/(1 - ratio_i x), |ratio_i| < 1,
/// together with certified bounds on sum_{n>=m} |c_n| R^n.
class GeometricProductSeries {
 public:
  GeometricProductSeries() = default;

  GeometricProductSeries(cplx prefactor, int shift, std::vector<cplx> ratios)
      : prefactor_(prefactor), shift_(shift) {
    for (const auto& g : ratios)
      if (g != cplx{}) ratios_.push_back(g);
    for (const auto& g : ratios_) rate_ = std::max(rate_, std::abs(g));
    compute_partial_fraction_constant();
  }

  double rate() const { return rate_; }
  int shift() const { return shift_; }
  cplx prefactor() const { return prefactor_; }

  /// True when two ratios coincide to within 1e-9 (relative); the partial
  /// fraction constant is then computed after splitting them apart by 1e-9.
  bool clustered() const { return clustered_; }

  /// sum_i |e_i| where prod 1/(1 - g_i x) = sum_i e_i / (1 - g_i x).
  double partial_fraction_constant() const { return pf_constant_; }

  std::vector<cplx> coefficients(int n_max) const {
    std::vector<cplx> u(static_cast<std::size_t>(n_max + 1), cplx{});
    if (n_max < 0) return u;
    u[0] = 1.0;
    for (const auto& g : ratios_)
      for (int n = 1; n <= n_max; ++n) u[static_cast<std::size_t>(n)] += g * u[static_cast<std::size_t>(n - 1)];
    std::vector<cplx> c(static_cast<std::size_t>(n_max + 1), cplx{});
    for (int n = shift_; n <= n_max; ++n) c[static_cast<std::size_t>(n)] = prefactor_ * u[static_cast<std::size_t>(n - shift_)];
    return c;
  }

  /// Certified upper bound on sum_{n >= m} |c_n| R^n (infinite when the
  /// series diverges at radius R).
  double tail(int m, double radius = 1.0) const {
    const double lead = std::abs(prefactor_) * std::pow(radius, shift_);
    if (lead == 0.0) return 0.0;
    const int k0 = std::max(0, m - shift_);
    if (ratios_.empty()) return k0 == 0 ? lead : 0.0;
    const double rho = rate_ * radius;
    if (!(rho < 1.0)) return std::numeric_limits<double>::infinity();
    const double majorant = majorant_tail(k0, radius);
    if (clustered_) return lead * majorant;
    const double pf = pf_constant_ * std::pow(rho, k0) / (1.0 - rho);
    return lead * std::min(pf, majorant);
  }

  double total(double radius = 1.0) const { return tail(0, radius); }

 private:
  void compute_partial_fraction_constant() {
    std::vector<cplx> g = ratios_;
    const double sep = 1e-9;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(g[i] - g[j]) <= sep * std::max(std::abs(g[i]), std::abs(g[j]))) {
          clustered_ = true;
          g[i] *= 1.0 + sep * static_cast<double>(i + 1);
        }
    pf_constant_ = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      cplx e = 1.0;
      for (std::size_t j = 0; j < g.size(); ++j)
        if (j != i) e *= g[i] / (g[i] - g[j]);
      pf_constant_ += std::abs(e);
    }
  }

  /// sum_{k >= k0} mu_k where mu are the (nonnegative) coefficients of
  /// prod 1/(1 - |g_i| R x). Valid for any root multiplicities. The sum is
  /// taken explicitly up to a horizon N and the remainder is bounded by
  /// mu_k <= binom(k+m-1, m-1) rho^k, whose term ratio is decreasing in k.
  double majorant_tail(int k0, double radius) const {
    const int m = static_cast<int>(ratios_.size());
    const double rho = rate_ * radius;
    int horizon = std::max(k0 + 64, 256);
    for (;;) {
      const double q = (static_cast<double>(horizon + m) / (horizon + 1)) * rho;
      if (q < 1.0) {
        double log_term = horizon * std::log(rho);
        for (int i = 1; i < m; ++i) log_term += std::log(static_cast<double>(horizon + i) / i);
        const double remainder = std::exp(log_term) / (1.0 - q);
        if (remainder < 1e-300 || horizon > (1 << 22)) {
          std::vector<double> mu(static_cast<std::size_t>(horizon + 1), 0.0);
          mu[0] = 1.0;
          for (const auto& g : ratios_) {
            const double a = std::abs(g) * radius;
            for (int n = 1; n <= horizon; ++n) mu[static_cast<std::size_t>(n)] += a * mu[static_cast<std::size_t>(n - 1)];
          }
          double sum = remainder;
          for (int n = horizon; n >= k0; --n) sum += mu[static_cast<std::size_t>(n)];
          return sum;
        }
      }
      horizon *= 2;
    }
  }

  cplx prefactor_{1.0, 0.0};
  int shift_ = 0;
  std::vector<cplx> ratios_;
  double rate_ = 0.0;
  double pf_constant_ = 0.0;
  bool clustered_ = false;
};

/// Series of 1/(scale * q1(z)) in powers of z: prefactor prod(-1/alpha_j), ratios 1/alpha_j.
inline GeometricProductSeries outer_factor_series(const AnnulusRational& f) {
  cplx prefactor = 1.0 / f.scale;
  std::vector<cplx> ratios;
  for (const auto& a : f.q1_roots) {
    prefactor *= -1.0 / a;
    ratios.push_back(1.0 / a);
  }
  return {prefactor, 0, ratios};
}

/// Series of 1/q2(z) in powers of w = 1/z: 1/(z - beta) = w / (1 - beta w).
inline GeometricProductSeries inner_factor_series(const AnnulusRational& f) {
  return {1.0, static_cast<int>(f.q2_roots.size()), f.q2_roots};
}

struct LaurentSeries {
  double r = 0.5;
  int order = 0;                  // M
  std::vector<cplx> coeffs;       // f_j for j = -M..M, stored at index j + M
  std::vector<cplx> factor_pos;   // a_n, n = 0..M: p(z)/(scale q1(z))
  std::vector<cplx> factor_neg;   // b_n, n = 0..M: 1/q2(z) = sum b_n z^{-n}
  double rho1 = 0.0;              // 1 / min |alpha_j|
  double rho2 = 0.0;              // max |beta_i|
  double C1 = 0.0;
  double C2 = 0.0;
  double tail_bound = 0.0;        // sup over the closed annulus of |f - truncation|
  bool clustered_roots = false;

  cplx coeff(int j) const {
    if (j < -order || j > order) return {};
    return coeffs[static_cast<std::size_t>(j + order)];
  }
};

/// Certified sup-norm truncation bounds at radii |z| <= radius_pos and
/// |1/z| <= radius_neg. With radius_pos = 1 and radius_neg = 1/r this is the
/// scalar bound on the closed annulus; with operator norms ||T|| and ||T^{-1}||
/// it bounds ||f(T) - sum f_j T^j||.
struct TruncationBound {
  double pos_tail = 0.0;   // sum_{n>M} |a_n| R+^n
  double neg_tail = 0.0;   // sum_{n>M} |b_n| R-^n
  double pos_total = 0.0;  // sum_n |a_n| R+^n
  double neg_total = 0.0;  // sum_n |b_n| R-^n
  double bound = 0.0;
};

inline TruncationBound truncation_bound(const AnnulusRational& f, int M, double radius_pos, double radius_neg) {
  const auto outer = outer_factor_series(f);
  const auto inner = inner_factor_series(f);
  TruncationBound tb;
  double rk = 1.0;
  for (std::size_t k = 0; k < f.p.size(); ++k, rk *= radius_pos) {
    const double pk = std::abs(f.p[k]) * rk;
    if (pk == 0.0) continue;
    tb.pos_tail += pk * outer.tail(M + 1 - static_cast<int>(k), radius_pos);
    tb.pos_total += pk * outer.total(radius_pos);
  }
  tb.neg_tail = inner.tail(M + 1, radius_neg);
  tb.neg_total = inner.total(radius_neg);
  tb.bound = tb.pos_tail * tb.neg_total + tb.pos_total * tb.neg_tail;
  return tb;
}

inline LaurentSeries laurent_expand(const AnnulusRational& f, int M) {
  try {
    validate(f);
  } catch (const Error& e) {
    fail(Errc::InvalidRational, e.what());
  }
  if (M < 1) fail(Errc::InvalidRational, "Laurent order must be positive");

  const auto outer = outer_factor_series(f);
  const auto inner = inner_factor_series(f);

  LaurentSeries s;
  s.r = f.r;
  s.order = M;
  const auto q1_series = outer.coefficients(M);
  s.factor_pos.assign(static_cast<std::size_t>(M + 1), cplx{});
  for (int n = 0; n <= M; ++n)
    for (int k = 0; k <= std::min<int>(n, static_cast<int>(f.p.size()) - 1); ++k)
      s.factor_pos[static_cast<std::size_t>(n)] += f.p[static_cast<std::size_t>(k)] * q1_series[static_cast<std::size_t>(n - k)];
  s.factor_neg = inner.coefficients(M);

  s.coeffs.assign(static_cast<std::size_t>(2 * M + 1), cplx{});
  for (int n = 0; n <= M; ++n)
    for (int m = 0; m <= M; ++m)
      s.coeffs[static_cast<std::size_t>(n - m + M)] += s.factor_pos[static_cast<std::size_t>(n)] * s.factor_neg[static_cast<std::size_t>(m)];

  s.rho1 = outer.rate();
  s.rho2 = inner.rate();
  s.clustered_roots = outer.clustered() || inner.clustered();

  const auto tb = truncation_bound(f, M, 1.0, 1.0 / f.r);
  s.tail_bound = tb.bound;

  // Closed-form constants: tail_bound <= C1 rho1^{M+1}/(1-rho1) + C2 (rho2/r)^{M+1}/(1-rho2/r)
  // whenever the roots are simple and M >= deg p.
  if (s.rho1 > 0.0) {
    double weighted = 0.0;
    double rk = 1.0;
    for (const auto& pk : f.p) {
      weighted += std::abs(pk) / rk;
      rk *= s.rho1;
    }
    s.C1 = std::abs(outer.prefactor()) * outer.partial_fraction_constant() * weighted * tb.neg_total;
  }
  if (s.rho2 > 0.0) {
    const int l = static_cast<int>(f.q2_roots.size());
    s.C2 = inner.partial_fraction_constant() * std::pow(s.rho2, -l) * tb.pos_total;
  }
  return s;
}

inline cplx eval_truncation(const LaurentSeries& s, cplx z) {
  cplx acc{};
  for (int j = -s.order; j <= s.order; ++j) acc += s.coeff(j) * std::pow(z, j);
  return acc;
}

/// Smallest order M whose certified tail bound is at most `target`.
inline int order_for_tolerance(const AnnulusRational& f, double target, double radius_pos = 1.0,
                               double radius_neg = -1.0, int max_order = 1 << 16) {
  validate(f);
  if (radius_neg < 0.0) radius_neg = 1.0 / f.r;
  auto ok = [&](int M) { return truncation_bound(f, M, radius_pos, radius_neg).bound <= target; };
  int hi = 1;
  while (!ok(hi)) {
    if (hi >= max_order) fail(Errc::BudgetExceeded, "no Laurent order up to " + std::to_string(max_order) + " meets the target");
    hi = std::min(2 * hi, max_order);
  }
  int lo = hi / 2;  // ok(lo) false unless lo == 0
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace annulus

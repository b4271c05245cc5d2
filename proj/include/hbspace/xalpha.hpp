#pragma once

// Coefficient-weighted spaces X_alpha, the Cauchy pairing and the radial
// disk moments beta_n(alpha) = int_D |z|^{2n} (1-|z|^2)^{alpha-1} dA.

#include <cmath>
#include <vector>

#include "hbspace/core.hpp"

namespace hbspace {

/// sqrt(sum_n (n+1)^alpha |f_n|^2).
inline double xalpha_norm(const DiskSeries& f, double alpha) {
  std::vector<double> t(f.coefficients.size());
  for (std::size_t n = 0; n < t.size(); ++n)
    t[n] = std::pow(static_cast<double>(n + 1), alpha) * std::norm(f.coefficients[n]);
  return std::sqrt(pairwise_sum(t));
}

/// sum_n f_n conj(g_n).
inline complex cauchy_pairing(const DiskSeries& f, const DiskSeries& g) {
  const std::size_t n = std::min(f.coefficients.size(), g.coefficients.size());
  std::vector<complex> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = f.coefficients[k] * std::conj(g.coefficients[k]);
  return pairwise_sum(t);
}

namespace detail {

// log Gamma(x + a) - log Gamma(x) for x >= 40 by the Stirling series.
inline double stirling_gamma_difference(double x, double a) {
  auto correction = [](double y) {
    const double y2 = y * y;
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * y2)) / y2) / y2) / y;
  };
  return (x - 0.5) * std::log1p(a / x) + a * std::log(x + a) - a + correction(x + a) -
         correction(x);
}

}  // namespace detail

/// log Gamma(x + a) - log Gamma(x) for x > 0, a >= 0, without cancellation for large x.
inline double log_gamma_ratio(double x, double a) {
  if (!(x > 0.0) || !(a >= 0.0)) throw DomainError("log_gamma_ratio needs x > 0 and a >= 0");
  double shift = 0.0;
  while (x < 40.0) {
    // Gamma(x+a)/Gamma(x) = x/(x+a) * Gamma(x+1+a)/Gamma(x+1)
    shift += std::log1p(a / x);
    x += 1.0;
  }
  return detail::stirling_gamma_difference(x, a) - shift;
}

/// beta_n(alpha) with normalized area measure: n! Gamma(alpha) / Gamma(n + 1 + alpha).
inline double disk_moment(std::size_t n, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("disk_moment needs alpha > 0");
  // log n! - log Gamma(n+1+alpha) + log Gamma(alpha)
  //   = -[log Gamma(n+1+alpha) - log Gamma(n+1)] + log Gamma(alpha)
  const double x = static_cast<double>(n) + 1.0;
  return std::exp(std::lgamma(alpha) - log_gamma_ratio(x, alpha));
}

/// beta_0..beta_N by the recurrence beta_{n+1} = beta_n (n+1)/(n+1+alpha).
inline std::vector<double> disk_moments(std::size_t N, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("disk_moments needs alpha > 0");
  std::vector<double> b(N + 1);
  b[0] = 1.0 / alpha;
  for (std::size_t n = 0; n < N; ++n) {
    const double k = static_cast<double>(n + 1);
    b[n + 1] = b[n] * (k / (k + alpha));
  }
  return b;
}

struct NormEquivalence {
  double coefficient_sum = 0.0;  // sum (n+1)^-alpha |f_n|^2
  double moment_sum = 0.0;       // sum beta_n(alpha) |f_n|^2
  double ratio = 0.0;
  double lower = 0.0;  // min_n (n+1)^-alpha / beta_n over the support degrees
  double upper = 0.0;
};

inline NormEquivalence xminus_norm_equiv_check(const DiskSeries& f, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("xminus_norm_equiv_check needs alpha > 0");
  const std::size_t N = f.coefficients.size();
  std::vector<double> a(N), b(N);
  NormEquivalence r;
  r.lower = INFINITY;
  r.upper = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    const double w = std::pow(static_cast<double>(n + 1), -alpha);
    const double beta = disk_moment(n, alpha);
    a[n] = w * std::norm(f.coefficients[n]);
    b[n] = beta * std::norm(f.coefficients[n]);
    r.lower = std::min(r.lower, w / beta);
    r.upper = std::max(r.upper, w / beta);
  }
  r.coefficient_sum = pairwise_sum(a);
  r.moment_sum = pairwise_sum(b);
  r.ratio = r.moment_sum > 0.0 ? r.coefficient_sum / r.moment_sum : 0.0;
  return r;
}

}  // namespace hbspace

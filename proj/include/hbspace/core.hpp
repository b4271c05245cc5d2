#pragma once

// Shared value types, error hierarchy and deterministic reductions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hbspace {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Floor used wherever a logarithm of a vanishing weight is needed.
inline constexpr double log_floor_value = 1e-300;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (|z_k| >= 1, omega > 1, alpha <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested symbol cannot be represented (e.g. an outer function with log-modulus -inf).
class DegenerateSymbolError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a point where the requested function is singular.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A computed object violates an identity it must satisfy (PSD, |b| <= 1, ...).
class NumericalInconsistency : public Error {
 public:
  using Error::Error;
};

/// A precondition of a numerical experiment is not met; the caller should change inputs.
class Refusal : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Pairwise summation with a fixed split order: the result depends only on the
// input sequence, never on scheduling.
template <class T>
T pairwise_sum(std::span<const T> v) {
  if (v.size() <= 8) {
    T s{};
    for (const T& x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v));
}

inline bool is_finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Samples of a function on the M equispaced points exp(2 pi i k / M).
class BoundaryGrid {
 public:
  BoundaryGrid() = default;

  explicit BoundaryGrid(std::vector<complex> values) : values_(std::move(values)) {
    if (values_.size() < 4 || values_.size() % 2 != 0)
      throw DomainError("boundary grid size must be even and >= 4, got " +
                        std::to_string(values_.size()));
    for (const complex& z : values_)
      if (!is_finite(z)) throw DomainError("boundary grid contains a non-finite value");
  }

  template <class F>
  static BoundaryGrid sample(std::size_t M, F&& f) {
    std::vector<complex> v(M);
    for (std::size_t k = 0; k < M; ++k) v[k] = complex(f(theta(k, M)));
    return BoundaryGrid(std::move(v));
  }

  static double theta(std::size_t k, std::size_t M) {
    return two_pi * static_cast<double>(k) / static_cast<double>(M);
  }

  std::size_t size() const { return values_.size(); }
  double theta(std::size_t k) const { return theta(k, size()); }
  /// Position in turns (fraction of the circle).
  double turn(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(size()); }
  complex operator[](std::size_t k) const { return values_[k]; }
  std::span<const complex> values() const { return values_; }

  /// L^2(dm) norm via the trapezoid rule.
  double l2_norm() const {
    std::vector<double> sq(values_.size());
    for (std::size_t k = 0; k < values_.size(); ++k) sq[k] = std::norm(values_[k]);
    return std::sqrt(pairwise_sum(sq) / static_cast<double>(values_.size()));
  }

 private:
  std::vector<complex> values_;
};

/// Truncated Taylor series f_0 + f_1 z + ... + f_N z^N. The degree is a capacity.
struct DiskSeries {
  std::vector<complex> coefficients;

  DiskSeries() = default;
  explicit DiskSeries(std::vector<complex> c) : coefficients(std::move(c)) {
    for (const complex& z : coefficients)
      if (!is_finite(z)) throw DomainError("disk series contains a non-finite coefficient");
  }

  static DiskSeries monomial(std::size_t n, complex c = 1.0) {
    std::vector<complex> v(n + 1, 0.0);
    v[n] = c;
    return DiskSeries(std::move(v));
  }

  std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }

  complex operator[](std::size_t n) const {
    return n < coefficients.size() ? coefficients[n] : complex(0.0);
  }

  complex operator()(complex z) const {
    complex acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  double h2_norm() const {
    std::vector<double> sq(coefficients.size());
    for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = std::norm(coefficients[k]);
    return std::sqrt(pairwise_sum(sq));
  }
};

/// Product of two polynomials.
inline DiskSeries multiply(const DiskSeries& a, const DiskSeries& b) {
  if (a.coefficients.empty() || b.coefficients.empty()) return DiskSeries{};
  std::vector<complex> c(a.coefficients.size() + b.coefficients.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coefficients.size(); ++i)
    for (std::size_t j = 0; j < b.coefficients.size(); ++j)
      c[i + j] += a.coefficients[i] * b.coefficients[j];
  return DiskSeries(std::move(c));
}

/// Reduce an angle in turns to [0, 1).
inline double wrap_turn(double t) {
  double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;
}

/// Circular distance between two positions in turns, in [0, 1/2].
inline double turn_distance(double a, double b) {
  const double d = wrap_turn(a - b);
  return std::min(d, 1.0 - d);
}

}  // namespace hbspace

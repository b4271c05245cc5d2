#pragma once

// Discrete Fourier machinery on the uniform circle grid and the Riesz
// projections P_+ / P_-.
//
// Coefficient convention: c_k = (1/M) sum_j u(theta_j) exp(-i k theta_j), stored
// at index k mod M. Indices 0..M/2-1 are the nonnegative frequencies, indices
// M/2..M-1 stand for the negative frequencies -M/2..-1.

#include <unsupported/Eigen/FFT>

#include "hbspace/core.hpp"

namespace hbspace {

inline long signed_frequency(std::size_t index, std::size_t M) {
  return index < M / 2 ? static_cast<long>(index)
                       : static_cast<long>(index) - static_cast<long>(M);
}

inline std::size_t frequency_index(long k, std::size_t M) {
  const long m = static_cast<long>(M);
  long r = k % m;
  if (r < 0) r += m;
  return static_cast<std::size_t>(r);
}

/// Normalized forward transform of grid samples.
inline std::vector<complex> fourier_coefficients(std::span<const complex> samples) {
  std::vector<complex> in(samples.begin(), samples.end());
  std::vector<complex> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  const double scale = 1.0 / static_cast<double>(in.size());
  for (complex& c : out) c *= scale;
  return out;
}

inline std::vector<complex> fourier_coefficients(const BoundaryGrid& u) {
  return fourier_coefficients(u.values());
}

/// Fourier coefficients of real samples.
inline std::vector<complex> fourier_coefficients(std::span<const double> samples) {
  std::vector<complex> in(samples.begin(), samples.end());
  return fourier_coefficients(std::span<const complex>(in));
}

/// Inverse of fourier_coefficients: u(theta_j) = sum_k c_k exp(i k theta_j).
inline std::vector<complex> synthesize(std::span<const complex> coefficients) {
  std::vector<complex> in(coefficients.begin(), coefficients.end());
  std::vector<complex> out;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  fft.inv(out, in);
  return out;
}

/// Values of a Taylor series on the circle of radius r, sampled on the M-grid.
/// Coefficients of degree >= M fold onto their residue class (grid aliasing).
inline BoundaryGrid evaluate_on_grid(const DiskSeries& f, std::size_t M, double r = 1.0) {
  std::vector<complex> c(M, 0.0);
  double rn = 1.0;
  for (std::size_t n = 0; n < f.coefficients.size(); ++n) {
    c[n % M] += f.coefficients[n] * rn;
    rn *= r;
  }
  return BoundaryGrid(synthesize(c));
}

/// P_+ : keeps the frequencies 0..M/2-1 as Taylor coefficients.
inline DiskSeries hardy_project(const BoundaryGrid& u) {
  auto c = fourier_coefficients(u);
  c.resize(u.size() / 2);
  return DiskSeries(std::move(c));
}

/// P_- : coefficient of exp(-i k theta) at position k-1, for k = 1..M/2.
inline std::vector<complex> hardy_project_minus(const BoundaryGrid& u) {
  const auto c = fourier_coefficients(u);
  const std::size_t M = u.size();
  std::vector<complex> out(M / 2);
  for (std::size_t k = 1; k <= M / 2; ++k) out[k - 1] = c[M - k];
  return out;
}

/// Grid function P_+ u.
inline BoundaryGrid hardy_project_grid(const BoundaryGrid& u) {
  auto c = fourier_coefficients(u);
  for (std::size_t k = u.size() / 2; k < u.size(); ++k) c[k] = 0.0;
  return BoundaryGrid(synthesize(c));
}

/// Grid function P_- u = u - P_+ u.
inline BoundaryGrid hardy_project_minus_grid(const BoundaryGrid& u) {
  auto c = fourier_coefficients(u);
  for (std::size_t k = 0; k < u.size() / 2; ++k) c[k] = 0.0;
  return BoundaryGrid(synthesize(c));
}

/// l^2 norm of a coefficient vector (equals the L^2(dm) norm of the function).
inline double coefficient_norm(std::span<const complex> c) {
  std::vector<double> sq(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) sq[k] = std::norm(c[k]);
  return std::sqrt(pairwise_sum(sq));
}

/// Pointwise product of grid functions.
inline BoundaryGrid pointwise(const BoundaryGrid& a, const BoundaryGrid& b) {
  if (a.size() != b.size()) throw DomainError("grid size mismatch");
  std::vector<complex> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] * b[k];
  return BoundaryGrid(std::move(v));
}

inline BoundaryGrid conjugate(const BoundaryGrid& a) {
  std::vector<complex> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::conj(a[k]);
  return BoundaryGrid(std::move(v));
}

/// Trapezoid mean of a grid function, (1/M) sum_j u_j.
inline complex grid_mean(std::span<const complex> u) {
  return pairwise_sum(u) / static_cast<double>(u.size());
}

}  // namespace hbspace

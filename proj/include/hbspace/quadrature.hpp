#pragma once

// Gauss-Jacobi rules for the radial weight (1 - s)^(alpha - 1) on [0, 1] and
// the resulting product rule for int_D g (1 - |z|^2)^(alpha - 1) dA.

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "hbspace/core.hpp"

namespace hbspace {

struct RadialRule {
  std::vector<double> nodes;    // s in (0, 1)
  std::vector<double> weights;  // int_0^1 f(s) (1 - s)^(alpha - 1) ds ~ sum w_i f(s_i)
};

/// n-point Gauss rule for (1 - s)^(alpha - 1) ds on [0, 1] (Golub-Welsch).
inline RadialRule gauss_jacobi_rule(std::size_t n, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("radial weight needs alpha > 0");
  if (n == 0) throw DomainError("quadrature needs at least one node");
  // Jacobi weight (1 - x)^a (1 + x)^b on [-1, 1] with a = alpha - 1, b = 0
  const double a = alpha - 1.0;
  const double b = 0.0;
  Eigen::VectorXd diag(n), off(n > 1 ? n - 1 : 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + a + b;
    diag(k) = k == 0 ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double j = kk + 1.0;
      const double t = 2.0 * j + a + b;
      off(k) = std::sqrt(4.0 * j * (j + a) * (j + b) * (j + a + b) / (t * t * (t + 1.0) * (t - 1.0)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off.head(n > 1 ? n - 1 : 0), Eigen::ComputeEigenvectors);
  const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
  RadialRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double scale = std::pow(2.0, -a - 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = es.eigenvectors()(0, static_cast<Eigen::Index>(k));
    r.nodes[k] = 0.5 * (1.0 + es.eigenvalues()(static_cast<Eigen::Index>(k)));
    r.weights[k] = mu0 * v * v * scale;
  }
  return r;
}

/// int_D g(z) (1 - |z|^2)^(alpha - 1) dA(z), dA normalized, by n radial nodes
/// times P equispaced angles.
template <class G>
complex disk_integral(G&& g, double alpha, std::size_t n, std::size_t P) {
  const RadialRule rule = gauss_jacobi_rule(n, alpha);
  std::vector<complex> rings(n);
  std::vector<complex> ring(P);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::sqrt(rule.nodes[i]);
    for (std::size_t j = 0; j < P; ++j)
      ring[j] = g(std::polar(r, two_pi * static_cast<double>(j) / static_cast<double>(P)));
    rings[i] = rule.weights[i] * pairwise_sum(ring) / static_cast<double>(P);
  }
  return pairwise_sum(rings);
}

}  // namespace hbspace

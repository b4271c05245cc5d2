#pragma once

// The measure mu(b, alpha) = (1 - |z|^2)^(alpha - 1) dA + Delta^2 dm, the Gram
// matrix of monomials in P^2(mu), and distance sequences to polynomial spans.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hbspace/core.hpp"
#include "hbspace/fourier.hpp"
#include "hbspace/quadrature.hpp"
#include "hbspace/symbol.hpp"
#include "hbspace/xalpha.hpp"

namespace hbspace {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct MuMeasure {
  double alpha = 1.0;
  DeltaWeight delta;
  std::vector<complex> fourier_delta2;  // c(k) = int Delta^2 e^{-ik theta} dm at index k mod M
  std::size_t degree = 0;

  std::size_t grid_size() const { return fourier_delta2.size(); }
  complex c(long k) const { return fourier_delta2[frequency_index(k, grid_size())]; }
  double boundary_mass() const { return fourier_delta2[0].real(); }
};

inline std::size_t required_grid_size(std::size_t N) { return 4 * N + 4; }

inline MuMeasure build_mu(const DeltaWeight& delta, double alpha, std::size_t N) {
  if (!(alpha > 0.0)) throw DomainError("mu(b, alpha) needs alpha > 0");
  const std::size_t M = delta.size();
  if (M < required_grid_size(N))
    throw Refusal("grid of size " + std::to_string(M) + " undersamples degree " + std::to_string(N) +
                  "; need M >= " + std::to_string(required_grid_size(N)));
  MuMeasure mu;
  mu.alpha = alpha;
  mu.delta = delta;
  mu.degree = N;
  mu.fourier_delta2 = fourier_coefficients(std::span<const double>(delta.delta2));
  // exact Hermitian symmetry and a real mean for a real weight
  mu.fourier_delta2[0] = mu.fourier_delta2[0].real();
  for (std::size_t k = 1; k < M / 2; ++k) mu.fourier_delta2[M - k] = std::conj(mu.fourier_delta2[k]);
  mu.fourier_delta2[M / 2] = mu.fourier_delta2[M / 2].real();
  return mu;
}

struct MomentMatrix {
  std::size_t degree = 0;
  double alpha = 1.0;
  std::vector<double> beta;
  ComplexMatrix entries;  // entries(n, m) = <z^n, z^m>_mu
};

inline double min_eigenvalue(const ComplexMatrix& A) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline void require_psd(const ComplexMatrix& A, const std::string& what) {
  const double tr = A.trace().real();
  const double lo = min_eigenvalue(A);
  if (lo < -1e-8 * tr)
    throw NumericalInconsistency(what + " is not positive semidefinite (min eigenvalue " +
                                 std::to_string(lo) + ", trace " + std::to_string(tr) + ")");
}

/// G(n, m) = beta_n(alpha) delta_nm + c(m - n).
inline MomentMatrix gram_matrix(const MuMeasure& mu, std::size_t N) {
  if (mu.grid_size() < required_grid_size(N))
    throw Refusal("measure resolved to lag " + std::to_string(mu.grid_size() / 4) +
                  " only; rebuild with M >= " + std::to_string(required_grid_size(N)));
  MomentMatrix G;
  G.degree = N;
  G.alpha = mu.alpha;
  G.beta = disk_moments(N, mu.alpha);
  G.entries = ComplexMatrix::Zero(static_cast<Eigen::Index>(N + 1), static_cast<Eigen::Index>(N + 1));
  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t m = 0; m <= N; ++m)
      G.entries(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) =
          mu.c(static_cast<long>(m) - static_cast<long>(n));
  for (std::size_t n = 0; n <= N; ++n) G.entries(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) += G.beta[n];
  require_psd(G.entries, "moment matrix");
  return G;
}

// ---------------------------------------------------------------------------
// Distance sequences

struct DecayFit {
  double rate = 0.0;  // slope of log d_n against log n
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of the fit
  std::size_t points = 0;
};

/// Least squares fit of log d_n vs log n over the top half of the degrees.
inline std::optional<DecayFit> fit_decay(const std::vector<double>& d) {
  if (d.size() < 4) return std::nullopt;
  const std::size_t last = d.size() - 1;
  const std::size_t first = std::max<std::size_t>(1, last - last / 2);
  std::vector<double> xs, ys;
  for (std::size_t n = first; n <= last; ++n)
    if (d[n] > 0.0) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(d[n]));
    }
  if (xs.size() < 2) return std::nullopt;
  const double k = static_cast<double>(xs.size());
  const double mx = pairwise_sum(xs) / k;
  const double my = pairwise_sum(ys) / k;
  std::vector<double> sxy(xs.size()), sxx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy[i] = (xs[i] - mx) * (ys[i] - my);
    sxx[i] = (xs[i] - mx) * (xs[i] - mx);
  }
  DecayFit f;
  f.rate = pairwise_sum(sxy) / pairwise_sum(sxx);
  f.intercept = my - f.rate * mx;
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (f.intercept + f.rate * xs[i]);
    r[i] = e * e;
  }
  f.residual = std::sqrt(pairwise_sum(r) / k);
  f.points = xs.size();
  return f;
}

struct DistanceSequence {
  std::vector<double> values;  // d_0 >= d_1 >= ... >= d_N
  std::string target;
  double jitter = 0.0;
  int jitter_escalations = 0;
  double target_norm2 = 0.0;
  std::optional<DecayFit> fit;
};

/// d_n^2 = |t|^2 - min over span{z^0..z^n}, from G(n, m) = <v_n, v_m> and c_k = <t, v_k>.
inline DistanceSequence distance_to_poly_span(const ComplexMatrix& G, std::span<const complex> c,
                                              double target_norm2, std::string target = "target") {
  const Eigen::Index n1 = G.rows();
  if (G.cols() != n1 || static_cast<Eigen::Index>(c.size()) != n1)
    throw DomainError("Gram matrix and target moments disagree in size");
  if (!(target_norm2 >= 0.0)) throw DomainError("target norm must be nonnegative");
  DistanceSequence ds;
  ds.target = std::move(target);
  ds.target_norm2 = target_norm2;
  const double tr = G.trace().real();
  ds.jitter = tr > 0.0 ? 1e-12 * tr / static_cast<double>(n1) : 1e-300;
  Eigen::LLT<ComplexMatrix> llt;
  for (;;) {
    ComplexMatrix A = G;
    A.diagonal().array() += ds.jitter;
    llt.compute(A);
    if (llt.info() == Eigen::Success) break;
    if (++ds.jitter_escalations > 12) throw NumericalInconsistency("Cholesky failed after jitter escalation");
    ds.jitter *= 10.0;
  }
  ComplexVector rhs(n1);
  for (Eigen::Index k = 0; k < n1; ++k) rhs(k) = std::conj(c[static_cast<std::size_t>(k)]);
  const ComplexMatrix L = llt.matrixL();
  ds.values.resize(static_cast<std::size_t>(n1));
  double previous = target_norm2;
  for (Eigen::Index k = 0; k < n1; ++k) {
    // prefix solve with the jittered factor, then two refinement sweeps against G
    const Eigen::Index m = k + 1;
    const auto Lk = L.topLeftCorner(m, m).triangularView<Eigen::Lower>();
    auto solve = [&](const ComplexVector& b) -> ComplexVector {
      return Lk.adjoint().solve(Lk.solve(b));
    };
    const ComplexVector b = rhs.head(m);
    ComplexVector a = solve(b);
    for (int sweep = 0; sweep < 2; ++sweep) a += solve(b - G.topLeftCorner(m, m) * a);
    double d2 = target_norm2 - b.dot(a).real();
    if (d2 < -1e-6 * target_norm2)
      throw NumericalInconsistency("negative squared distance " + std::to_string(d2) + " at degree " +
                                   std::to_string(k));
    // nested spans: the distance cannot increase with the degree
    d2 = std::clamp(d2, 0.0, previous);
    previous = d2;
    ds.values[static_cast<std::size_t>(k)] = std::sqrt(d2);
  }
  ds.fit = fit_decay(ds.values);
  return ds;
}

inline DistanceSequence distance_to_poly_span(const MomentMatrix& G, std::span<const complex> c,
                                              double target_norm2, std::string target = "target") {
  return distance_to_poly_span(G.entries, c, target_norm2, std::move(target));
}

/// Distance from the boundary-only element (0, t) of L^2(mu) to Poly_N.
inline DistanceSequence splitting_indicator(const MuMeasure& mu, std::span<const complex> t,
                                            std::size_t N) {
  const std::size_t M = mu.grid_size();
  if (t.size() != M) throw DomainError("target must be sampled on the measure grid");
  std::vector<complex> w(M);
  std::vector<double> sq(M);
  for (std::size_t j = 0; j < M; ++j) {
    w[j] = t[j] * mu.delta.delta2[j];
    sq[j] = std::norm(t[j]) * mu.delta.delta2[j];
  }
  const double norm2 = pairwise_sum(sq) / static_cast<double>(M);
  if (!(norm2 > 1e-300)) throw DomainError("degenerate target: t vanishes in L^2(Delta^2 dm)");
  const auto tc = fourier_coefficients(std::span<const complex>(w));
  std::vector<complex> c(N + 1);
  for (std::size_t k = 0; k <= N; ++k) c[k] = tc[k];  // <(0,t), z^k> = int t Delta^2 conj(zeta^k) dm
  const MomentMatrix G = gram_matrix(mu, N);
  return distance_to_poly_span(G, c, norm2, "boundary element (0, t)");
}

/// Indicator function of a set on the measure grid.
inline std::vector<complex> grid_indicator(const CircleSet& E, std::size_t M) {
  std::vector<complex> t(M);
  for (std::size_t j = 0; j < M; ++j)
    t[j] = E.contains(static_cast<double>(j) / static_cast<double>(M)) ? 1.0 : 0.0;
  return t;
}

// ---------------------------------------------------------------------------
// Cyclicity of inner functions

struct CyclicityOptions {
  std::size_t radial_nodes = 32;
  std::size_t angular_nodes = 0;  // 0: chosen from N
  double tolerance = 1e-9;
  std::size_t max_radial_nodes = 512;
  std::size_t max_angular_nodes = 16384;
};

struct CyclicityReport {
  DistanceSequence distances;
  std::size_t radial_nodes = 0;
  std::size_t angular_nodes = 0;
  double node_change = 0.0;  // max entry change under the last doubling
  bool converged = false;
};

namespace detail {

struct InnerMoments {
  ComplexMatrix gram;
  std::vector<complex> cross;
};

inline InnerMoments inner_disk_moments(const Symbol& theta, double alpha, std::size_t N,
                                       std::size_t nr, std::size_t P) {
  const RadialRule rule = gauss_jacobi_rule(nr, alpha);
  const Eigen::Index n1 = static_cast<Eigen::Index>(N + 1);
  InnerMoments out{ComplexMatrix::Zero(n1, n1), std::vector<complex>(N + 1, 0.0)};
  std::vector<std::vector<complex>> gram_terms((N + 1) * (N + 1)), cross_terms(N + 1);
  std::vector<complex> vals(P), mod2(P);
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = std::sqrt(rule.nodes[i]);
    for (std::size_t j = 0; j < P; ++j) {
      vals[j] = theta(std::polar(r, two_pi * static_cast<double>(j) / static_cast<double>(P)));
      mod2[j] = std::norm(vals[j]);
    }
    const auto a = fourier_coefficients(std::span<const complex>(mod2));
    const auto th = fourier_coefficients(std::span<const complex>(vals));
    std::vector<double> rp(2 * N + 1);
    rp[0] = 1.0;
    for (std::size_t k = 1; k <= 2 * N; ++k) rp[k] = rp[k - 1] * r;
    for (std::size_t n = 0; n <= N; ++n) {
      for (std::size_t m = 0; m <= N; ++m) {
        const long lag = static_cast<long>(m) - static_cast<long>(n);
        gram_terms[n * (N + 1) + m].push_back(rule.weights[i] * rp[n + m] * a[frequency_index(lag, P)]);
      }
      cross_terms[n].push_back(rule.weights[i] * rp[n] *
                               std::conj(th[frequency_index(-static_cast<long>(n), P)]));
    }
  }
  for (std::size_t n = 0; n <= N; ++n) {
    for (std::size_t m = 0; m <= N; ++m)
      out.gram(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) =
          pairwise_sum(gram_terms[n * (N + 1) + m]);
    out.cross[n] = pairwise_sum(cross_terms[n]);
  }
  return out;
}

}  // namespace detail

/// Distance in P^2(mu) from 1 to theta * Poly_n, n = 0..N, for an inner theta.
inline CyclicityReport cyclicity_indicator(const MuMeasure& mu, const SymbolSpec& theta_spec,
                                           std::size_t N, CyclicityOptions opt = {}) {
  if (theta_spec.has_outer() || std::abs(theta_spec.scale) != 1.0)
    throw DomainError("cyclicity indicator needs an inner symbol");
  const std::size_t M = mu.grid_size();
  if (M < required_grid_size(N))
    throw Refusal("grid of size " + std::to_string(M) + " undersamples degree " + std::to_string(N) +
                  "; need M >= " + std::to_string(required_grid_size(N)));
  const Symbol theta(theta_spec, M);
  const Eigen::Index n1 = static_cast<Eigen::Index>(N + 1);

  // boundary part: |theta| = 1, so the Gram part is the Toeplitz matrix of Delta^2
  ComplexMatrix gb(n1, n1);
  for (Eigen::Index n = 0; n < n1; ++n)
    for (Eigen::Index m = 0; m < n1; ++m) gb(n, m) = mu.c(static_cast<long>(m - n));
  std::vector<complex> w(M);
  for (std::size_t j = 0; j < M; ++j)
    w[j] = std::conj(theta.inner_boundary(BoundaryGrid::theta(j, M))) * mu.delta.delta2[j];
  const auto wc = fourier_coefficients(std::span<const complex>(w));

  CyclicityReport rep;
  std::size_t nr = opt.radial_nodes;
  std::size_t P = opt.angular_nodes ? opt.angular_nodes : std::max<std::size_t>(64, 4 * N + 8);
  detail::InnerMoments cur = detail::inner_disk_moments(theta, mu.alpha, N, nr, P);
  for (;;) {
    if (2 * nr > opt.max_radial_nodes || 2 * P > opt.max_angular_nodes) break;
    detail::InnerMoments next = detail::inner_disk_moments(theta, mu.alpha, N, 2 * nr, 2 * P);
    double change = (next.gram - cur.gram).cwiseAbs().maxCoeff();
    for (std::size_t n = 0; n <= N; ++n) change = std::max(change, std::abs(next.cross[n] - cur.cross[n]));
    nr *= 2;
    P *= 2;
    cur = std::move(next);
    rep.node_change = change;
    if (change < opt.tolerance) {
      rep.converged = true;
      break;
    }
  }
  rep.radial_nodes = nr;
  rep.angular_nodes = P;

  ComplexMatrix G = cur.gram + gb;
  const double tr = G.trace().real();
  if (min_eigenvalue(G) < -1e-8 * tr)
    throw Refusal("theta Gram matrix not positive semidefinite at " + std::to_string(nr) + " x " +
                  std::to_string(P) + " nodes; increase the node counts");
  std::vector<complex> c(N + 1);
  for (std::size_t n = 0; n <= N; ++n) c[n] = cur.cross[n] + wc[n];
  const double norm2 = 1.0 / mu.alpha + mu.boundary_mass();
  rep.distances = distance_to_poly_span(G, c, norm2, "constant 1 vs theta * Poly_n");
  return rep;
}

/// Largest ratio |z p|^2 / |p|^2 over polynomials of degree < N (generalized eigenvalue).
inline double shift_norm_squared(const MomentMatrix& G) {
  const Eigen::Index N = static_cast<Eigen::Index>(G.degree);
  if (N < 1) return 0.0;
  const ComplexMatrix A = G.entries.block(1, 1, N, N);
  const ComplexMatrix B = G.entries.block(0, 0, N, N);
  Eigen::GeneralizedSelfAdjointEigenSolver<ComplexMatrix> es(A, B, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace hbspace

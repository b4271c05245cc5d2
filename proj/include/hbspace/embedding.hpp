#pragma once

// The H(b) reproducing kernel, the embedding J f = (f, g) into H^2 + L^2(E),
// the annihilator pairing and the division diagnostic for inner factors.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hbspace/core.hpp"
#include "hbspace/fourier.hpp"
#include "hbspace/moments.hpp"
#include "hbspace/symbol.hpp"

namespace hbspace {

/// (1 - conj(b(lambda)) b(z)) / (1 - conj(lambda) z).
inline complex hb_kernel(complex b_lambda, complex b_z, complex lambda, complex z) {
  const complex den = 1.0 - std::conj(lambda) * z;
  if (std::abs(den) == 0.0) throw SingularityError("kernel pole: conj(lambda) z = 1");
  return (1.0 - std::conj(b_lambda) * b_z) / den;
}

struct KernelGram {
  std::vector<complex> points;
  ComplexMatrix K;  // K(i, j) = k_b(lambda_i, lambda_j)
};

inline KernelGram kernel_gram(const Symbol& b, const std::vector<complex>& points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(std::abs(points[i]) < 1.0)) throw DomainError("kernel points must lie in the open disk");
    for (std::size_t j = 0; j < i; ++j)
      if (points[i] == points[j]) throw DomainError("kernel points must be distinct");
  }
  std::vector<complex> bv(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) bv[i] = b(points[i]);
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  KernelGram out{points, ComplexMatrix(m, m)};
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      out.K(i, j) = hb_kernel(bv[ui], bv[uj], points[ui], points[uj]);
    }
  if (m > 0) require_psd(out.K, "kernel Gram matrix");
  return out;
}

inline KernelGram kernel_gram(const SymbolSpec& spec, const std::vector<complex>& points,
                              std::size_t M = 2048) {
  return kernel_gram(Symbol(spec, M), points);
}

// ---------------------------------------------------------------------------
// J embedding

struct JPair {
  DiskSeries f;
  std::vector<complex> g;  // on the M-grid, zero off the carrier
};

struct JSolveOptions {
  std::size_t boundary_degree = 0;  // N_g; 0 means M / 4
  double jitter_scale = 1e-12;
  std::optional<double> hb_norm2;   // closed-form |f|^2 in H(b), when known
  double tolerance = 1e-8;          // residual and aliasing levels above this raise the warning flag
};

struct JSolveReport {
  JPair pair;
  double residual = 0.0;  // |P_+(conj(b) f + Delta g)|
  std::optional<double> isometry_defect;
  std::size_t boundary_degree = 0;
  double jitter = 0.0;
  int jitter_escalations = 0;
  double boundary_aliasing = 0.0;  // |P_-(b)| / |b| on the grid; 0 for band-limited analytic b
  bool warning = false;
  std::vector<std::string> warnings;
  bool extreme = false;
  double extremality = 0.0;
};

namespace detail {

inline std::vector<bool> carrier_mask(const DeltaWeight& d) {
  const std::size_t M = d.size();
  std::vector<bool> mask(M);
  for (std::size_t j = 0; j < M; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(M);
    mask[j] = d.declared ? d.carrier.contains(t) && d.delta[j] > 0.0 : d.delta[j] > 1e-9;
  }
  return mask;
}

inline double analytic_residual(const BoundaryGrid& b, const BoundaryGrid& fb,
                                const std::vector<double>& delta, const std::vector<complex>& g) {
  const std::size_t M = b.size();
  std::vector<complex> v(M);
  for (std::size_t j = 0; j < M; ++j) v[j] = std::conj(b[j]) * fb[j] + delta[j] * g[j];
  const auto c = fourier_coefficients(std::span<const complex>(v));
  return coefficient_norm(std::span<const complex>(c).first(M / 2));
}

}  // namespace detail

/// Least squares g = 1_E q, q a trigonometric polynomial of degree <= N_g,
/// minimizing |P_+(conj(b) f) + P_+(Delta g)|.
inline JSolveReport j_embedding_solve(const SymbolSpec& spec, const DiskSeries& f, std::size_t M,
                                      JSolveOptions opt = {}) {
  const SymbolSample s = symbol_eval(spec, M);
  const std::size_t Ng = opt.boundary_degree ? opt.boundary_degree : M / 4;
  if (Ng >= M / 2) throw DomainError("boundary degree must stay below M / 2");
  JSolveReport rep;
  rep.boundary_degree = Ng;
  rep.extreme = s.extreme;
  rep.extremality = s.extremality;
  rep.pair.f = f;
  rep.pair.g.assign(M, 0.0);
  const BoundaryGrid fb = evaluate_on_grid(f, M);
  const std::vector<bool> mask = detail::carrier_mask(s.delta);
  std::vector<complex> dm(M);
  bool any = false;
  for (std::size_t j = 0; j < M; ++j) {
    dm[j] = mask[j] ? s.delta.delta[j] : 0.0;
    any = any || mask[j];
  }
  if (!any) {
    rep.residual = detail::analytic_residual(s.b, fb, s.delta.delta, rep.pair.g);
    return rep;
  }

  // singular factors and jumps in the modulus are not band-limited, and their
  // aliased samples make conj(b) f inconsistent with any Delta g
  rep.boundary_aliasing = coefficient_norm(hardy_project_minus(s.b)) / std::max(s.b.l2_norm(), 1e-300);
  if (rep.boundary_aliasing > opt.tolerance) {
    rep.warning = true;
    rep.warnings.push_back("boundary values of b are not resolved on the grid (aliasing " +
                           std::to_string(rep.boundary_aliasing) + "); g is unreliable");
  }


  // rhs r_j = coefficient j of conj(b) f, j = 0..J-1
  const std::size_t J = M / 2;
  std::vector<complex> bf(M);
  for (std::size_t j = 0; j < M; ++j) bf[j] = std::conj(s.b[j]) * fb[j];
  const auto r = fourier_coefficients(std::span<const complex>(bf));
  const auto D = fourier_coefficients(std::span<const complex>(dm));
  auto Dk = [&](long k) { return D[frequency_index(k, M)]; };

  const long ng = static_cast<long>(Ng);
  const Eigen::Index n = 2 * static_cast<Eigen::Index>(Ng) + 1;
  // unknown index i stands for frequency i - Ng; A(j, i) = D(j - (i - Ng))
  ComplexMatrix S(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const long ka = a - ng;
    for (Eigen::Index b = 0; b < n; ++b) {
      if (a > 0 && b > 0) {
        const long kb = b - ng;
        // S(k, l) = S(k-1, l-1) + conj(D(-k)) D(-l) - conj(D(J-k)) D(J-l)
        S(a, b) = S(a - 1, b - 1) + std::conj(Dk(-ka)) * Dk(-kb) -
                  std::conj(Dk(static_cast<long>(J) - ka)) * Dk(static_cast<long>(J) - kb);
        continue;
      }
      const long kb = b - ng;
      std::vector<complex> t(J);
      for (std::size_t j = 0; j < J; ++j)
        t[j] = std::conj(Dk(static_cast<long>(j) - ka)) * Dk(static_cast<long>(j) - kb);
      S(a, b) = pairwise_sum(t);
    }
  }
  ComplexVector rhs(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    std::vector<complex> t(J);
    for (std::size_t j = 0; j < J; ++j) t[j] = std::conj(Dk(static_cast<long>(j) - (a - ng))) * r[j];
    rhs(a) = -pairwise_sum(t);
  }
  const double tr = S.trace().real();
  rep.jitter = opt.jitter_scale * tr / static_cast<double>(n);
  Eigen::LLT<ComplexMatrix> llt;
  for (;;) {
    ComplexMatrix A = S;
    A.diagonal().array() += rep.jitter;
    llt.compute(A);
    if (llt.info() == Eigen::Success) break;
    if (rep.jitter_escalations == 0) rep.warnings.push_back("normal equations needed jitter escalation");
    rep.warning = true;
    if (++rep.jitter_escalations > 12) throw NumericalInconsistency("normal equations failed after jitter escalation");
    rep.jitter *= 10.0;
  }
  const ComplexVector q = llt.solve(rhs);
  std::vector<complex> qc(M, 0.0);
  for (Eigen::Index a = 0; a < n; ++a) qc[frequency_index(a - ng, M)] = q(a);
  const auto qv = synthesize(qc);
  for (std::size_t j = 0; j < M; ++j) rep.pair.g[j] = mask[j] ? qv[j] : 0.0;
  rep.residual = detail::analytic_residual(s.b, fb, s.delta.delta, rep.pair.g);
  if (rep.residual > opt.tolerance * std::max(1.0, f.h2_norm())) {
    rep.warning = true;
    rep.warnings.push_back("defining relation residual " + std::to_string(rep.residual) + " above tolerance");
  }
  if (opt.hb_norm2) {
    std::vector<double> g2(M);
    for (std::size_t j = 0; j < M; ++j) g2[j] = std::norm(rep.pair.g[j]);
    const double total = f.h2_norm() * f.h2_norm() + pairwise_sum(g2) / static_cast<double>(M);
    rep.isometry_defect = std::abs(total - *opt.hb_norm2);
  }
  return rep;
}

/// Taylor coefficients of k_b(lambda, .) from its boundary values.
inline DiskSeries kernel_series(const SymbolSample& s, complex b_lambda, complex lambda) {
  const std::size_t M = s.b.size();
  std::vector<complex> v(M);
  for (std::size_t j = 0; j < M; ++j)
    v[j] = hb_kernel(b_lambda, s.b[j], lambda, std::polar(1.0, BoundaryGrid::theta(j, M)));
  return hardy_project(BoundaryGrid(std::move(v)));
}

/// The pair J k_b(lambda, .) = (k_b(lambda, .), -Delta conj(b(lambda)) / (1 - conj(lambda) zeta)).
inline JPair kernel_pair(const SymbolSample& s, complex b_lambda, complex lambda) {
  const std::size_t M = s.b.size();
  JPair p;
  p.f = kernel_series(s, b_lambda, lambda);
  p.g.assign(M, 0.0);
  const std::vector<bool> mask = detail::carrier_mask(s.delta);
  for (std::size_t j = 0; j < M; ++j)
    if (mask[j])
      p.g[j] = -s.delta.delta[j] * std::conj(b_lambda) /
               (1.0 - std::conj(lambda) * std::polar(1.0, BoundaryGrid::theta(j, M)));
  return p;
}

/// int f conj(b h) dm + int_E g Delta conj(h) dm on the grid.
inline complex annihilator_check(const SymbolSample& s, const JPair& pair, const DiskSeries& h) {
  const std::size_t M = s.b.size();
  if (pair.g.size() != M) throw DomainError("pair and symbol grids differ");
  const BoundaryGrid fv = evaluate_on_grid(pair.f, M);
  const BoundaryGrid hv = evaluate_on_grid(h, M);
  std::vector<complex> t(M);
  for (std::size_t j = 0; j < M; ++j)
    t[j] = fv[j] * std::conj(s.b[j] * hv[j]) + pair.g[j] * s.delta.delta[j] * std::conj(hv[j]);
  return grid_mean(t);
}

inline complex annihilator_check(const SymbolSpec& spec, const JPair& pair, const DiskSeries& h) {
  return annihilator_check(symbol_eval(spec, pair.g.size()), pair, h);
}

// ---------------------------------------------------------------------------
// Division diagnostic

struct DivisionReport {
  double value = 0.0;  // |P_-(f conj(theta))|
  std::vector<std::size_t> guarded;
};

inline DivisionReport division_diagnostic(const SymbolSpec& theta_spec, const BoundaryGrid& f) {
  if (theta_spec.has_outer() || std::abs(theta_spec.scale) != 1.0)
    throw DomainError("division diagnostic needs an inner symbol");
  const std::size_t M = f.size();
  const Symbol theta(theta_spec, M);
  DivisionReport rep;
  std::vector<complex> v(M);
  const double guard = 1.0 / static_cast<double>(M);
  for (std::size_t j = 0; j < M; ++j) {
    const double th = BoundaryGrid::theta(j, M);
    if (!theta_spec.singular.empty() &&
        detail::support_distance(theta_spec.singular, static_cast<double>(j) / static_cast<double>(M)) <= guard)
      rep.guarded.push_back(j);
    v[j] = f[j] * std::conj(theta.inner_boundary(th));
  }
  const auto minus = hardy_project_minus(BoundaryGrid(std::move(v)));
  rep.value = coefficient_norm(minus);
  return rep;
}

/// Boundary values of theta on the M-grid (Blaschke exact, singular part via the radial proxy).
inline BoundaryGrid inner_boundary_grid(const SymbolSpec& theta_spec, std::size_t M) {
  const Symbol theta(theta_spec, M);
  std::vector<complex> v(M);
  for (std::size_t j = 0; j < M; ++j) v[j] = theta.inner_boundary(BoundaryGrid::theta(j, M));
  return BoundaryGrid(std::move(v));
}

}  // namespace hbspace

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <random>

#include "hbspace/moments.hpp"

using namespace hbspace;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

DeltaWeight weight_from(const SymbolSpec& s, std::size_t M) { return symbol_eval(s, M).delta; }

SymbolSpec arc_weight(double a, double b, double omega) {
  SymbolSpec s;
  s.outer = OuterModulus::on_arcs({{{a, b}, omega}});
  return s;
}

// <z^n, z^m>_mu for Delta^2 = v on [a, b] (turns), by direct quadrature
complex gram_entry_by_quadrature(int n, int m, double alpha, double a, double b, double v) {
  boost::math::quadrature::tanh_sinh<double> ts;
  // int_D z^n conj(z)^m dA_alpha vanishes off the diagonal by the angular integral
  double disk = 0.0;
  if (n == m) {
    auto f = [&](double r, double one_minus_r) {
      const double c = r > 0.5 ? one_minus_r : 1.0 - r;
      return 2.0 * std::pow(r, 2 * n + 1) * std::pow(c * (1.0 + r), alpha - 1.0);
    };
    disk = ts.integrate(f, 0.0, 1.0);
  }
  auto re = [&](double t) { return v * std::cos(two_pi * (n - m) * t); };
  auto im = [&](double t) { return v * std::sin(two_pi * (n - m) * t); };
  return disk + complex(GK::integrate(re, a, b, 10, 1e-15), GK::integrate(im, a, b, 10, 1e-15));
}

}  // namespace

TEST(Mu, ArcFourierCoefficientsMatchClosedForm) {
  const double a = 0.125, b = 0.5, v = 0.64;
  const MuMeasure mu = build_mu(weight_from(arc_weight(a, b, 0.6), 4096), 1.0, 16);
  EXPECT_NEAR(mu.boundary_mass(), v * (b - a), 1e-15);
  for (long k = 1; k <= 16; ++k) {
    const double kk = static_cast<double>(k);
    const complex ref = v * (std::polar(1.0, -two_pi * kk * a) - std::polar(1.0, -two_pi * kk * b)) /
                        complex(0.0, two_pi * kk);
    EXPECT_LT(std::abs(mu.c(k) - ref), 1e-5) << k;
    EXPECT_LT(std::abs(mu.c(-k) - std::conj(ref)), 1e-5) << k;
  }
}

TEST(Mu, RefusesUndersampledGrid) {
  const DeltaWeight d = weight_from(arc_weight(0.1, 0.4, 0.5), 64);
  EXPECT_THROW(build_mu(d, 1.0, 16), Refusal);
  EXPECT_NO_THROW(build_mu(d, 1.0, 15));
  EXPECT_THROW(build_mu(d, 0.0, 2), DomainError);
  const MuMeasure mu = build_mu(d, 1.0, 15);
  EXPECT_THROW(gram_matrix(mu, 16), Refusal);
}

TEST(Gram, MatchesDirectQuadrature) {
  const double a = 0.1875, b = 0.5625, omega = 0.3;  // jumps on grid nodes
  const MuMeasure mu = build_mu(weight_from(arc_weight(a, b, omega), 1 << 16), 1.5, 6);
  const MomentMatrix G = gram_matrix(mu, 6);
  for (int n = 0; n <= 6; ++n)
    for (int m = 0; m <= 6; ++m)
      EXPECT_LT(std::abs(G.entries(n, m) - gram_entry_by_quadrature(n, m, 1.5, a, b, 1 - omega * omega)), 1e-8)
          << n << "," << m;
}

TEST(Gram, HermitianPositiveAndToeplitzPlusDiagonal) {
  SymbolSpec s;
  s.outer = OuterModulus::bump({0.3, 0.8}, 0.9);
  const MuMeasure mu = build_mu(weight_from(s, 512), 0.7, 20);
  const MomentMatrix G = gram_matrix(mu, 20);
  EXPECT_LT((G.entries - G.entries.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GT(min_eigenvalue(G.entries), 0.0);
  for (int n = 1; n <= 20; ++n)
    for (int m = 1; m <= 20; ++m) {
      const complex shifted = G.entries(n, m) - (n == m ? G.beta[n] : 0.0);
      const complex base = G.entries(n - 1, m - 1) - (n == m ? G.beta[n - 1] : 0.0);
      EXPECT_LT(std::abs(shifted - base), 1e-15);
    }
}

TEST(Distance, ConstantWeightSplittingClosedForm) {
  // Delta^2 = 3/4: c_0 = 3/4, G = diag(beta_n + 3/4), so d^2 = 3/4 - (9/16)/(1/alpha + 3/4)
  SymbolSpec s;
  s.outer = OuterModulus::constant(0.5);
  for (double alpha : {1.0, 2.0}) {
    const MuMeasure mu = build_mu(weight_from(s, 64), alpha, 10);
    const std::vector<complex> one(64, 1.0);
    const DistanceSequence d = splitting_indicator(mu, one, 10);
    const double ref = 0.75 - 0.5625 / (1.0 / alpha + 0.75);
    for (double x : d.values) EXPECT_NEAR(x * x, ref, 1e-14);
  }
}

TEST(Distance, MatchesDirectLeastSquares) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  SymbolSpec s;
  s.outer = OuterModulus::on_arcs({{{0.1, 0.4}, 0.2}, {{0.6, 0.7}, 0.5}});
  const MuMeasure mu = build_mu(weight_from(s, 256), 1.0, 12);
  std::vector<complex> t(256);
  for (auto& x : t) x = complex(g(rng), g(rng));
  const DistanceSequence d = splitting_indicator(mu, t, 12);
  // direct minimization over the same Gram data with a rank-revealing solver
  const MomentMatrix G = gram_matrix(mu, 12);
  std::vector<complex> w(256);
  for (std::size_t j = 0; j < 256; ++j) w[j] = t[j] * mu.delta.delta2[j];
  const auto tc = fourier_coefficients(std::span<const complex>(w));
  for (int n = 0; n <= 12; ++n) {
    const ComplexMatrix A = G.entries.topLeftCorner(n + 1, n + 1);
    ComplexVector c(n + 1);
    for (int k = 0; k <= n; ++k) c(k) = std::conj(tc[static_cast<std::size_t>(k)]);
    const ComplexVector x = A.completeOrthogonalDecomposition().solve(c);
    const double ref = d.target_norm2 - c.dot(x).real();
    EXPECT_NEAR(d.values[static_cast<std::size_t>(n)] * d.values[static_cast<std::size_t>(n)], ref,
                1e-10 * d.target_norm2)
        << n;
  }
  for (std::size_t n = 1; n < d.values.size(); ++n) EXPECT_LE(d.values[n], d.values[n - 1]);
}

TEST(Distance, DegenerateTargetRejected) {
  const MuMeasure mu = build_mu(weight_from(arc_weight(0.1, 0.2, 0.5), 64), 1.0, 4);
  std::vector<complex> t(64, 0.0);
  t[40] = 1.0;  // off the carrier
  EXPECT_THROW(splitting_indicator(mu, t, 4), DomainError);
}

TEST(Distance, FitRecoversPowerLaw) {
  std::vector<double> d(61);
  d[0] = 1.0;
  for (std::size_t n = 1; n <= 60; ++n) d[n] = 3.0 * std::pow(static_cast<double>(n), -0.7);
  const auto f = fit_decay(d);
  ASSERT_TRUE(f);
  EXPECT_NEAR(f->rate, -0.7, 1e-12);
  EXPECT_NEAR(std::exp(f->intercept), 3.0, 1e-11);
  EXPECT_EQ(f->points, 31u);
}

TEST(Cyclicity, TrivialInnerFunctionIsCyclic) {
  const MuMeasure mu = build_mu(weight_from(arc_weight(0.1, 0.6, 0.4), 256), 1.0, 20);
  const CyclicityReport r = cyclicity_indicator(mu, SymbolSpec{}, 20);
  for (double x : r.distances.values) EXPECT_LE(x * x, 1e-8);
}

TEST(Cyclicity, ShiftWithConstantWeight) {
  // theta = z: G = diag(beta_{n+1} + v), cross moments vanish, d^2 = 1/alpha + v
  SymbolSpec z;
  z.blaschke_zeros = {{0.0, 1}};
  for (double v : {0.0, 0.36}) {
    SymbolSpec w;
    w.outer = OuterModulus::constant(std::sqrt(1.0 - v));
    for (double alpha : {0.5, 1.0, 2.0}) {
      const MuMeasure mu = build_mu(weight_from(w, 128), alpha, 20);
      const CyclicityReport r = cyclicity_indicator(mu, z, 20);
      EXPECT_TRUE(r.converged);
      for (double x : r.distances.values) EXPECT_NEAR(x * x, 1.0 / alpha + v, 1e-8) << alpha << " " << v;
    }
  }
}

TEST(Cyclicity, BlaschkeFactorDistanceDecreases) {
  SymbolSpec th;
  th.blaschke_zeros = {{complex(0.5, 0.2), 1}};
  const MuMeasure mu = build_mu(weight_from(arc_weight(0.0, 0.5, 0.3), 256), 1.0, 16);
  const CyclicityReport r = cyclicity_indicator(mu, th, 16);
  for (std::size_t n = 1; n < r.distances.values.size(); ++n)
    EXPECT_LE(r.distances.values[n], r.distances.values[n - 1]);
  EXPECT_LT(r.distances.values.back(), r.distances.values.front());
}

TEST(Cyclicity, RejectsNonInnerSymbols) {
  const MuMeasure mu = build_mu(weight_from(arc_weight(0.0, 0.5, 0.3), 64), 1.0, 4);
  SymbolSpec s;
  s.scale = 0.5;
  EXPECT_THROW(cyclicity_indicator(mu, s, 4), DomainError);
  EXPECT_THROW(cyclicity_indicator(mu, SymbolSpec{}, 20), Refusal);
}

TEST(Shift, NormOfShiftWithoutBoundaryPart) {
  // Delta = 0: the largest ratio beta_{n+1}/beta_n over n < N is N/(N + alpha)
  SymbolSpec inner;
  inner.blaschke_zeros = {{complex(0.2, 0.0), 1}};
  const MuMeasure mu = build_mu(weight_from(inner, 64), 1.5, 10);
  const MomentMatrix G = gram_matrix(mu, 10);
  EXPECT_NEAR(shift_norm_squared(G), 10.0 / 11.5, 1e-12);
}

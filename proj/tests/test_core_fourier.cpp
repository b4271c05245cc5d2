#include <gtest/gtest.h>

#include <random>

#include "hbspace/fourier.hpp"

using namespace hbspace;

TEST(BoundaryGrid, RejectsBadSizesAndValues) {
  EXPECT_THROW(BoundaryGrid(std::vector<complex>(3, 1.0)), DomainError);
  EXPECT_THROW(BoundaryGrid(std::vector<complex>(2, 1.0)), DomainError);
  EXPECT_THROW(BoundaryGrid(std::vector<complex>(7, 1.0)), DomainError);
  std::vector<complex> v(8, 1.0);
  v[3] = complex(std::nan(""), 0.0);
  EXPECT_THROW(BoundaryGrid{v}, DomainError);
}

TEST(BoundaryGrid, AnyEvenSizeIsAccepted) {
  for (std::size_t M : {4u, 6u, 10u, 30u, 98u}) {
    const auto u = BoundaryGrid::sample(M, [](double t) { return std::cos(t); });
    EXPECT_NEAR(u.l2_norm(), std::sqrt(0.5), 1e-14) << M;
  }
}

TEST(PairwiseSum, DeterministicAndAccurate) {
  std::vector<double> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  const double a = pairwise_sum(v);
  const double b = pairwise_sum(v);
  EXPECT_EQ(a, b);
  double naive = 0.0;
  for (double x : v) naive += x;
  EXPECT_NEAR(a, naive, 1e-12);
}

TEST(HardyProject, NegativeFrequencyVanishes) {
  const auto u = BoundaryGrid::sample(16, [](double t) { return std::polar(1.0, -t); });
  const DiskSeries p = hardy_project(u);
  EXPECT_LT(p.h2_norm(), 1e-15);
}

TEST(HardyProject, TwoPlusExponential) {
  const auto u = BoundaryGrid::sample(16, [](double t) { return 2.0 + std::polar(1.0, t); });
  const DiskSeries p = hardy_project(u);
  EXPECT_NEAR(std::abs(p[0] - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p[1] - 1.0), 0.0, 1e-15);
  for (std::size_t k = 2; k < p.coefficients.size(); ++k) EXPECT_LT(std::abs(p[k]), 1e-15);
}

TEST(HardyProject, RealDataReconstructsFromBothHalves) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (std::size_t M : {32u, 50u, 256u}) {
    std::vector<complex> v(M);
    for (auto& x : v) x = g(rng);
    const BoundaryGrid u(v);
    const BoundaryGrid plus = hardy_project_grid(u);
    const BoundaryGrid minus = hardy_project_minus_grid(u);
    double err = 0.0;
    for (std::size_t j = 0; j < M; ++j) err = std::max(err, std::abs(plus[j] + minus[j] - u[j]));
    EXPECT_LT(err, 1e-13);
    // real data: c(-k) = conj c(k)
    const auto c = fourier_coefficients(u);
    for (std::size_t k = 1; k < M / 2; ++k) EXPECT_LT(std::abs(c[M - k] - std::conj(c[k])), 1e-14);
  }
}

TEST(HardyProject, Idempotent) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<complex> v(64);
  for (auto& x : v) x = complex(g(rng), g(rng));
  const BoundaryGrid once = hardy_project_grid(BoundaryGrid(v));
  const BoundaryGrid twice = hardy_project_grid(once);
  for (std::size_t j = 0; j < 64; ++j) EXPECT_LT(std::abs(once[j] - twice[j]), 1e-14);
}

TEST(Fourier, SynthesisInvertsAnalysis) {
  std::vector<complex> c(24, 0.0);
  c[1] = 2.0;
  c[23] = complex(0.0, 1.0);
  const auto v = synthesize(c);
  const auto back = fourier_coefficients(std::span<const complex>(v));
  for (std::size_t k = 0; k < 24; ++k) EXPECT_LT(std::abs(back[k] - c[k]), 1e-15);
  EXPECT_EQ(signed_frequency(23, 24), -1);
  EXPECT_EQ(frequency_index(-1, 24), 23u);
}

TEST(DiskSeries, HornerAndGridEvaluationAgree) {
  const DiskSeries p(std::vector<complex>{1.0, complex(0.0, 2.0), -0.5});
  const BoundaryGrid g = evaluate_on_grid(p, 8);
  for (std::size_t j = 0; j < 8; ++j)
    EXPECT_LT(std::abs(g[j] - p(std::polar(1.0, BoundaryGrid::theta(j, 8)))), 1e-14);
  const BoundaryGrid r = evaluate_on_grid(p, 8, 0.5);
  EXPECT_LT(std::abs(r[0] - p(0.5)), 1e-15);
}

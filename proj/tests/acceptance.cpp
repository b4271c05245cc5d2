// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>

#include "hbspace/experiments.hpp"
#include "hbspace/xalpha.hpp"

using namespace hbspace;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// int_0^1 s^n (1-s)^(alpha-1) ds, the radial part of beta_n after s = r^2
double beta_by_quadrature(std::size_t n, double alpha) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double nn = static_cast<double>(n);
  auto f = [&](double s, double one_minus_s) {
    const double c = s > 0.5 ? one_minus_s : 1.0 - s;
    return std::pow(s, nn) * std::pow(c, alpha - 1.0);
  };
  return ts.integrate(f, 0.0, 1.0, 1e-14);
}

Outcome moment_closed_form() {
  Outcome o;
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 2.0, 3.5})
    for (std::size_t n = 0; n <= 200; ++n) {
      const double ref = beta_by_quadrature(n, alpha);
      worst = std::max(worst, std::abs(disk_moment(n, alpha) / ref - 1.0));
    }
  double exact = 0.0;
  for (std::size_t n = 0; n <= 200; ++n) {
    const double k = static_cast<double>(n);
    exact = std::max(exact, std::abs(disk_moment(n, 1.0) - 1.0 / ((k + 1.0) * (k + 2.0))));
  }
  o.pass = worst <= 1e-10 && exact <= 1e-14;
  o.detail = "max rel err vs quadrature " + fmt(worst) + "; alpha=1 vs 1/((n+1)(n+2)) max err " + fmt(exact);
  return o;
}

Outcome norm_equivalence_band() {
  Outcome o;
  std::ostringstream d;
  for (double alpha : {0.5, 1.0, 2.0, 3.5}) {
    const std::vector<double> b = disk_moments(10000, alpha);
    double lo = INFINITY, hi = 0.0;
    int direction = 0;
    bool monotone = true;
    double prev = 0.0;
    for (std::size_t n = 0; n <= 10000; ++n) {
      const double v = std::pow(static_cast<double>(n + 1), alpha) * b[n];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      if (n > 0) {
        const int s = v > prev * (1 + 1e-13) ? 1 : (v < prev * (1 - 1e-13) ? -1 : 0);
        if (s != 0 && direction != 0 && s != direction) monotone = false;
        if (s != 0) direction = s;
      }
      prev = v;
    }
    const bool ok = hi / lo <= 10.0 && monotone;
    o.pass = o.pass && ok;
    d << "alpha=" << alpha << " band " << fmt(hi / lo) << (monotone ? " monotone" : " not monotone") << "; ";
  }
  o.detail = d.str();
  return o;
}

// <z^n, z^m>_mu by nested quadrature over the disk plus the boundary arcs
complex gram_entry_2d(int n, int m, double alpha, const std::vector<ArcValue>& arcs) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const int k = n - m;
  // dA_alpha = 2 r (1 - r^2)^(alpha - 1) dr dt in polar form with t in turns
  auto radial = [&](bool imag) {
    auto f = [&](double r, double one_minus_r) {
      const double c = r > 0.5 ? one_minus_r : 1.0 - r;
      // the equispaced angular rule is exact for trigonometric degree below its node count
      const int nodes = 32;
      double ang = 0.0;
      for (int j = 0; j < nodes; ++j) {
        const complex z = std::polar(r, two_pi * j / nodes);
        const complex v = std::pow(z, n) * std::pow(std::conj(z), m);
        ang += imag ? v.imag() : v.real();
      }
      return 2.0 * r * std::pow(c * (1.0 + r), alpha - 1.0) * ang / nodes;
    };
    return ts.integrate(f, 0.0, 1.0, 1e-14);
  };
  complex v(radial(false), radial(true));
  for (const ArcValue& a : arcs) {
    const double w = 1.0 - a.value * a.value;
    auto re = [&](double t) { return w * std::cos(two_pi * k * t); };
    auto im = [&](double t) { return w * std::sin(two_pi * k * t); };
    v += complex(GK::integrate(re, a.arc.start, a.arc.end, 10, 1e-15),
                 GK::integrate(im, a.arc.start, a.arc.end, 10, 1e-15));
  }
  return v;
}

Outcome gram_oracle() {
  Outcome o;
  const std::size_t M = 1 << 16;
  double worst = 0.0;
  // jumps on grid nodes so the grid Fourier coefficients converge at second order
  const std::vector<std::pair<double, std::vector<ArcValue>>> cases{
      {1.5, {{{0.1875, 0.5625}, 0.3}}},
      {0.5, {{{0.0625, 0.25}, 0.2}, {{0.625, 0.875}, 0.7}}},
      {1.0, {{{0.5, 0.75}, 0.0}}}};
  for (const auto& [alpha, arcs] : cases) {
    SymbolSpec s;
    s.outer = OuterModulus::on_arcs(arcs);
    const MuMeasure mu = build_mu(symbol_eval(s, M).delta, alpha, 8);
    const MomentMatrix G = gram_matrix(mu, 8);
    for (int n = 0; n <= 8; ++n)
      for (int m = 0; m <= 8; ++m)
        worst = std::max(worst, std::abs(G.entries(n, m) - gram_entry_2d(n, m, alpha, arcs)));
  }
  o.pass = worst <= 1e-8;
  o.detail = "max entrywise error " + fmt(worst) + " over 3 weights, N=8";
  return o;
}

std::vector<SymbolSpec> symbol_mixes() {
  std::vector<SymbolSpec> v(6);
  v[0].blaschke_zeros = {{complex(0.5, -0.3), 1}, {complex(-0.2, 0.6), 2}};
  v[1].singular.atoms = {{1.0, 0.7}, {4.0, 0.3}};
  v[2].outer = OuterModulus::bump({0.1, 0.45}, 0.8);
  v[3].blaschke_zeros = {{complex(0.5, -0.3), 1}};
  v[3].singular.atoms = {{2.0, 0.3}};
  v[3].outer = OuterModulus::bump({0.1, 0.45}, 0.8);
  v[4].singular.cantor_parts = {{CantorSchedule::middle_thirds({0.6, 0.7}, 8), 0.5}};
  v[4].outer = OuterModulus::on_arcs({{{0.2, 0.5}, 0.4}});
  v[5].outer = OuterModulus::cos_half();
  v[5].scale = complex(0.0, 0.9);
  return v;
}

Outcome kernel_psd() {
  Outcome o;
  std::vector<Symbol> symbols;
  for (const SymbolSpec& s : symbol_mixes()) symbols.emplace_back(s, 1024);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> npts(1, 8);
  double worst = INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    const Symbol& b = symbols[static_cast<std::size_t>(trial) % symbols.size()];
    std::vector<complex> pts;
    const int n = npts(rng);
    while (static_cast<int>(pts.size()) < n) pts.push_back(std::polar(0.9 * std::sqrt(u(rng)), two_pi * u(rng)));
    const KernelGram g = kernel_gram(b, pts);
    const double tr = g.K.trace().real();
    worst = std::min(worst, min_eigenvalue(g.K) / tr);
  }
  o.pass = worst >= -1e-8;
  o.detail = "min over configs of lambda_min/trace = " + fmt(worst);
  return o;
}

Outcome j_embedding() {
  Outcome o;
  SymbolSpec spec;
  spec.blaschke_zeros = {{complex(0.5, -0.3), 1}};
  spec.outer = OuterModulus::bump({0.1, 0.45}, 0.8);
  const std::size_t M = 4096;
  const SymbolSample s = symbol_eval(spec, M);
  const Symbol b(spec, M);

  const complex lam(0.3, 0.2);
  const complex bl = b(lam);
  const JPair closed = kernel_pair(s, bl, lam);
  JSolveOptions opt;
  opt.hb_norm2 = (1.0 - std::norm(bl)) / (1.0 - std::norm(lam));
  const JSolveReport r = j_embedding_solve(spec, closed.f, M, opt);
  std::vector<double> err(M);
  for (std::size_t j = 0; j < M; ++j) err[j] = std::norm(r.pair.g[j] - closed.g[j]);
  const double l2 = std::sqrt(pairwise_sum(err) / static_cast<double>(M));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double iso = 0.0;
  for (int i = 0; i < 20; ++i) {
    const complex z = std::polar(0.9 * std::sqrt(u(rng)), two_pi * u(rng));
    const complex bz = b(z);
    const JPair p = kernel_pair(s, bz, z);
    std::vector<double> g2(M);
    for (std::size_t j = 0; j < M; ++j) g2[j] = std::norm(p.g[j]);
    const double norm2 = p.f.h2_norm() * p.f.h2_norm() + pairwise_sum(g2) / static_cast<double>(M);
    const double kval = (1.0 - std::norm(bz)) / (1.0 - std::norm(z));
    iso = std::max(iso, std::abs(norm2 - kval) / kval);
  }

  double ann = 0.0;
  for (std::size_t n = 0; n <= r.boundary_degree / 2; ++n)
    ann = std::max(ann, std::abs(annihilator_check(s, r.pair, DiskSeries::monomial(n))));

  const bool a = l2 <= 1e-4, bb = iso <= 1e-6, c = ann <= 1e-8 + r.residual;
  o.pass = a && bb && c;
  o.detail = "(a) g L2 err " + fmt(l2) + " (b) max rel isometry defect " + fmt(iso) + " (c) max annihilator " +
             fmt(ann) + " vs 1e-8+" + fmt(r.residual);
  return o;
}

Outcome division() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g;
  const std::size_t M = 512;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    SymbolSpec th;
    const int nz = 1 + trial % 3;
    for (int i = 0; i < nz; ++i)
      th.blaschke_zeros.push_back({std::polar(0.95 * std::sqrt(u(rng)), two_pi * u(rng)), 1 + (i + trial) % 2});
    if (trial % 2 == 0) th.singular.atoms = {{two_pi * u(rng), 0.2 + u(rng)}};
    std::vector<complex> pc(1 + trial % 12);
    for (auto& x : pc) x = complex(g(rng), g(rng));
    const BoundaryGrid pv = evaluate_on_grid(DiskSeries(pc), M);
    const double v = division_diagnostic(th, pointwise(inner_boundary_grid(th, M), pv)).value;
    worst = std::max(worst, v / pv.l2_norm());
  }
  SymbolSpec z;
  z.blaschke_zeros = {{0.0, 1}};
  const double shift = division_diagnostic(z, BoundaryGrid::sample(M, [](double) { return 1.0; })).value;
  o.pass = worst <= 1e-8 && std::abs(shift - 1.0) <= 1e-12;
  o.detail = "max value/|p| " + fmt(worst) + "; |D(z,1) - 1| = " + fmt(std::abs(shift - 1.0));
  return o;
}

Outcome bc_entropy_checks() {
  Outcome o;
  const BCReport mt = bc_entropy(CircleSet::cantor(CantorSchedule::middle_thirds({0, 1}, 40)));
  const double gap = std::abs(mt.partial_sums.back() - 3.0 * std::log(3.0));
  const double arc = std::abs(*bc_entropy(CircleSet::from_arcs({{0.0, 0.5}})).limit - 0.5 * std::log(2.0));
  const BCReport div = bc_entropy(CircleSet::cantor(CantorSchedule::super_branching(0.5, 4.0, 1.0, {0, 1}, 60)));
  bool nondecreasing = true;
  for (std::size_t k = 1; k < div.partial_sums.size(); ++k) nondecreasing &= div.partial_sums[k] >= div.partial_sums[k - 1];
  const bool divergent = div.classification == EntropyClass::divergent && div.partial_sums.back() >= 1e3 && nondecreasing;
  o.pass = gap <= 1e-6 && arc <= 1e-15 && divergent;
  o.detail = "middle thirds |S_40 - 3log3| = " + fmt(gap) + "; half-arc err " + fmt(arc) + "; divergent schedule " +
             to_string(div.classification) + " with S_60 = " + fmt(div.partial_sums.back());
  return o;
}

Outcome decomposition() {
  using boost::multiprecision::cpp_rational;
  Outcome o;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool exact = true, atoms_in_c = true;
  for (int trial = 0; trial < 20; ++trial) {
    SingularMeasureSpec nu;
    for (int i = 0; i < trial % 4; ++i) nu.atoms.push_back({two_pi * (i + u(rng)) / 4.0, 0.01 + u(rng)});
    const double start = 0.05 + 0.4 * u(rng);
    if (trial % 3 != 1) nu.cantor_parts.push_back({CantorSchedule::middle_thirds({start, start + 0.1}, 8), 0.1 + u(rng)});
    if (trial % 2 == 0)
      nu.cantor_parts.push_back({CantorSchedule::power_law(0.5, 1.0, {start + 0.3, start + 0.45}, 8), 0.1 + u(rng)});
    if (trial % 5 == 0) nu.cantor_parts.push_back({CantorSchedule::power_law(0.3, 0.5, {0.9, 0.95}, 8), 0.2});
    const MeasureDecomposition d = decompose_measure(nu);
    cpp_rational total = 0, parts = 0;
    for (const Atom& a : nu.atoms) total += cpp_rational(a.mass);
    for (const CantorPart& c : nu.cantor_parts) total += cpp_rational(c.mass);
    for (const SingularMeasureSpec* s : {&d.c_part, &d.k_candidate}) {
      for (const Atom& a : s->atoms) parts += cpp_rational(a.mass);
      for (const CantorPart& c : s->cantor_parts) parts += cpp_rational(c.mass);
    }
    exact &= total == parts;
    atoms_in_c &= d.c_part.atoms.size() == nu.atoms.size() && d.k_candidate.atoms.empty();
  }
  o.pass = exact && atoms_in_c;
  o.detail = std::string("exact rational conservation ") + (exact ? "holds" : "broken") + "; atoms in C " +
             (atoms_in_c ? "always" : "not always");
  return o;
}

Outcome splitting_dichotomy() {
  Outcome o;
  const std::size_t N = 60, M = 4096;
  SymbolSpec volberg;
  volberg.outer = OuterModulus::volberg(CantorSchedule::power_law(0.5, 1.5, {0, 1}, 14), 1.0, 0.001, 2.0);
  const SymbolSample vs = symbol_eval(volberg, M);
  const double mass = vs.delta.mass();
  // constant Delta^2 on an arc of length 0.8 with the same boundary mass
  SymbolSpec arc;
  arc.outer = OuterModulus::on_arcs({{{0.1, 0.9}, std::sqrt(1.0 - mass / 0.8)}});
  const SymbolSample as = symbol_eval(arc, M);

  auto run = [&](const SymbolSample& s) {
    const MuMeasure mu = build_mu(s.delta, 1.0, N);
    return splitting_indicator(mu, grid_indicator(carrier_and_support(s.delta).carrier, M), N);
  };
  const DistanceSequence dv = run(vs), da = run(as);
  if (!dv.fit || !da.fit) {
    o.pass = false;
    o.detail = "decay fit unavailable";
    return o;
  }
  const double d40 = da.values[40], d60 = da.values[60];
  const bool faster = dv.fit->rate < da.fit->rate;
  const bool stable = std::abs(d60 - d40) <= 0.05 * d40 && d60 > 0.01 * da.values[0];
  o.pass = faster && stable;
  o.detail = "mass " + fmt(mass) + "; rate volberg " + fmt(dv.fit->rate) + " vs arc " + fmt(da.fit->rate) +
             "; arc |d60-d40|/d40 = " + fmt(std::abs(d60 - d40) / d40) + " at d60 = " + fmt(d60);
  return o;
}

Outcome cyclicity_sanity() {
  Outcome o;
  SymbolSpec z;
  z.blaschke_zeros = {{0.0, 1}};
  const MuMeasure mu = build_mu(symbol_eval(z, 128).delta, 1.0, 20);  // Delta = 0
  double trivial = 0.0;
  for (double d : cyclicity_indicator(mu, SymbolSpec{}, 20).distances.values) trivial = std::max(trivial, d * d);
  double shift = 0.0;
  for (double d : cyclicity_indicator(mu, z, 20).distances.values) shift = std::max(shift, std::abs(d * d - 0.5));
  o.pass = trivial <= 1e-8 && shift <= 1e-8;
  o.detail = "theta=1 max d^2 " + fmt(trivial) + "; theta=z max |d^2 - 1/2| " + fmt(shift);
  return o;
}

Outcome classifier_consistency() {
  Outcome o;
  const std::vector<OuterModulus> outers{
      OuterModulus::constant(1.0),
      OuterModulus::constant(0.5),
      OuterModulus::on_arcs({{{0.1, 0.4}, 0.5}}),
      OuterModulus::on_arcs({{{0.55, 0.75}, 0.2}, {{0.8, 0.9}, 0.0}}),
      OuterModulus::bump({0.5, 0.9}, 0.9),
      OuterModulus::cos_half(),
      OuterModulus::on_cantor_set(CantorSchedule::power_law(0.5, 1.5, {0, 1}, 12), 0.5),
      OuterModulus::on_cantor_set(CantorSchedule::middle_thirds({0, 1}, 12), 0.5),
      OuterModulus::distance(CantorSchedule::middle_thirds({0, 1}, 12), 1.0),
      OuterModulus::volberg(CantorSchedule::power_law(0.5, 1.5, {0, 1}, 12), 1.0, 0.001, 2.0)};
  std::vector<SingularMeasureSpec> singulars(5);
  singulars[1].atoms = {{1.0, 0.5}};
  singulars[2].cantor_parts = {{CantorSchedule::power_law(0.5, 1.0, {0.6, 0.7}, 10), 1.0}};
  singulars[3].cantor_parts = {{CantorSchedule::middle_thirds({0.2, 0.3}, 8), 0.5}};
  singulars[4].atoms = {{5.0, 0.2}};
  singulars[4].cantor_parts = {{CantorSchedule::power_law(0.5, 1.0, {0.15, 0.3}, 10), 0.7}};
  int conflicts = 0, dense = 0, not_dense = 0, indeterminate = 0;
  for (const OuterModulus& out : outers)
    for (const SingularMeasureSpec& nu : singulars) {
      SymbolSpec s;
      s.outer = out;
      s.singular = nu;
      const CorollaryVerdict v = corollary_classifier(s, 1.0);
      conflicts += v.recipe_2_4 && (v.hyp_2_1 || v.hyp_2_3);
      dense += v.prediction == Prediction::dense;
      not_dense += v.prediction == Prediction::not_dense;
      indeterminate += v.prediction == Prediction::indeterminate;
    }
  o.pass = conflicts == 0;
  o.detail = std::to_string(outers.size() * singulars.size()) + " specs, " + std::to_string(conflicts) +
             " conflicts (dense " + std::to_string(dense) + ", not dense " + std::to_string(not_dense) +
             ", indeterminate " + std::to_string(indeterminate) + ")";
  return o;
}

Outcome determinism() {
  Outcome o;
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(HBSPACE_SCENARIOS))
    if (e.path().extension() == ".json") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  const SuiteResult a = run_suite(files, 1);
  const SuiteResult b = run_suite(files, 2);
  bool same = a.comparison_csv == b.comparison_csv;
  std::size_t bytes = a.comparison_csv.size();
  for (std::size_t i = 0; i < files.size(); ++i) {
    same &= a.reports[i].csv == b.reports[i].csv;
    bytes += a.reports[i].csv.size();
  }
  o.pass = same && a.status == 0;
  o.detail = std::to_string(files.size()) + " scenarios, " + std::to_string(bytes) + " CSV bytes, " +
             (same ? "identical" : "different") + ", suite status " + std::to_string(a.status);
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "moment closed form", 1.0, moment_closed_form},
      {2, "norm-equivalence band", 1.0, norm_equivalence_band},
      {3, "Gram oracle equivalence", 30.0, gram_oracle},
      {4, "kernel PSD", 10.0, kernel_psd},
      {5, "J-embedding identities", 60.0, j_embedding},
      {6, "division diagnostic", 10.0, division},
      {7, "Beurling-Carleson entropy", 1.0, bc_entropy_checks},
      {8, "decomposition conservation", 1.0, decomposition},
      {9, "splitting-indicator dichotomy", 300.0, splitting_dichotomy},
      {10, "cyclicity-indicator sanity", 10.0, cyclicity_sanity},
      {11, "classifier consistency", 60.0, classifier_consistency},
      {12, "determinism", 0.0, determinism}};
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit == 0.0 || t < c.time_limit;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %-30s %s [%.2fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), t,
                in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

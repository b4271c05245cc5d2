#pragma once

// Scenario files and experiment runners behind the command-line tool.

#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hbspace/corollaries.hpp"
#include "hbspace/embedding.hpp"
#include "hbspace/io.hpp"
#include "hbspace/moments.hpp"

namespace hbspace {

inline constexpr const char* version = "1.0.0";

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"symbol",  "moments", "splitting", "cyclicity", "kernel-gram",
                                              "embed",   "division", "bcset",    "classify"};
  return kinds;
}

struct Scenario {
  std::string name = "scenario";
  std::string kind = "symbol";
  SymbolSpec symbol;
  double alpha = 1.0;
  std::vector<std::size_t> degrees{20};
  std::size_t grid = 1024;
  std::uint64_t seed = 1;
  json params = json::object();  // kind-specific inputs, defaults filled in when run

  std::size_t max_degree() const {
    std::size_t n = 0;
    for (std::size_t d : degrees) n = std::max(n, d);
    return n;
  }
};

inline json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["kind"] = s.kind;
  j["symbol"] = to_json(s.symbol);
  j["alpha"] = s.alpha;
  j["degrees"] = s.degrees;
  j["grid"] = s.grid;
  j["seed"] = s.seed;
  j["params"] = s.params;
  return j;
}

inline Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("scenario: expected an object");
  Scenario s;
  s.name = detail::string_or(j, "name", s.name, "scenario");
  s.kind = detail::string_or(j, "kind", s.kind, "scenario");
  if (std::find(experiment_kinds().begin(), experiment_kinds().end(), s.kind) == experiment_kinds().end())
    throw ParseError("scenario.kind: unknown experiment kind '" + s.kind + "'");
  if (j.contains("symbol")) s.symbol = symbol_from_json(j.at("symbol"), "scenario.symbol");
  s.alpha = detail::number_or(j, "alpha", s.alpha, "scenario");
  if (j.contains("degrees")) {
    const json& d = j.at("degrees");
    if (!d.is_array() || d.empty()) throw ParseError("scenario.degrees: expected a nonempty array");
    s.degrees.clear();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!d[i].is_number_unsigned()) throw ParseError("scenario.degrees[" + std::to_string(i) + "]: expected a nonnegative integer");
      s.degrees.push_back(d[i].get<std::size_t>());
    }
  } else if (j.contains("degree")) {
    if (!j.at("degree").is_number_unsigned()) throw ParseError("scenario.degree: expected a nonnegative integer");
    s.degrees = {j.at("degree").get<std::size_t>()};
  }
  if (j.contains("grid")) {
    if (!j.at("grid").is_number_unsigned()) throw ParseError("scenario.grid: expected a positive integer");
    s.grid = j.at("grid").get<std::size_t>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ParseError("scenario.seed: expected a nonnegative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw ParseError("scenario.params: expected an object");
    s.params = j.at("params");
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open scenario file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

struct Report {
  std::string name;
  std::string kind;
  int status = 0;  // 0 success, 2 refusal or hypothesis violation, 1 internal error
  std::string error;
  std::vector<std::string> warnings;
  std::string csv;
  json results = json::object();
  json scenario = json::object();
  double wall_time = 0.0;
  std::optional<double> fitted_rate;
  std::optional<std::string> prediction;

  json metadata() const {
    json j;
    j["tool"] = "hbspace";
    j["version"] = version;
    j["label"] = "finite-degree evidence";
    j["scenario"] = scenario;
    j["status"] = status;
    if (!error.empty()) j["error"] = error;
    if (!warnings.empty()) j["warnings"] = warnings;
    j["results"] = results;
    j["wall_time_seconds"] = wall_time;
    return j;
  }
};

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const Refusal*>(&e) || dynamic_cast<const DomainError*>(&e) ||
      dynamic_cast<const DegenerateSymbolError*>(&e) || dynamic_cast<const SingularityError*>(&e))
    return 2;
  return 1;
}

namespace detail {

template <class T>
T param(json& p, const char* key, T fallback) {
  if (!p.contains(key)) p[key] = fallback;
  try {
    return p.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("scenario.params.") + key + ": wrong type");
  }
}

inline json fit_json(const std::optional<DecayFit>& f) {
  if (!f) return nullptr;
  return json{{"rate", f->rate}, {"intercept", f->intercept}, {"residual", f->residual}, {"points", f->points}};
}

inline void require_oversampling(const Scenario& s) {
  if (s.grid < required_grid_size(s.max_degree()))
    throw Refusal("grid " + std::to_string(s.grid) + " too small for degree " + std::to_string(s.max_degree()) +
                  "; need grid >= " + std::to_string(required_grid_size(s.max_degree())));
}

inline std::string distance_csv(const DistanceSequence& d) {
  CsvTable t({"n", "d_n"});
  for (std::size_t n = 0; n < d.values.size(); ++n) t.add_row({static_cast<double>(n), d.values[n]});
  return t.str();
}

inline json distance_json(const DistanceSequence& d, const std::vector<std::size_t>& degrees) {
  json j;
  j["target"] = d.target;
  j["target_norm2"] = d.target_norm2;
  j["jitter"] = d.jitter;
  j["jitter_escalations"] = d.jitter_escalations;
  j["fit"] = fit_json(d.fit);
  json at = json::object();
  for (std::size_t n : degrees)
    if (n < d.values.size()) at[std::to_string(n)] = d.values[n];
  j["d_at_degrees"] = at;
  return j;
}

inline SymbolSpec inner_spec_param(json& p, const char* key, const SymbolSpec& fallback) {
  if (!p.contains(key)) p[key] = to_json(fallback);
  return symbol_from_json(p.at(key), std::string("scenario.params.") + key);
}

inline void run_symbol(Scenario& s, Report& r) {
  const SymbolSample sm = symbol_eval(s.symbol, s.grid);
  CsvTable t({"theta", "re", "im", "delta"});
  for (std::size_t j = 0; j < s.grid; ++j)
    t.add_row({BoundaryGrid::theta(j, s.grid), sm.b[j].real(), sm.b[j].imag(), sm.delta.delta[j]});
  r.csv = t.str();
  r.results["extreme"] = sm.extreme;
  r.results["extremality"] = sm.extremality;
  r.results["boundary_mass"] = sm.delta.mass();
  r.results["carrier"] = sm.delta.declared ? to_json(sm.delta.carrier) : json("grid-detected");
  r.results["guarded_nodes"] = sm.guarded.size();
}

inline void run_moments(Scenario& s, Report& r) {
  require_oversampling(s);
  const std::size_t N = s.max_degree();
  const SymbolSample sm = symbol_eval(s.symbol, s.grid);
  const MuMeasure mu = build_mu(sm.delta, s.alpha, N);
  const MomentMatrix G = gram_matrix(mu, N);
  CsvTable t({"n", "beta_n", "c_re", "c_im", "gram_nn"});
  for (std::size_t n = 0; n <= N; ++n) {
    const complex c = mu.c(static_cast<long>(n));
    const auto i = static_cast<Eigen::Index>(n);
    t.add_row({static_cast<double>(n), G.beta[n], c.real(), c.imag(), G.entries(i, i).real()});
  }
  r.csv = t.str();
  r.results["boundary_mass"] = mu.boundary_mass();
  r.results["min_eigenvalue"] = min_eigenvalue(G.entries);
  r.results["trace"] = G.entries.trace().real();
  r.results["shift_norm_squared"] = shift_norm_squared(G);
}

inline void run_splitting(Scenario& s, Report& r) {
  require_oversampling(s);
  const std::size_t N = s.max_degree();
  const SymbolSample sm = symbol_eval(s.symbol, s.grid);
  const MuMeasure mu = build_mu(sm.delta, s.alpha, N);
  if (!s.params.contains("target")) s.params["target"] = json{{"kind", "carrier"}};
  const json& tj = s.params.at("target");
  std::vector<complex> t;
  if (tj.is_object() && detail::string_or(tj, "kind", "carrier", "scenario.params.target") == "carrier") {
    const CarrierSupport cs = carrier_and_support(sm.delta);
    t = grid_indicator(cs.carrier, s.grid);
  } else {
    t = grid_indicator(circle_set_from_json(tj, "scenario.params.target"), s.grid);
  }
  const DistanceSequence d = splitting_indicator(mu, t, N);
  r.csv = distance_csv(d);
  r.results = distance_json(d, s.degrees);
  r.results["boundary_mass"] = mu.boundary_mass();
  r.results["extreme"] = sm.extreme;
  if (d.fit) r.fitted_rate = d.fit->rate;
}

inline void run_cyclicity(Scenario& s, Report& r) {
  require_oversampling(s);
  const std::size_t N = s.max_degree();
  const SymbolSample sm = symbol_eval(s.symbol, s.grid);
  const MuMeasure mu = build_mu(sm.delta, s.alpha, N);
  const SymbolSpec theta = inner_spec_param(s.params, "theta", s.symbol.inner_part());
  CyclicityOptions opt;
  opt.radial_nodes = param<std::size_t>(s.params, "radial_nodes", opt.radial_nodes);
  opt.tolerance = param<double>(s.params, "tolerance", opt.tolerance);
  const CyclicityReport rep = cyclicity_indicator(mu, theta, N, opt);
  r.csv = distance_csv(rep.distances);
  r.results = distance_json(rep.distances, s.degrees);
  r.results["radial_nodes"] = rep.radial_nodes;
  r.results["angular_nodes"] = rep.angular_nodes;
  r.results["node_change"] = rep.node_change;
  r.results["quadrature_converged"] = rep.converged;
  if (rep.distances.fit) r.fitted_rate = rep.distances.fit->rate;
}

inline std::vector<complex> random_points(std::mt19937_64& rng, std::size_t n, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<complex> pts;
  while (pts.size() < n) {
    const complex z = std::polar(radius * std::sqrt(u(rng)), two_pi * u(rng));
    if (std::find(pts.begin(), pts.end(), z) == pts.end()) pts.push_back(z);
  }
  return pts;
}

inline void run_kernel_gram(Scenario& s, Report& r) {
  const Symbol b(s.symbol, s.grid);
  std::vector<complex> pts;
  if (s.params.contains("points")) {
    const json& pj = s.params.at("points");
    if (!pj.is_array()) throw ParseError("scenario.params.points: expected an array");
    for (std::size_t i = 0; i < pj.size(); ++i)
      pts.push_back(detail::complex_value(pj[i], "scenario.params.points[" + std::to_string(i) + "]"));
  } else {
    const auto n = param<std::size_t>(s.params, "random_points", 8);
    const double radius = param<double>(s.params, "radius", 0.9);
    std::mt19937_64 rng(s.seed);
    pts = random_points(rng, n, radius);
    json arr = json::array();
    for (complex z : pts) arr.push_back(complex_json(z));
    s.params["resolved_points"] = arr;
  }
  const KernelGram K = kernel_gram(b, pts);
  CsvTable t({"i", "j", "re", "im"});
  for (Eigen::Index i = 0; i < K.K.rows(); ++i)
    for (Eigen::Index j = 0; j < K.K.cols(); ++j)
      t.add_row({static_cast<double>(i), static_cast<double>(j), K.K(i, j).real(), K.K(i, j).imag()});
  r.csv = t.str();
  r.results["points"] = pts.size();
  r.results["min_eigenvalue"] = pts.empty() ? 0.0 : min_eigenvalue(K.K);
  r.results["trace"] = K.K.trace().real();
}

inline void run_embed(Scenario& s, Report& r) {
  const complex lambda = detail::complex_value(
      s.params.contains("lambda") ? s.params.at("lambda") : (s.params["lambda"] = json::array({0.3, 0.2})),
      "scenario.params.lambda");
  JSolveOptions opt;
  opt.boundary_degree = param<std::size_t>(s.params, "boundary_degree", s.grid / 4);
  opt.jitter_scale = param<double>(s.params, "jitter_scale", opt.jitter_scale);
  const SymbolSample sm = symbol_eval(s.symbol, s.grid);
  const Symbol b(s.symbol, s.grid);
  const complex bl = b(lambda);
  const double hb2 = (1.0 - std::norm(bl)) / (1.0 - std::norm(lambda));
  opt.hb_norm2 = hb2;
  const DiskSeries f = kernel_series(sm, bl, lambda);
  const JSolveReport rep = j_embedding_solve(s.symbol, f, s.grid, opt);
  const JPair closed = kernel_pair(sm, bl, lambda);
  CsvTable t({"theta", "g_re", "g_im", "closed_re", "closed_im"});
  std::vector<double> err(s.grid);
  for (std::size_t j = 0; j < s.grid; ++j) {
    t.add_row({BoundaryGrid::theta(j, s.grid), rep.pair.g[j].real(), rep.pair.g[j].imag(), closed.g[j].real(),
               closed.g[j].imag()});
    err[j] = std::norm(rep.pair.g[j] - closed.g[j]);
  }
  double ann = 0.0;
  for (std::size_t k = 0; k <= opt.boundary_degree / 2; ++k)
    ann = std::max(ann, std::abs(annihilator_check(sm, rep.pair, DiskSeries::monomial(k))));
  r.csv = t.str();
  r.results["residual"] = rep.residual;
  r.results["isometry_defect"] = rep.isometry_defect ? json(*rep.isometry_defect) : json(nullptr);
  r.results["closed_form_l2_error"] = std::sqrt(pairwise_sum(err) / static_cast<double>(s.grid));
  r.results["max_annihilator_residual"] = ann;
  r.results["jitter"] = rep.jitter;
  r.results["warning"] = rep.warning;
  r.results["boundary_aliasing"] = rep.boundary_aliasing;
  r.warnings = rep.warnings;
  r.results["extreme"] = rep.extreme;
  r.results["hb_norm2"] = hb2;
}

inline void run_division(Scenario& s, Report& r) {
  SymbolSpec fallback = s.symbol.inner_part();
  if (fallback.blaschke_zeros.empty() && fallback.singular.empty()) fallback.blaschke_zeros = {{0.0, 1}};
  const SymbolSpec theta = inner_spec_param(s.params, "theta", fallback);
  if (!s.params.contains("f")) s.params["f"] = json{{"kind", "one"}};
  const json& fj = s.params.at("f");
  const std::string fk = detail::string_or(fj, "kind", "one", "scenario.params.f");
  BoundaryGrid f;
  if (fk == "one") {
    f = BoundaryGrid(std::vector<complex>(s.grid, 1.0));
  } else if (fk == "theta_times_poly") {
    std::vector<complex> c;
    const json& pj = detail::field(fj, "poly", "scenario.params.f");
    for (std::size_t i = 0; i < pj.size(); ++i)
      c.push_back(detail::complex_value(pj[i], "scenario.params.f.poly[" + std::to_string(i) + "]"));
    f = pointwise(inner_boundary_grid(theta, s.grid), evaluate_on_grid(DiskSeries(c), s.grid));
  } else {
    throw ParseError("scenario.params.f.kind: unknown '" + fk + "'");
  }
  const DivisionReport rep = division_diagnostic(theta, f);
  std::vector<complex> v(s.grid);
  const BoundaryGrid th = inner_boundary_grid(theta, s.grid);
  for (std::size_t j = 0; j < s.grid; ++j) v[j] = f[j] * std::conj(th[j]);
  const auto minus = hardy_project_minus(BoundaryGrid(v));
  CsvTable t({"k", "re", "im"});
  for (std::size_t k = 0; k < std::min<std::size_t>(minus.size(), 64); ++k)
    t.add_row({-static_cast<double>(k + 1), minus[k].real(), minus[k].imag()});
  r.csv = t.str();
  r.results["value"] = rep.value;
  r.results["guarded_nodes"] = rep.guarded.size();
}

inline void run_bcset(Scenario& s, Report& r) {
  if (!s.params.contains("set"))
    s.params["set"] = json{{"kind", "cantor"}, {"cantor", to_json(CantorSchedule::middle_thirds())}};
  const CircleSet E = circle_set_from_json(s.params.at("set"), "scenario.params.set");
  std::optional<int> depth;
  if (s.params.contains("depth")) depth = param<int>(s.params, "depth", 0);
  const BCReport rep = bc_entropy(E, depth);
  CsvTable t({"index", "partial_sum"});
  for (std::size_t k = 0; k < rep.partial_sums.size(); ++k) t.add_row({static_cast<double>(k), rep.partial_sums[k]});
  r.csv = t.str();
  r.results = to_json(rep);
  const BCSubsetFlag flag = contains_bc_subset_flag(E);
  r.results["contains_bc_subset"] = to_string(flag.answer);
  r.results["flag_explanation"] = flag.explanation;
}

inline void run_classify(Scenario& s, Report& r) {
  const CorollaryVerdict v = corollary_classifier(s.symbol, s.alpha, s.grid);
  CsvTable t({"item", "held"});
  json items = json::array();
  for (const ChecklistItem& c : v.checklist) {
    t.add_row(std::vector<std::string>{"\"" + c.name + "\"", c.held ? "1" : "0"});
    items.push_back(json{{"item", c.name}, {"held", c.held}, {"detail", c.detail}});
  }
  r.csv = t.str();
  r.results["prediction"] = to_string(v.prediction);
  r.results["hyp_2_1"] = v.hyp_2_1;
  r.results["hyp_2_3"] = v.hyp_2_3;
  r.results["recipe_2_4"] = v.recipe_2_4;
  r.results["conflict"] = v.conflict;
  r.results["checklist"] = items;
  const MeasureDecomposition dec = decompose_measure(s.symbol.singular);
  r.results["decomposition"] = dec.report;
  r.prediction = to_string(v.prediction);
}

}  // namespace detail

/// Runs one scenario; never throws for experiment failures (they become the report status).
inline Report run_scenario(Scenario s) {
  Report r;
  r.name = s.name;
  r.kind = s.kind;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (s.kind == "symbol") detail::run_symbol(s, r);
    else if (s.kind == "moments") detail::run_moments(s, r);
    else if (s.kind == "splitting") detail::run_splitting(s, r);
    else if (s.kind == "cyclicity") detail::run_cyclicity(s, r);
    else if (s.kind == "kernel-gram") detail::run_kernel_gram(s, r);
    else if (s.kind == "embed") detail::run_embed(s, r);
    else if (s.kind == "division") detail::run_division(s, r);
    else if (s.kind == "bcset") detail::run_bcset(s, r);
    else if (s.kind == "classify") detail::run_classify(s, r);
    else throw ParseError("unknown experiment kind '" + s.kind + "'");
  } catch (const std::exception& e) {
    r.status = exit_code_for(e);
    r.error = e.what();
    r.csv.clear();
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.scenario = to_json(s);
  return r;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

inline void write_report(const Report& r, const std::string& prefix) {
  write_text(prefix + ".csv", r.csv);
  write_text(prefix + ".json", r.metadata().dump(2) + "\n");
}

struct SuiteResult {
  std::vector<Report> reports;
  std::string comparison_csv;
  int status = 0;
};

/// Runs every scenario file; failures are recorded and the suite continues.
inline SuiteResult run_suite(const std::vector<std::string>& paths, unsigned jobs = 1) {
  SuiteResult out;
  out.reports.resize(paths.size());
  auto run_one = [&](std::size_t i) {
    try {
      out.reports[i] = run_scenario(load_scenario(paths[i]));
    } catch (const std::exception& e) {
      Report r;
      r.name = paths[i];
      r.kind = "unparsed";
      r.status = 1;
      r.error = e.what();
      out.reports[i] = r;
    }
  };
  if (jobs <= 1 || paths.size() <= 1) {
    for (std::size_t i = 0; i < paths.size(); ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < paths.size(); i += jobs) run_one(i);
      });
    for (auto& t : pool) t.join();
  }
  CsvTable t({"name", "kind", "status", "fitted_rate", "prediction"});
  for (const Report& r : out.reports) {
    t.add_row(std::vector<std::string>{r.name, r.kind, std::to_string(r.status),
                                       r.fitted_rate ? format_number(*r.fitted_rate) : "",
                                       r.prediction.value_or("")});
    if (r.status != 0) out.status = 1;
  }
  out.comparison_csv = t.str();
  return out;
}

}  // namespace hbspace

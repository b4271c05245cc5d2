// Command-line front end: one subcommand per experiment kind plus `suite`.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hbspace/experiments.hpp"

namespace {

struct CommonFlags {
  std::optional<double> alpha;
  std::optional<std::size_t> degree;
  std::optional<std::size_t> grid;
  std::optional<std::uint64_t> seed;
  std::string scenario;
  std::string out;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--alpha", f.alpha, "weight parameter alpha > 0");
  sub->add_option("--degree", f.degree, "maximal polynomial degree N");
  sub->add_option("--grid", f.grid, "boundary grid size M");
  sub->add_option("--seed", f.seed, "seed for random point configurations");
  sub->add_option("--scenario", f.scenario, "scenario JSON file");
  sub->add_option("--out", f.out, "output prefix for <prefix>.csv and <prefix>.json (default: stdout CSV)");
}

int run_single(const std::string& kind, const CommonFlags& f) {
  hbspace::Scenario s;
  try {
    if (!f.scenario.empty()) s = hbspace::load_scenario(f.scenario);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hbspace::exit_code_for(e);
  }
  s.kind = kind;
  if (f.scenario.empty()) s.name = kind;
  if (f.alpha) s.alpha = *f.alpha;
  if (f.degree) s.degrees = {*f.degree};
  if (f.grid) s.grid = *f.grid;
  if (f.seed) s.seed = *f.seed;
  const hbspace::Report r = hbspace::run_scenario(s);
  if (r.status != 0) std::cerr << "error: " << r.error << "\n";
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << "\n";
  try {
    if (f.out.empty()) {
      std::cout << r.csv;
    } else {
      hbspace::write_report(r, f.out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return r.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for de Branges-Rovnyak spaces H(b) and the measures mu(b, alpha)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hbspace::version));

  std::vector<std::pair<CLI::App*, std::string>> subs;
  CommonFlags flags;
  const std::vector<std::pair<std::string, std::string>> kinds{
      {"symbol", "sample b and Delta on the boundary grid"},
      {"moments", "disk moments, Fourier coefficients of Delta^2 and the Gram matrix"},
      {"splitting", "distance of a boundary-only element to the polynomials in P^2(mu)"},
      {"cyclicity", "distance from 1 to theta * Poly_n in P^2(mu)"},
      {"kernel-gram", "Gram matrix of H(b) reproducing kernels"},
      {"embed", "least-squares J embedding of a reproducing kernel"},
      {"division", "|P_-(f conj(theta))| for an inner theta"},
      {"bcset", "Beurling-Carleson entropy of a circle set"},
      {"classify", "corollary hypothesis checklist and density prediction"}};
  for (const auto& [name, help] : kinds) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    subs.emplace_back(sub, name);
  }

  std::vector<std::string> suite_files;
  std::string suite_out;
  unsigned jobs = 1;
  CLI::App* suite = app.add_subcommand("suite", "run several scenario files and compare them");
  suite->add_option("files", suite_files, "scenario JSON files");
  suite->add_option("--out", suite_out, "output directory for reports and suite.csv");
  suite->add_option("--jobs", jobs, "scenarios run concurrently")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (suite->parsed()) {
    const hbspace::SuiteResult res = hbspace::run_suite(suite_files, jobs);
    try {
      if (!suite_out.empty()) {
        std::filesystem::create_directories(suite_out);
        for (const hbspace::Report& r : res.reports)
          if (r.kind != "unparsed") hbspace::write_report(r, suite_out + "/" + r.name);
        hbspace::write_text(suite_out + "/suite.csv", res.comparison_csv);
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    for (const hbspace::Report& r : res.reports)
      if (r.status != 0) std::cerr << r.name << ": " << r.error << "\n";
      else for (const std::string& w : r.warnings) std::cerr << r.name << ": warning: " << w << "\n";
    std::cout << res.comparison_csv;
    return res.status;
  }
  for (const auto& [sub, name] : subs)
    if (sub->parsed()) return run_single(name, flags);
  return 1;
}

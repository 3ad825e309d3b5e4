// solmanifold <subcommand> --config <file> [--out <dir>] [--workers N]
//
// Exit codes: 0 all checks pass, 1 a check failed or a run errored, 2 usage
// (bad flags, unreadable or invalid config).

#include <algorithm>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "solmanifold/errors.hpp"
#include "solmanifold/experiments.hpp"

using namespace solmanifold;

namespace {

struct Common {
  std::string config;
  std::string out;
  int workers = 0;
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config, "experiment INI file");
  if (config_required) opt->required();
  sub->add_option("--out", c.out, "output directory (overrides experiment.output_dir)");
  sub->add_option("--workers", c.workers, "concurrent sweep points")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const Common& c, const std::string& fallback_tag) {
  ExperimentConfig cfg = c.config.empty() ? default_config(fallback_tag) : load_config(c.config);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.workers > 0) cfg.workers = c.workers;
  return cfg;
}

void require_valid(const ExperimentConfig& cfg) {
  const auto v = validate(cfg);
  if (v.empty()) return;
  std::string msg = "invalid config";
  for (const auto& s : v) msg += "\n  " + s;
  throw UsageError(msg);
}

int finish(const ExperimentReport& rep, const std::string& dir) {
  write_report(rep, dir);
  print_summary(std::cout, rep);
  std::cout << (rep.passed() ? "PASS " : "FAIL ") << rep.experiment << " -> " << dir << '\n';
  return rep.passed() ? 0 : 1;
}

int run_restricted(const Common& c, const std::string& fallback, const std::set<std::string>& allowed) {
  const ExperimentConfig cfg = resolve(c, fallback);
  if (!allowed.count(cfg.experiment))
    throw UsageError("experiment '" + cfg.experiment + "' does not belong to this subcommand");
  require_valid(cfg);
  return finish(run(cfg), cfg.output_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the centre-stable manifold of the energy-critical wave equation"};
  app.require_subcommand(1);

  Common spectrum_c, evolve_c, strich_c, sweep_c, validate_c, manifold_c;
  auto* spectrum = app.add_subcommand("spectrum", "ground state, Sturm count, scaling law");
  add_common(spectrum, spectrum_c, false);
  auto* evolve = app.add_subcommand("evolve", "nonlinear evolutions (stationarity, energy, weighted growth)");
  add_common(evolve, evolve_c, false);
  auto* strich = app.add_subcommand("strichartz", "reverse Strichartz, secular and pairing experiments");
  add_common(strich, strich_c, true);
  auto* sweep = app.add_subcommand("sweep", "run any configured experiment");
  add_common(sweep, sweep_c, true);
  auto* validate_cmd = app.add_subcommand("validate", "static config checks");
  validate_cmd->add_option("--config", validate_c.config, "experiment INI file")->required();

  auto* manifold = app.add_subcommand("manifold", "single manifold query: h and the modulation trajectory");
  add_common(manifold, manifold_c, false);
  double eps = 0.0, T = 0.0, dt = 0.0;
  std::string family, method;
  manifold->add_option("--eps", eps, "data size")->check(CLI::PositiveNumber);
  manifold->add_option("--family", family, "data family (bump, gaussian, ...)");
  manifold->add_option("--T", T, "trajectory horizon")->check(CLI::PositiveNumber);
  manifold->add_option("--dt", dt, "history time step")->check(CLI::PositiveNumber);
  manifold->add_option("--method", method, "shoot | picard | both")
      ->check(CLI::IsMember({"shoot", "picard", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*spectrum) return run_restricted(spectrum_c, "spectrum", {"spectrum"});
    if (*evolve)
      return run_restricted(evolve_c, "energy_conservation",
                            {"stationarity", "energy_conservation", "weighted_growth"});
    if (*strich)
      return run_restricted(strich_c, "strichartz_free",
                            {"strichartz_free", "strichartz_perturbed", "secular", "pairing_identity"});
    if (*sweep) {
      const ExperimentConfig cfg = resolve(sweep_c, "");
      require_valid(cfg);
      return finish(run(cfg), cfg.output_dir);
    }
    if (*validate_cmd) {
      const ExperimentConfig cfg = load_config(validate_c.config);
      const auto v = validate(cfg);
      for (const auto& s : v) std::cout << "violation: " << s << '\n';
      if (v.empty()) std::cout << "ok\n";
      return v.empty() ? 0 : 1;
    }
    if (*manifold) {
      ExperimentConfig cfg = resolve(manifold_c, "adot_l1");
      cfg.data.amplitude = 1e-3;
      if (!cfg.sweep.empty() && !manifold_c.config.empty()) cfg.data.amplitude = cfg.sweep.front();
      if (eps > 0.0) cfg.data.amplitude = eps;
      if (!family.empty()) cfg.data.tag = family;
      if (T > 0.0) cfg.T = T;
      if (dt > 0.0) cfg.dt = dt;
      if (!method.empty()) cfg.method = method;
      if (manifold_c.out.empty() && manifold_c.config.empty()) cfg.output_dir = "out/manifold";
      require_valid(cfg);
      return finish(run_manifold(cfg), cfg.output_dir);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace solmanifold {

struct DataFamily {
  std::string tag = "bump";  ///< bump | random_bumps | resonance_weight | phi5 | gaussian | soliton
  /// Perturbation size; for soliton the data is amplitude * phi.
  double amplitude = 1.0;
  double centre = 2.0;
  double width = 1.0;
  double q_scale = 0.0;  ///< velocity = q_scale * profile
  std::size_t count = 20;  ///< members of random_bumps
};

struct ExperimentConfig {
  std::string experiment;
  double R = 40.0;
  std::size_t n = 1601;
  double T = 40.0;
  double dt = 0.0;      ///< 0 selects the experiment's default (dr/2 for leapfrog)
  double R_obs = 10.0;
  DataFamily data;
  std::vector<double> sweep;
  std::optional<std::uint64_t> seed;
  std::string output_dir = "out";
  std::string method = "both";  ///< shoot | picard | both (manifold runs)
  std::size_t substeps = 2;     ///< leapfrog steps per Picard history step
  int workers = 1;
  std::map<std::string, double> tolerance;
};

/// Experiment tags accepted by run().
const std::vector<std::string>& experiment_tags();

/// Defaults for a tag, including its tolerance table.
ExperimentConfig default_config(const std::string& tag);

/// Static checks (tag, CFL, causality, modulation window, sweep, seed, tolerance
/// keys); empty means runnable.
std::vector<std::string> validate(const ExperimentConfig& cfg);

/// Parses the INI text; unknown sections or keys throw UsageError naming the
/// offending path.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

struct Fit {
  std::string name;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_lo = 0.0, slope_hi = 0.0;  ///< slope +- 2 standard errors
  double residual = 0.0;                  ///< rms of the fit residuals
};

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  ///< "<", "<=", ">", ">=", "=="
  bool pass = false;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::string> descriptions;
  std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config;
  nlohmann::json records = nlohmann::json::array();
  std::vector<Fit> fits;
  std::vector<Check> checks;
  std::vector<Table> tables;
  std::vector<std::string> errors;
  bool passed() const;
};

/// Records a check against cfg.tolerance[name] and returns it.
Check& add_check(ExperimentReport& rep, const ExperimentConfig& cfg, const std::string& name,
                 double value, const std::string& relation);

/// Least squares y = intercept + slope x.
Fit fit_line(const std::string& name, const std::vector<double>& x, const std::vector<double>& y);

ExperimentReport run(const ExperimentConfig& cfg);

/// Single manifold query of size eps = cfg.data.amplitude: h by shooting and/or
/// by Picard iteration, the ModulationTrajectory table and norm reports.
ExperimentReport run_manifold(const ExperimentConfig& cfg);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
nlohmann::json report_to_json(const ExperimentReport& rep);

/// report.json, one CSV per table, plot.gp and SCHEMA.md under dir.
void write_report(const ExperimentReport& rep, const std::string& dir);

void write_table_csv(std::ostream& os, const Table& t);

/// One line per check: "PASS name value relation threshold".
void print_summary(std::ostream& os, const ExperimentReport& rep);

}  // namespace solmanifold

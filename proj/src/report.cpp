#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <boost/math/statistics/linear_regression.hpp>

#include "solmanifold/errors.hpp"
#include "solmanifold/experiments.hpp"

namespace solmanifold {

bool ExperimentReport::passed() const {
  if (!errors.empty() || checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

Check& add_check(ExperimentReport& rep, const ExperimentConfig& cfg, const std::string& name,
                 double value, const std::string& relation) {
  const auto it = cfg.tolerance.find(name);
  if (it == cfg.tolerance.end()) throw UsageError("no tolerance declared for check '" + name + "'");
  Check c{name, value, it->second, relation, false};
  if (std::isfinite(value)) {
    if (relation == "<") c.pass = value < c.threshold;
    else if (relation == "<=") c.pass = value <= c.threshold;
    else if (relation == ">") c.pass = value > c.threshold;
    else if (relation == ">=") c.pass = value >= c.threshold;
    else if (relation == "==") c.pass = value == c.threshold;
    else throw UsageError("unknown relation " + relation);
  }
  rep.checks.push_back(c);
  return rep.checks.back();
}

Fit fit_line(const std::string& name, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("fit needs two or more points");
  Fit f;
  f.name = name;
  const auto [c0, c1] = boost::math::statistics::simple_ordinary_least_squares(x, y);
  f.intercept = c0;
  f.slope = c1;
  const std::size_t m = x.size();
  double ss = 0.0, mx = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (c0 + c1 * x[i]);
    ss += e * e;
    mx += x[i];
  }
  mx /= static_cast<double>(m);
  for (double xi : x) sxx += (xi - mx) * (xi - mx);
  f.residual = std::sqrt(ss / static_cast<double>(m));
  const double se = m > 2 ? std::sqrt(ss / static_cast<double>(m - 2) / sxx) : 0.0;
  f.slope_lo = c1 - 2.0 * se;
  f.slope_hi = c1 + 2.0 * se;
  return f;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = cfg.experiment;
  j["grid"] = {{"R", cfg.R}, {"n", cfg.n}};
  j["time"] = {{"T", cfg.T}, {"dt", cfg.dt}};
  j["R_obs"] = cfg.R_obs;
  j["data"] = {{"family", cfg.data.tag}, {"amplitude", cfg.data.amplitude}, {"centre", cfg.data.centre}, {"width", cfg.data.width},
               {"q_scale", cfg.data.q_scale}, {"count", cfg.data.count}};
  j["sweep"] = cfg.sweep;
  j["seed"] = cfg.seed ? nlohmann::json(*cfg.seed) : nlohmann::json(nullptr);
  j["output_dir"] = cfg.output_dir;
  j["method"] = cfg.method;
  j["substeps"] = cfg.substeps;
  j["workers"] = cfg.workers;
  j["tolerance"] = cfg.tolerance;
  return j;
}

nlohmann::json report_to_json(const ExperimentReport& rep) {
  nlohmann::json j;
  j["experiment"] = rep.experiment;
  j["config"] = rep.config;
  j["records"] = rep.records;
  j["fits"] = nlohmann::json::array();
  for (const auto& f : rep.fits)
    j["fits"].push_back({{"name", f.name}, {"slope", f.slope}, {"intercept", f.intercept},
                         {"slope_ci", {f.slope_lo, f.slope_hi}}, {"residual", f.residual}});
  j["checks"] = nlohmann::json::array();
  for (const auto& c : rep.checks)
    j["checks"].push_back({{"name", c.name}, {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr)},
                           {"relation", c.relation}, {"threshold", c.threshold}, {"pass", c.pass}});
  j["errors"] = rep.errors;
  j["pass"] = rep.passed();
  return j;
}

void write_table_csv(std::ostream& os, const Table& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  char buf[32];
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      os << (c ? "," : "") << buf;
    }
    os << '\n';
  }
}

namespace {

void write_schema(const ExperimentReport& rep, std::ostream& os) {
  os << "# Output schema: " << rep.experiment << "\n\n";
  os << "`report.json` holds the config echo, per-run records, fits (slope, intercept,\n"
        "slope_ci = slope +- 2 standard errors, rms residual), checks (value, relation,\n"
        "threshold, pass) and errors. Numbers in CSV files use %.17g.\n";
  for (const auto& t : rep.tables) {
    os << "\n## " << t.name << ".csv\n\n| column | meaning |\n|---|---|\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      os << "| " << t.columns[c] << " | " << (c < t.descriptions.size() ? t.descriptions[c] : "") << " |\n";
  }
}

// One plot per table: first column against the others, log axes when all
// values are positive.
void write_plot(const ExperimentReport& rep, std::ostream& os) {
  os << "# gnuplot script; run from this directory\nset datafile separator ','\nset key autotitle columnhead\n"
        "set terminal pngcairo size 900,600\n";
  for (const auto& t : rep.tables) {
    if (t.columns.size() < 2) continue;
    bool positive = !t.rows.empty();
    for (const auto& r : t.rows)
      for (double v : r) positive = positive && v > 0.0;
    os << "\nset output '" << t.name << ".png'\n";
    os << (positive ? "set logscale xy\n" : "unset logscale\n");
    os << "set xlabel '" << t.columns[0] << "'\nplot ";
    for (std::size_t c = 1; c < t.columns.size(); ++c)
      os << (c > 1 ? ", " : "") << "'" << t.name << ".csv' using 1:" << c + 1 << " with linespoints";
    os << '\n';
  }
}

}  // namespace

void write_report(const ExperimentReport& rep, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream f(fs::path(dir) / "report.json");
    f << report_to_json(rep).dump(2) << '\n';
  }
  for (const auto& t : rep.tables) {
    std::ofstream f(fs::path(dir) / (t.name + ".csv"));
    write_table_csv(f, t);
  }
  {
    std::ofstream f(fs::path(dir) / "plot.gp");
    write_plot(rep, f);
  }
  {
    std::ofstream f(fs::path(dir) / "SCHEMA.md");
    write_schema(rep, f);
  }
}

void print_summary(std::ostream& os, const ExperimentReport& rep) {
  char buf[256];
  for (const auto& c : rep.checks) {
    std::snprintf(buf, sizeof buf, "%s %-34s %.6g %s %.6g", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value,
                  c.relation.c_str(), c.threshold);
    os << buf << '\n';
  }
  for (const auto& e : rep.errors) os << "ERROR " << e << '\n';
}

}  // namespace solmanifold

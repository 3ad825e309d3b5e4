#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "solmanifold/errors.hpp"
#include "solmanifold/experiments.hpp"
#include "solmanifold/soliton.hpp"

namespace solmanifold {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"experiment", {"tag", "seed", "output_dir", "method", "workers"}},
      {"grid", {"R", "n"}},
      {"time", {"T", "dt"}},
      {"observation", {"R_obs"}},
      {"data", {"family", "amplitude", "centre", "width", "q_scale", "count"}},
      {"sweep", {"values"}},
      {"picard", {"substeps"}},
      {"tolerance", {}},  // keys checked against the tag's tolerance table
  };
  return s;
}

template <class T>
T get(const pt::ptree& sec, const std::string& path, const std::string& key) {
  const std::string raw = sec.get<std::string>(key);
  try {
    if constexpr (std::is_same_v<T, std::string>) {
      return boost::trim_copy(raw);
    } else {
      std::size_t used = 0;
      const std::string s = boost::trim_copy(raw);
      T v{};
      if constexpr (std::is_floating_point_v<T>) v = std::stod(s, &used);
      else if constexpr (std::is_signed_v<T>) v = static_cast<T>(std::stoll(s, &used));
      else {
        if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
        v = static_cast<T>(std::stoull(s, &used));
      }
      if (used != s.size()) throw std::invalid_argument("trailing text");
      return v;
    }
  } catch (const std::logic_error&) {
    throw UsageError(path + "." + key + ": cannot parse '" + raw + "'");
  }
}

std::vector<double> parse_list(const std::string& path, const std::string& raw) {
  std::vector<std::string> parts;
  boost::split(parts, raw, boost::is_any_of(", "), boost::token_compress_on);
  std::vector<double> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (p.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(p, &used));
      if (used != p.size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw UsageError(path + ": cannot parse '" + p + "'");
    }
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw UsageError("unknown section [" + section + "]");
    if (body.empty() && !body.data().empty()) throw UsageError("key '" + section + "' outside a section");
    if (section == "tolerance") continue;
    for (const auto& kv : body)
      if (!it->second.count(kv.first)) throw UsageError("unknown key " + section + "." + kv.first);
  }
  const auto exp = tree.get_child_optional("experiment");
  if (!exp || !exp->get_child_optional("tag")) throw UsageError("experiment.tag is required");
  const std::string tag = get<std::string>(*exp, "experiment", "tag");
  if (std::find(experiment_tags().begin(), experiment_tags().end(), tag) == experiment_tags().end())
    throw UsageError("experiment.tag: unknown experiment '" + tag + "'");

  ExperimentConfig cfg = default_config(tag);
  cfg.seed.reset();
  if (exp->count("seed")) cfg.seed = get<std::uint64_t>(*exp, "experiment", "seed");
  if (exp->count("output_dir")) cfg.output_dir = get<std::string>(*exp, "experiment", "output_dir");
  if (exp->count("method")) cfg.method = get<std::string>(*exp, "experiment", "method");
  if (exp->count("workers")) cfg.workers = get<int>(*exp, "experiment", "workers");

  if (auto s = tree.get_child_optional("grid")) {
    if (s->count("R")) cfg.R = get<double>(*s, "grid", "R");
    if (s->count("n")) cfg.n = get<std::size_t>(*s, "grid", "n");
  }
  if (auto s = tree.get_child_optional("time")) {
    if (s->count("T")) cfg.T = get<double>(*s, "time", "T");
    if (s->count("dt")) cfg.dt = get<double>(*s, "time", "dt");
  }
  if (auto s = tree.get_child_optional("observation"))
    if (s->count("R_obs")) cfg.R_obs = get<double>(*s, "observation", "R_obs");
  if (auto s = tree.get_child_optional("data")) {
    if (s->count("family")) cfg.data.tag = get<std::string>(*s, "data", "family");
    if (s->count("amplitude")) cfg.data.amplitude = get<double>(*s, "data", "amplitude");
    if (s->count("centre")) cfg.data.centre = get<double>(*s, "data", "centre");
    if (s->count("width")) cfg.data.width = get<double>(*s, "data", "width");
    if (s->count("q_scale")) cfg.data.q_scale = get<double>(*s, "data", "q_scale");
    if (s->count("count")) cfg.data.count = get<std::size_t>(*s, "data", "count");
  }
  if (auto s = tree.get_child_optional("sweep"))
    if (s->count("values")) cfg.sweep = parse_list("sweep.values", s->get<std::string>("values"));
  if (auto s = tree.get_child_optional("picard"))
    if (s->count("substeps")) cfg.substeps = get<std::size_t>(*s, "picard", "substeps");
  if (auto s = tree.get_child_optional("tolerance")) {
    for (const auto& kv : *s) {
      if (!cfg.tolerance.count(kv.first))
        throw UsageError("unknown key tolerance." + kv.first + " for experiment '" + tag + "'");
      cfg.tolerance[kv.first] = get<double>(*s, "tolerance", kv.first);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open config '" + path + "'");
  return parse_config(f);
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> v;
  const auto& tags = experiment_tags();
  if (std::find(tags.begin(), tags.end(), cfg.experiment) == tags.end()) {
    v.push_back("experiment.tag: unknown experiment '" + cfg.experiment + "'");
    return v;
  }
  if (!(cfg.R > 0.0)) v.push_back("grid.R: must be positive");
  if (cfg.n < 5) v.push_back("grid.n: at least 5 nodes");
  const std::size_t n_odd = cfg.n % 2 == 1 ? cfg.n : cfg.n + 1;
  const double dr = cfg.R / static_cast<double>(std::max<std::size_t>(n_odd, 2) - 1);
  // For history experiments dt is the sampling step: Picard runs substeps
  // leapfrog steps per sample, shot trajectories pick their own leapfrog step.
  const std::string& tag = cfg.experiment;
  const bool sampled = tag == "lipschitz" || tag == "adot_l1";
  const double step = tag == "contraction" ? cfg.dt / static_cast<double>(std::max<std::size_t>(cfg.substeps, 1)) : cfg.dt;
  if (!sampled && step > dr * (1.0 + 1e-12))
    v.push_back("time.dt: CFL violated (leapfrog step " + std::to_string(step) + " > dr = " + std::to_string(dr) + ")");
  if (!(cfg.T > 0.0)) v.push_back("time.T: must be positive");
  if (!(cfg.R_obs > 0.0)) v.push_back("observation.R_obs: must be positive");
  if (cfg.sweep.empty()) v.push_back("sweep.values: empty sweep");
  if (cfg.workers < 1) v.push_back("experiment.workers: at least 1");
  if (cfg.substeps < 1) v.push_back("picard.substeps: at least 1");
  if (cfg.method != "shoot" && cfg.method != "picard" && cfg.method != "both")
    v.push_back("experiment.method: one of shoot, picard, both");
  const std::set<std::string> families = {"bump", "random_bumps", "resonance_weight", "phi5", "gaussian", "soliton"};
  if (!families.count(cfg.data.tag)) v.push_back("data.family: unknown family '" + cfg.data.tag + "'");
  if (!(cfg.data.width > 0.0)) v.push_back("data.width: must be positive");
  if (cfg.data.tag == "random_bumps" && cfg.data.count == 0) v.push_back("data.count: empty family");
  const bool randomized = cfg.data.tag == "random_bumps" || cfg.experiment == "contraction" ||
                          cfg.experiment == "lipschitz" || cfg.experiment == "strichartz_free" ||
                          cfg.experiment == "strichartz_perturbed";
  if (randomized && !cfg.seed) v.push_back("experiment.seed: mandatory for randomized families");

  // Causality: the observed ball must not see the boundary at R.
  double horizon = cfg.T;
  const std::string& e = cfg.experiment;
  if ((e == "secular" || e == "pairing_identity") && !cfg.sweep.empty()) horizon = *std::max_element(cfg.sweep.begin(), cfg.sweep.end());
  const bool transport = e == "strichartz_free" || e == "strichartz_perturbed" || e == "secular" ||
                         e == "pairing_identity";
  if (transport && cfg.R < cfg.R_obs + horizon)
    v.push_back("grid.R: causality violated (R = " + std::to_string(cfg.R) + " < R_obs + T = " +
                std::to_string(cfg.R_obs + horizon) + ")");
  if ((e == "contraction" || e == "lipschitz" || e == "adot_l1" || e == "weighted_growth" ||
       e == "h_scaling" || e == "codim1") &&
      cfg.R < cfg.R_obs)
    v.push_back("observation.R_obs: exceeds grid.R");

  // Modulation window: perturbation sizes must keep a(t) inside (1/2, 3/2).
  if (e == "h_scaling" || e == "contraction" || e == "adot_l1" || e == "weighted_growth" || e == "lipschitz") {
    for (double x : cfg.sweep)
      if (!(x > 0.0) || x > 0.05) v.push_back("sweep.values: " + std::to_string(x) + " outside (0, 0.05]");
  }
  if (e == "spectrum") {
    for (double a : cfg.sweep)
      if (!(a > 0.0)) v.push_back("sweep.values: scale " + std::to_string(a) + " must be positive");
  }
  return v;
}

}  // namespace solmanifold

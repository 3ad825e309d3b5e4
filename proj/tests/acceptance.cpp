// Acceptance run: every criterion with its tolerances pinned here, one
// PASS/FAIL line per criterion. Reports land in acceptance_out/<tag>/.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "solmanifold/experiments.hpp"

using namespace solmanifold;

namespace {

struct Pinned {
  std::string tag;
  std::map<std::string, double> tolerance;
};

struct Criterion {
  int id;
  std::string title;
  std::vector<Pinned> runs;
};

const double kKatoConstant = 0.128278;  // (4 pi / 3)^{1/3} / (4 pi), rounded up in the 6th digit

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {1, "soliton identities",
       {{"stationarity",
         {{"residual_ratio_min", 3.6}, {"residual_ratio_max", 4.4}, {"drift_ratio_min", 3.0},
          {"pairing_rel_error", 1e-4}}}}},
      {2, "spectrum",
       {{"spectrum",
         {{"residual", 1e-6}, {"negative_count", 1.0}, {"k_R_doubling", 1e-8}, {"overlap_finest", 1e-4},
          {"overlap_ratio_max", 1.0}, {"consistency_ratio_min", 3.5}, {"scaling_law", 1e-4}}}}},
      {3, "energy conservation",
       {{"energy_conservation", {{"relative_drift", 1e-4}, {"drift_ratio_min", 3.5}, {"drift_ratio_max", 4.5}}}}},
      {4, "free reverse Strichartz",
       {{"strichartz_free",
         {{"family_variation", 2.0}, {"resolution_variation", 2.0}, {"l1_kato_ratio", kKatoConstant}}}}},
      {5, "secular decomposition",
       {{"secular", {{"remainder_variation", 1.5}, {"growth_exponent_error", 0.15}}}}},
      {6, "pairing identity", {{"pairing_identity", {{"phi5_scaled_error", 0.01}, {"gaussian_rel_error", 0.01}}}}},
      {7, "manifold quadratic law", {{"h_scaling", {{"slope_error", 0.1}, {"fixed_point_gap", 1e-3}}}}},
      {8, "codimension one", {{"codim1", {{"rate_rel_error", 0.02}, {"exit_sign_product", -1.0}}}}},
      {9, "contraction", {{"contraction", {{"ratio_smallest_eps", 1.0}, {"ratio_monotone", 1.0}}}}},
      {10, "on-manifold stability",
       {{"adot_l1", {{"adot_constant_variation", 1.5}, {"norm_constant_variation", 1.5}}},
        {"lipschitz", {{"lipschitz_variation", 1.5}}}}},
      {11, "weighted growth", {{"weighted_growth", {{"growth_exponent_max", 1.1}}}}},
  };
  return c;
}

// Runs one pinned experiment; false when any check fails, a declared check is
// missing from the report, or the run errored.
bool run_pinned(const Pinned& p, std::string& detail) {
  ExperimentConfig cfg = default_config(p.tag);
  cfg.tolerance = p.tolerance;
  cfg.output_dir = "acceptance_out/" + p.tag;
  const ExperimentReport rep = run(cfg);
  write_report(rep, cfg.output_dir);
  bool ok = rep.passed();
  char buf[160];
  for (const auto& [name, thr] : p.tolerance) {
    const Check* found = nullptr;
    for (const auto& c : rep.checks)
      if (c.name == name) found = &c;
    if (!found) {
      ok = false;
      detail += " " + name + "=missing";
      continue;
    }
    std::snprintf(buf, sizeof buf, " %s=%.6g%s%.6g", name.c_str(), found->value, found->relation.c_str(), thr);
    detail += buf;
    if (!found->pass) detail += "(!)";
  }
  for (const auto& e : rep.errors) detail += " error: " + e;
  return ok;
}

}  // namespace

int main() {
  int failed = 0;
  for (const auto& c : criteria()) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (const auto& p : c.runs) {
      detail += " [" + p.tag + "]";
      try {
        ok = run_pinned(p, detail) && ok;
      } catch (const std::exception& e) {
        ok = false;
        detail += std::string(" exception: ") + e.what();
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %2d %-26s (%.1f s)%s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria().size()) - failed, criteria().size());
  return failed == 0 ? 0 : 1;
}

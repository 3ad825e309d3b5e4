#pragma once

#include <limits>
#include <string>
#include <vector>

#include "solmanifold/kernels.hpp"
#include "solmanifold/propagators.hpp"
#include "solmanifold/radial_grid.hpp"

namespace solmanifold {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class TimeNorm { sup, l2, l1 };

struct NormReport {
  std::string kind;
  double value = 0.0;
  double R = 0.0;
  double R_obs = 0.0;
  std::size_t n = 0;
  double dt = 0.0;
  double T = 0.0;
};

/// Lorentz L^{p,q} norm of f restricted to B_{R_obs} (R_obs = inf: whole grid),
/// with the decreasing rearrangement taken against exact shell volumes.
double lorentz_norm(const RadialField& f, double p, double q, double R_obs = kInf);

/// L^p norm with the same cell measure as lorentz_norm.
double lp_norm(const RadialField& f, double p, double R_obs = kInf);

/// Inner time norm per node, then outer Lorentz (p, q) in x; p = inf gives the
/// max over nodes of B_{R_obs}.
double mixed_norm(const SpaceTimeField& u, double p, double q, TimeNorm inner, double R_obs = kInf);

/// Per-node inner time norm as a radial profile (zero past the stored ball).
RadialField time_profile(const SpaceTimeField& u, TimeNorm inner);

/// Streaming per-node sup / L^1_t / L^2_t with trapezoid weights, for
/// trajectories too long to store.
class TimeNormAccumulator {
 public:
  TimeNormAccumulator(GridPtr grid, std::size_t nodes, double dt, Exec exec = Exec::parallel);
  void add(const double* row);
  RadialField profile(TimeNorm inner) const;
  double mixed(double p, double q, TimeNorm inner, double R_obs = kInf) const;
  std::size_t levels() const { return levels_; }

 private:
  GridPtr grid_;
  std::size_t nodes_;
  double dt_;
  Exec exec_;
  std::size_t levels_ = 0;
  std::vector<double> sup_, l1_, l2_, first_, last_;
};

/// (sum_t sum_x |u|^8 dx dt)^{1/8} over B_{R_obs} with trapezoid weights in t.
double spacetime_l8(const SpaceTimeField& u, double R_obs = kInf);

/// sup_y int |f(x)| / |x - y| dx for radial f (Newton's theorem).
double kato_norm(const RadialField& f);

/// 1/2 int |grad psi|^2 + psi_t^2 - 1/6 int psi^6, with the harmonic far field
/// closure psi = w(R)/r beyond R.
double energy(const RadialField& psi, const RadialField& psi_t);

}  // namespace solmanifold

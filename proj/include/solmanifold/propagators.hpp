#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "solmanifold/kernels.hpp"
#include "solmanifold/radial_grid.hpp"
#include "solmanifold/spectral.hpp"

namespace solmanifold {

/// Radial field on a uniform time grid t_m = m dt. Only the first `nodes`
/// grid points (an observation ball) are stored.
struct SpaceTimeField {
  GridPtr grid;
  double dt = 0.0;
  std::size_t nodes = 0;
  std::vector<double> data;  // time-major: data[m * nodes + j]

  SpaceTimeField() = default;
  SpaceTimeField(GridPtr g, double dt_, std::size_t nodes_, std::size_t levels);

  std::size_t levels() const { return nodes == 0 ? 0 : data.size() / nodes; }
  double t(std::size_t m) const { return static_cast<double>(m) * dt; }
  double& at(std::size_t m, std::size_t j) { return data[m * nodes + j]; }
  double at(std::size_t m, std::size_t j) const { return data[m * nodes + j]; }
  const double* row(std::size_t m) const { return data.data() + m * nodes; }
  double* row(std::size_t m) { return data.data() + m * nodes; }
  /// Level m as a full-grid field (zero past the stored nodes).
  RadialField slice(std::size_t m) const;
  void set_slice(std::size_t m, const RadialField& f);
};

/// Precomputed reduced data of f for repeated free evolutions.
class FreeTransport {
 public:
  explicit FreeTransport(const RadialField& f);
  /// sin(t sqrt(-Delta))/sqrt(-Delta) f on the first n_out nodes.
  void sine(double t, double* out, std::size_t n_out, Exec exec = Exec::parallel) const;
  /// cos(t sqrt(-Delta)) f on the first n_out nodes.
  void cosine(double t, double* out, std::size_t n_out, Exec exec = Exec::parallel) const;
  const GridPtr& grid() const { return grid_; }

 private:
  GridPtr grid_;
  std::vector<double> w_;
  std::vector<double> W_;
};

RadialField free_sine(const RadialField& f, double t, Exec exec = Exec::parallel);
RadialField free_cosine(const RadialField& g0, double t, Exec exec = Exec::parallel);

/// Same, rejecting R_obs + t > R (the truncation at R would become visible).
RadialField free_sine(const RadialField& f, double t, double R_obs);
RadialField free_cosine(const RadialField& g0, double t, double R_obs);

/// Trajectory t -> free_sine(f, t) on [0, T], levels spaced by dt.
SpaceTimeField free_sine_trajectory(const RadialField& f, double T, double dt, double R_obs);
SpaceTimeField free_cosine_trajectory(const RadialField& f, double T, double dt, double R_obs);

/// int_0^t sin((t-s) sqrt(-Delta))/sqrt(-Delta) F(s) ds by the trapezoid rule in s.
SpaceTimeField free_duhamel(const SpaceTimeField& F, Exec exec = Exec::parallel);

/// Source callback: writes F(t) (field values, not reduced) on all nodes.
using SourceFn = std::function<void(double t, std::vector<double>& F)>;

struct LinearOptions {
  double T = 10.0;
  double dt = 0.0;                  ///< 0 selects dr/2
  double R_obs = 0.0;               ///< stored ball radius; 0 selects R/2
  std::size_t stride = 1;           ///< store every stride-th level
  bool with_potential = true;       ///< false gives the free equation
  const SpectralData* project = nullptr;  ///< remove the g-mode every step
  bool record_velocity = false;
  bool record_energy = false;
  bool check_budget = true;         ///< reject R_obs + T > R
  Exec exec = Exec::parallel;
};

struct LinearRun {
  SpaceTimeField u;
  SpaceTimeField ut;            ///< centred differences, when requested
  std::vector<double> energy;   ///< discrete energy per stored level
};

/// Leapfrog for w_tt = w_rr - V w + r F on w = r u with Dirichlet ends.
LinearRun evolve_linear_perturbed(const RadialField& u0, const RadialField& u1,
                                  const SourceFn& source, const LinearOptions& opt);

/// Source from a stored trajectory, linear in time between its levels.
SourceFn source_from(const SpaceTimeField& F);

/// Sign sigma such that (g, sigma k g) grows under u_tt + H u = 0.
int measure_orientation(const SpectralData& S);

struct SecularSplit {
  SpaceTimeField full;       ///< perturbed evolution of P_c data
  SpaceTimeField secular;    ///< Q applied to the time-integrated free evolution
  SpaceTimeField remainder;  ///< full - secular
};

/// sin(t sqrt H) P_c / sqrt H f split into Q int_0^t free_sine(f) and S(t) f.
SecularSplit secular_decomposition_S(const RadialField& f, const SpectralData& S, double T,
                                     double dt, double R_obs);

/// cos(t sqrt H) P_c g0 split into Q int_0^t free_cosine(g0) and C(t) g0.
SecularSplit secular_decomposition_C(const RadialField& g0, const SpectralData& S, double T,
                                     double dt, double R_obs);

}  // namespace solmanifold

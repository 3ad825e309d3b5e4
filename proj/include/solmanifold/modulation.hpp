#pragma once

#include <string>
#include <vector>

#include "solmanifold/kernels.hpp"
#include "solmanifold/mixed_norms.hpp"
#include "solmanifold/propagators.hpp"
#include "solmanifold/radial_grid.hpp"
#include "solmanifold/spectral.hpp"

namespace solmanifold {

/// N(u, phi) = 10 phi^3 u^2 + 10 phi^2 u^3 + 5 phi u^4 + u^5.
RadialField nonlinearity(const RadialField& u, const RadialField& phi_a);

/// balanced: the O(dr^2) discrete residual of phi is dropped, so the sampled
/// soliton is an exact equilibrium and the linearisation is the discrete H of
/// ground_state. raw: the full equation on the grid.
enum class Scheme { balanced, raw };

enum class Outcome { completed, departed, blowup };

struct NonlinearOptions {
  double T = 20.0;
  double dt = 0.0;                 ///< 0 selects dr/2
  double R_obs = 0.0;              ///< 0 selects R/2
  double store_radius = 0.0;       ///< snapshot radius; 0 selects R_obs
  std::size_t stride = 0;          ///< snapshot every stride steps; 0 disables
  Scheme scheme = Scheme::raw;
  double blowup_ceiling = 0.0;     ///< 0 selects 10 phi(0, 1)
  const SpectralData* spectral = nullptr;  ///< enables the g-overlap record
  double departure_threshold = 0.0;        ///< |<psi - phi, g>| exit level; 0 disables
  bool record_energy = false;      ///< energy at snapshot levels (or every step if stride = 0)
  Exec exec = Exec::parallel;
};

struct NonlinearRun {
  Outcome outcome = Outcome::completed;
  double end_time = 0.0;
  int exit_sign = 0;
  std::vector<double> overlap_t, overlap;  ///< <psi - phi, g> per step
  SpaceTimeField psi, psi_t;               ///< snapshots on the store ball
  std::vector<double> energy_t, energy;
};

/// Leapfrog for psi_tt = Delta psi + psi^5 in w = r psi, evolving the
/// perturbation w - r phi(., 1) with Dirichlet ends.
NonlinearRun evolve_nonlinear(const RadialField& psi0, const RadialField& psi1,
                              const NonlinearOptions& opt);

/// Root a in (1/2, 3/2) of <psi - phi(a), V(a) dphi_da(a)> = 0, by Newton from
/// a_start with a bracketing fallback.
double extract_modulation(const RadialField& psi, double a_start = 1.0);

/// Samples (u, a, adot) on a uniform time grid; u lives on the full grid.
struct ModulationHistory {
  double dt = 0.0;
  std::vector<double> a, adot;
  std::vector<RadialField> u;
  std::size_t levels() const { return a.size(); }
  double horizon() const { return dt * static_cast<double>(levels() - 1); }
};

/// (u, a, adot) = (0, 1, 0) on levels 0..M-1.
ModulationHistory zero_history(GridPtr grid, double dt, std::size_t levels);

/// F0 = (V - V(a0)) u0 + N(u0, phi(a0)) plus the O(dr^2 |a0 - 1|) difference of
/// the discrete soliton residuals at a0 and 1.
RadialField modulation_source(const RadialField& u0, double a0, const SpectralData& S);

/// Right-hand side of the scale condition along a history:
/// adot(t) = -a0^{5/4} (4 pi / <V, dphi_da>^2) <Y(t), V dphi_da> with
/// Y = cos(p) + sin(q) + int sin F0 - int cos(adot0 D(a0)) (free propagators).
class AdotCondition {
 public:
  AdotCondition(const SpectralData& S, const RadialField& p, const RadialField& q, double dt,
                std::size_t levels);
  double evaluate(std::size_t m, const ModulationHistory& hist) const;
  std::vector<double> evaluate_all(const ModulationHistory& hist) const;
  /// <Y(t_m), V dphi_da> split into data, Duhamel and defect parts.
  double data_pairing(std::size_t m) const { return data_[m]; }

 private:
  const SpectralData& S_;
  double dt_;
  std::size_t levels_;
  std::vector<RadialField> Ks_, Kc_;
  std::vector<double> data_;
};

struct XpmResult {
  std::vector<double> x_plus, x_minus, beta;  ///< beta = <u, g> / <g, g>
  double tail_bound = 0.0;
};

/// Unstable/stable coordinates along a history: the decaying one forward from
/// t = 0, the growing one backward from the horizon.
XpmResult xpm_evolution(const ModulationHistory& hist, const SpectralData& S, const RadialField& p,
                        const RadialField& q);

struct HResult {
  double h = 0.0;
  double integral = 0.0;
  double tail_bound = 0.0;
};

/// 2 k h <g, g> = -<k p + q, g> - int_0^T e^{-ks} <F0(s) - k adot0(s) dphi_da(a0(s)), g> ds.
/// Throws UsageError when the horizon tail exceeds 1e-3 of the integral.
HResult h_fixed_point(const ModulationHistory& hist, const SpectralData& S, const RadialField& p,
                      const RadialField& q);

/// Base data (psi0 - phi, psi1) with zero growing coordinate <k p + q, g> = 0.
struct ManifoldQuery {
  RadialField p, q;
  double epsilon = 0.0;
  bool constraint_ok = false;
  double constraint_residual = 0.0;
};

/// Enforces the constraint by moving p along g.
ManifoldQuery make_query(RadialField p, RadialField q, const SpectralData& S, double epsilon);

/// Corrected initial data phi + p + h g, q + h k g.
std::pair<RadialField, RadialField> manifold_data(const ManifoldQuery& query, const SpectralData& S,
                                                  double h);

struct ShootOptions {
  double T = 40.0;
  double dt = 0.0;
  double h_max = 0.0;            ///< 0 selects max(10 eps, 1e-8)
  double tolerance = 0.0;        ///< 0 selects 1e-12 max(eps, 1e-6)
  double departure_threshold = 0.05;
  int max_iterations = 200;
  Exec exec = Exec::parallel;
};

struct ShootResult {
  bool ok = false;
  double h = 0.0;
  double bracket_width = 0.0;
  int iterations = 0;
  std::string message;
};

/// Exit sign (+1 up, -1 down, 0 stayed) of the balanced nonlinear run from
/// manifold_data(query, S, h).
int exit_sign(const ManifoldQuery& query, const SpectralData& S, double h, const ShootOptions& opt,
              NonlinearRun* run = nullptr);

/// Bisection on h using the exit sign.
ShootResult shoot_h(const ManifoldQuery& query, const SpectralData& S, const ShootOptions& opt);

struct PicardOptions {
  std::size_t substeps = 2;  ///< leapfrog steps per history step
  double R_obs = 10.0;       ///< ball for the X-norm
};

struct PicardResult {
  ModulationHistory out;
  double h = 0.0;
  double h_tail = 0.0;
  double xpm_tail = 0.0;
};

/// One application of the linearised map (u0, a0) -> (u, a).
PicardResult picard_map(const ModulationHistory& in, const ManifoldQuery& query,
                        const SpectralData& S, const PicardOptions& opt);

/// ||u1 - u2|| in L^{6,2}_x L^inf_t + L^inf_x L^2_t + L^inf_x L^1_t on B_{R_obs}
/// plus ||adot1 - adot2|| in L^1 + L^inf.
double x_distance(const ModulationHistory& h1, const ModulationHistory& h2, double R_obs);

/// Same norm of a single history measured from (0, 1, 0).
double x_norm(const ModulationHistory& h, double R_obs);

/// History of a nonlinear run: a(t) by extract_modulation, adot by centred
/// differences, u = psi - phi(a(t)) on the full grid. Requires full-grid snapshots.
ModulationHistory history_from_run(const NonlinearRun& run, const SpectralData& S);

/// Trajectory record emitted by the manifold experiment.
struct ModulationTrajectory {
  std::vector<double> t, a, adot, x_plus, x_minus, g_overlap;
  bool left_window = false;
  double adot_l1 = 0.0;
};

}  // namespace solmanifold

#pragma once

#include <utility>
#include <vector>

#include "solmanifold/radial_grid.hpp"

namespace solmanifold {

/// Ground state (-k^2, g) of H = -Delta + V(., a) on radial fields plus the
/// resonance data that enter the modulation equations.
struct SpectralData {
  GridPtr grid;
  double a = 1.0;
  double k = 0.0;
  RadialField g;          ///< Simpson-normalised, g(0) > 0
  RadialField resonance;  ///< dphi_da(., a)
  RadialField potential;  ///< V(., a)
  /// <V, dphi_da>, R-extrapolated from [0, R] and [0, 2R] at fixed dr.
  double pairing_VdaPhi = 0.0;
  double pairing_VdaPhi_grid = 0.0;  ///< same pairing truncated at R
  double gg = 1.0;
  double residual = 0.0;         ///< ||H g + k^2 g||_2 with the discrete H
  double overlap_g_daPhi = 0.0;  ///< <g, dphi_da>
  int negative_count = 0;        ///< Sturm count of negative eigenvalues
  /// Interior reduced eigenvector, unit in the Euclidean norm. It is the exact
  /// spectral projector of the discrete H and is used inside time loops.
  std::vector<double> w_unit;
  /// +1 when (g, +k g) is the growing mode of u_tt + H u = 0.
  int orientation = 1;
};

/// Number of eigenvalues of the discrete reduced operator below lambda.
int sturm_count(const RadialGrid& grid, double a, double lambda);

/// Minimal eigenvalue by Sturm bisection, eigenvector by inverse iteration.
/// Throws DiscretizationError when no negative eigenvalue exists and
/// DiscretizationError when more than one is found.
SpectralData ground_state(GridPtr grid, double a = 1.0);

/// k from grids (R, n) and (R, 2n-1) combined as (4 k_fine - k_coarse)/3.
double extrapolated_rate(double R, std::size_t n, double a = 1.0);

/// <V(., a), dphi_da(., a)> on [0, R] and the R-Richardson value.
std::pair<double, double> resonance_pairing(double R, std::size_t n, double a = 1.0);

/// ||H4 g + k^2 g||_2 where H4 uses a fourth-order five-point stencil; measures
/// the O(dr^2) discretisation error of g.
double consistency_residual(const SpectralData& S);

RadialField project_continuous(const RadialField& f, const SpectralData& S);

struct Coordinates {
  double plus = 0.0;
  double minus = 0.0;
};

/// x_+- = (2k)^{-1/2} (k <u0, g> +- sigma <u1, g>), sigma = S.orientation.
Coordinates x_pm(const RadialField& u0, const RadialField& u1, const SpectralData& S);

/// Q f = -(4 pi / <V, dphi_da>^2) <f, V dphi_da> dphi_da.
RadialField secular_projector(const RadialField& f, const SpectralData& S);

/// 4 pi / <V, dphi_da>^2.
double secular_constant(const SpectralData& S);

/// V dphi_da on the grid.
RadialField resonance_weight(const SpectralData& S);

}  // namespace solmanifold

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace solmanifold {

/// Uniform mesh r_j = j dr on [0, R]. The node count is rounded up to an odd
/// number so composite Simpson weights apply.
class RadialGrid {
 public:
  RadialGrid(double R, std::size_t n);

  double R() const { return R_; }
  std::size_t n() const { return n_; }
  double dr() const { return dr_; }
  double r(std::size_t j) const { return r_[j]; }
  const std::vector<double>& nodes() const { return r_; }

  /// 4 pi s_j r_j^2 with Simpson weights s_j (dr included).
  const std::vector<double>& measure() const { return measure_; }

  /// Exact volume of the shell [r_j - dr/2, r_j + dr/2] clipped to [0, R].
  const std::vector<double>& cell_volume() const { return cell_volume_; }

  /// Number of nodes with r_j <= rho (at least 1).
  std::size_t count_within(double rho) const;

  bool same_as(const RadialGrid& other) const { return n_ == other.n_ && R_ == other.R_; }

 private:
  double R_;
  std::size_t n_;
  double dr_;
  std::vector<double> r_;
  std::vector<double> measure_;
  std::vector<double> cell_volume_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(double R, std::size_t n);

/// Samples of a spherically symmetric function at the grid nodes.
struct RadialField {
  GridPtr grid;
  std::vector<double> f;

  RadialField() = default;
  explicit RadialField(GridPtr g) : grid(std::move(g)), f(grid->n(), 0.0) {}
  RadialField(GridPtr g, std::vector<double> values);

  std::size_t size() const { return f.size(); }
  double operator[](std::size_t j) const { return f[j]; }
  double& operator[](std::size_t j) { return f[j]; }

  /// Reduced variable w_j = r_j f_j.
  std::vector<double> to_w() const;

  RadialField& operator+=(const RadialField& o);
  RadialField& operator-=(const RadialField& o);
  RadialField& operator*=(double s);
};

RadialField operator+(RadialField a, const RadialField& b);
RadialField operator-(RadialField a, const RadialField& b);
RadialField operator*(double s, RadialField a);

/// Field from reduced samples w; the value at r = 0 is (4 f_1 - f_2)/3.
RadialField from_w(GridPtr grid, const std::vector<double>& w);

RadialField sample(GridPtr grid, const std::function<double(double)>& fn);

/// Pointwise product.
RadialField multiply(const RadialField& a, const RadialField& b);

/// 4 pi sum s_j f_j g_j r_j^2 (Simpson).
double inner_product(const RadialField& f, const RadialField& g);

/// (1/r) d^2_r (r f) by centred differences on w; 6 (f_1 - f_0)/dr^2 at r = 0
/// and a one-sided second-order closure at r = R.
RadialField laplacian(const RadialField& f);

/// ||grad f||_2 from first differences of w. Equals the Hdot^1(R^3) norm of f
/// continued by its harmonic tail w(R)/r beyond R.
double h1_seminorm(const RadialField& f);

double l2_norm(const RadialField& f);

enum class WeightedKind { bracket_h1, bracket_l2 };

/// ||<x> f|| in Hdot^1 or L^2 with <x> = (1 + r^2)^{1/2}.
double weighted_norm(const RadialField& f, WeightedKind kind);

/// ||grad f||_{L^2(B_rho)} (midpoint rule on w_r - w/r).
double h1_ball(const RadialField& f, double rho);

/// ||f||_{L^2(B_rho)} (trapezoid rule on w^2).
double l2_ball(const RadialField& f, double rho);

void write_csv(std::ostream& os, const RadialField& f);

void require_same_grid(const RadialField& a, const RadialField& b);

}  // namespace solmanifold

#include "solmanifold/radial_grid.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "solmanifold/errors.hpp"

namespace solmanifold {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
}

RadialGrid::RadialGrid(double R, std::size_t n) : R_(R), n_(n % 2 == 0 ? n + 1 : n) {
  if (!(R > 0.0)) throw UsageError("grid radius must be positive");
  if (n < 16) throw UsageError("grid needs at least 16 nodes");
  dr_ = R_ / static_cast<double>(n_ - 1);
  r_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) r_[j] = static_cast<double>(j) * dr_;
  r_[n_ - 1] = R_;

  measure_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    double s = (j == 0 || j == n_ - 1) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    measure_[j] = kFourPi * s * dr_ / 3.0 * r_[j] * r_[j];
  }

  cell_volume_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    const double lo = std::max(0.0, r_[j] - 0.5 * dr_);
    const double hi = std::min(R_, r_[j] + 0.5 * dr_);
    cell_volume_[j] = kFourPi / 3.0 * (hi * hi * hi - lo * lo * lo);
  }
}

std::size_t RadialGrid::count_within(double rho) const {
  if (rho >= R_) return n_;
  const auto m = static_cast<std::size_t>(std::floor(rho / dr_ + 1e-9)) + 1;
  return std::min(std::max<std::size_t>(m, 1), n_);
}

GridPtr make_grid(double R, std::size_t n) { return std::make_shared<const RadialGrid>(R, n); }

RadialField::RadialField(GridPtr g, std::vector<double> values) : grid(std::move(g)), f(std::move(values)) {
  if (f.size() != grid->n()) throw UsageError("field length does not match grid");
}

std::vector<double> RadialField::to_w() const {
  std::vector<double> w(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) w[j] = grid->r(j) * f[j];
  return w;
}

void require_same_grid(const RadialField& a, const RadialField& b) {
  if (!a.grid || !b.grid || !(a.grid == b.grid || a.grid->same_as(*b.grid)))
    throw UsageError("fields live on different grids");
}

RadialField& RadialField::operator+=(const RadialField& o) {
  require_same_grid(*this, o);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] += o.f[j];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& o) {
  require_same_grid(*this, o);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] -= o.f[j];
  return *this;
}

RadialField& RadialField::operator*=(double s) {
  for (double& v : f) v *= s;
  return *this;
}

RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
RadialField operator*(double s, RadialField a) { return a *= s; }

RadialField from_w(GridPtr grid, const std::vector<double>& w) {
  RadialField out(grid);
  const std::size_t n = grid->n();
  for (std::size_t j = 1; j < n; ++j) out.f[j] = w[j] / grid->r(j);
  out.f[0] = (4.0 * out.f[1] - out.f[2]) / 3.0;
  return out;
}

RadialField sample(GridPtr grid, const std::function<double(double)>& fn) {
  RadialField out(grid);
  for (std::size_t j = 0; j < grid->n(); ++j) out.f[j] = fn(grid->r(j));
  return out;
}

RadialField multiply(const RadialField& a, const RadialField& b) {
  require_same_grid(a, b);
  RadialField out(a.grid);
  for (std::size_t j = 0; j < a.size(); ++j) out.f[j] = a.f[j] * b.f[j];
  return out;
}

double inner_product(const RadialField& f, const RadialField& g) {
  require_same_grid(f, g);
  const auto& m = f.grid->measure();
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += m[j] * f.f[j] * g.f[j];
  return s;
}

RadialField laplacian(const RadialField& f) {
  const auto& grid = *f.grid;
  const std::size_t n = grid.n();
  const double dr = grid.dr();
  const double inv = 1.0 / (dr * dr);
  const auto w = f.to_w();
  RadialField out(f.grid);
  out.f[0] = 6.0 * (f.f[1] - f.f[0]) * inv;
  for (std::size_t j = 1; j + 1 < n; ++j) out.f[j] = (w[j + 1] - 2.0 * w[j] + w[j - 1]) * inv / grid.r(j);
  out.f[n - 1] =
      (2.0 * w[n - 1] - 5.0 * w[n - 2] + 4.0 * w[n - 3] - w[n - 4]) * inv / grid.r(n - 1);
  return out;
}

double h1_seminorm(const RadialField& f) {
  const auto w = f.to_w();
  const double dr = f.grid->dr();
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < w.size(); ++j) {
    const double d = (w[j + 1] - w[j]) / dr;
    s += d * d;
  }
  return std::sqrt(kFourPi * s * dr);
}

double l2_norm(const RadialField& f) { return std::sqrt(std::max(0.0, inner_product(f, f))); }

double weighted_norm(const RadialField& f, WeightedKind kind) {
  RadialField g = f;
  for (std::size_t j = 0; j < g.size(); ++j) g.f[j] *= std::sqrt(1.0 + f.grid->r(j) * f.grid->r(j));
  return kind == WeightedKind::bracket_h1 ? h1_seminorm(g) : l2_norm(g);
}

double h1_ball(const RadialField& f, double rho) {
  const auto& grid = *f.grid;
  const std::size_t m = grid.count_within(rho);
  const auto w = f.to_w();
  const double dr = grid.dr();
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double wr = (w[j + 1] - w[j]) / dr;
    const double w_over_r = (w[j] + w[j + 1]) / (grid.r(j) + grid.r(j + 1));
    const double d = wr - w_over_r;
    s += d * d;
  }
  return std::sqrt(kFourPi * s * dr);
}

double l2_ball(const RadialField& f, double rho) {
  const auto& grid = *f.grid;
  const std::size_t m = grid.count_within(rho);
  const double dr = grid.dr();
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double w = grid.r(j) * f.f[j];
    s += (j == 0 || j + 1 == m ? 0.5 : 1.0) * w * w;
  }
  return std::sqrt(kFourPi * s * dr);
}

void write_csv(std::ostream& os, const RadialField& f) {
  os << "r,value\n";
  char buf[64];
  for (std::size_t j = 0; j < f.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.grid->r(j), f.f[j]);
    os << buf;
  }
}

}  // namespace solmanifold

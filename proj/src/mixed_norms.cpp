#include "solmanifold/mixed_norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "solmanifold/errors.hpp"

namespace solmanifold {

namespace {

void check_exponents(double p, double q) {
  if (!(p >= 1.0) || std::isinf(p) || !(q >= 1.0)) throw DomainError("Lorentz exponents out of range");
}

double lorentz_of_values(std::vector<std::pair<double, double>> cells, double p, double q) {
  // cells: (|f|, volume); sorted decreasingly by value.
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double t_prev = 0.0, acc = 0.0;
  for (const auto& [v, vol] : cells) {
    const double t = t_prev + vol;
    if (std::isinf(q)) {
      acc = std::max(acc, v * std::pow(t, 1.0 / p));
    } else if (v > 0.0) {
      acc += std::pow(v, q) * (p / q) * (std::pow(t, q / p) - std::pow(t_prev, q / p));
    }
    t_prev = t;
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

std::size_t ball_nodes(const RadialGrid& g, std::size_t stored, double R_obs) {
  const std::size_t m = std::isinf(R_obs) ? g.n() : g.count_within(R_obs);
  return std::min(m, stored);
}

}  // namespace

double lorentz_norm(const RadialField& f, double p, double q, double R_obs) {
  check_exponents(p, q);
  const std::size_t m = ball_nodes(*f.grid, f.size(), R_obs);
  std::vector<std::pair<double, double>> cells(m);
  const auto& vol = f.grid->cell_volume();
  for (std::size_t j = 0; j < m; ++j) cells[j] = {std::abs(f.f[j]), vol[j]};
  return lorentz_of_values(std::move(cells), p, q);
}

double lp_norm(const RadialField& f, double p, double R_obs) {
  check_exponents(p, p);
  const std::size_t m = ball_nodes(*f.grid, f.size(), R_obs);
  const auto& vol = f.grid->cell_volume();
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) s += std::pow(std::abs(f.f[j]), p) * vol[j];
  return std::pow(s, 1.0 / p);
}

TimeNormAccumulator::TimeNormAccumulator(GridPtr grid, std::size_t nodes, double dt, Exec exec)
    : grid_(std::move(grid)), nodes_(nodes), dt_(dt), exec_(exec), sup_(nodes, 0.0), l1_(nodes, 0.0),
      l2_(nodes, 0.0), first_(nodes, 0.0), last_(nodes, 0.0) {}

void TimeNormAccumulator::add(const double* row) {
  kernels::accumulate_time_norms(row, nodes_, dt_, sup_.data(), l1_.data(), l2_.data(), exec_);
  if (levels_ == 0) std::copy(row, row + nodes_, first_.begin());
  std::copy(row, row + nodes_, last_.begin());
  ++levels_;
}

RadialField TimeNormAccumulator::profile(TimeNorm inner) const {
  RadialField out(grid_);
  for (std::size_t j = 0; j < nodes_; ++j) {
    if (inner == TimeNorm::sup) {
      out.f[j] = sup_[j];
      continue;
    }
    // Trapezoid: remove half of the end-point weights.
    const double a = std::abs(first_[j]), b = std::abs(last_[j]);
    if (inner == TimeNorm::l1) {
      out.f[j] = levels_ > 1 ? l1_[j] - 0.5 * dt_ * (a + b) : 0.0;
    } else {
      const double s = levels_ > 1 ? l2_[j] - 0.5 * dt_ * (a * a + b * b) : 0.0;
      out.f[j] = std::sqrt(std::max(0.0, s));
    }
  }
  return out;
}

double TimeNormAccumulator::mixed(double p, double q, TimeNorm inner, double R_obs) const {
  const RadialField prof = profile(inner);
  if (std::isinf(p)) {
    const std::size_t m = ball_nodes(*grid_, nodes_, R_obs);
    return *std::max_element(prof.f.begin(), prof.f.begin() + static_cast<long>(m));
  }
  return lorentz_norm(prof, p, q, std::min(R_obs, grid_->r(nodes_ - 1)));
}

RadialField time_profile(const SpaceTimeField& u, TimeNorm inner) {
  TimeNormAccumulator acc(u.grid, u.nodes, u.dt);
  for (std::size_t m = 0; m < u.levels(); ++m) acc.add(u.row(m));
  return acc.profile(inner);
}

double mixed_norm(const SpaceTimeField& u, double p, double q, TimeNorm inner, double R_obs) {
  TimeNormAccumulator acc(u.grid, u.nodes, u.dt);
  for (std::size_t m = 0; m < u.levels(); ++m) acc.add(u.row(m));
  return acc.mixed(p, q, inner, R_obs);
}

double spacetime_l8(const SpaceTimeField& u, double R_obs) {
  const std::size_t m = ball_nodes(*u.grid, u.nodes, R_obs);
  const auto& vol = u.grid->cell_volume();
  const std::size_t M = u.levels();
  double s = 0.0;
  for (std::size_t l = 0; l < M; ++l) {
    const double wt = (l == 0 || l + 1 == M) ? 0.5 * u.dt : u.dt;
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double a = u.at(l, j) * u.at(l, j);
      const double a4 = a * a;
      row += a4 * a4 * vol[j];
    }
    s += wt * row;
  }
  return std::pow(s, 0.125);
}

double kato_norm(const RadialField& f) {
  const auto& g = *f.grid;
  const std::size_t n = g.n();
  const double dr = g.dr();
  std::vector<double> inner(n, 0.0), outer(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const double a = std::abs(f.f[j - 1]) * g.r(j - 1) * g.r(j - 1);
    const double b = std::abs(f.f[j]) * g.r(j) * g.r(j);
    inner[j] = inner[j - 1] + 0.5 * dr * (a + b);
  }
  for (std::size_t j = n - 1; j-- > 0;) {
    const double a = std::abs(f.f[j]) * g.r(j);
    const double b = std::abs(f.f[j + 1]) * g.r(j + 1);
    outer[j] = outer[j + 1] + 0.5 * dr * (a + b);
  }
  double best = outer[0];
  for (std::size_t j = 1; j < n; ++j) best = std::max(best, inner[j] / g.r(j) + outer[j]);
  return 4.0 * std::numbers::pi * best;
}

double energy(const RadialField& psi, const RadialField& psi_t) {
  require_same_grid(psi, psi_t);
  const auto& g = *psi.grid;
  const double grad = h1_seminorm(psi);
  const double kin = inner_product(psi_t, psi_t);
  RadialField p5(psi.grid);
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double x2 = psi.f[j] * psi.f[j];
    p5.f[j] = x2 * x2 * psi.f[j];
  }
  const double wR = g.R() * psi.f.back();
  const double tail = 4.0 * std::numbers::pi * std::pow(wR, 6) / (3.0 * g.R() * g.R() * g.R());
  const double pot = inner_product(psi, p5) + tail;
  return 0.5 * (grad * grad + kin) - pot / 6.0;
}

}  // namespace solmanifold

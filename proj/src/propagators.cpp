#include "solmanifold/propagators.hpp"

#include <cmath>
#include <numbers>

#include "solmanifold/errors.hpp"
#include "solmanifold/soliton.hpp"

namespace solmanifold {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

std::size_t step_count(double T, double dt, std::size_t stride) {
  const double chunk = dt * static_cast<double>(stride);
  const auto blocks = static_cast<std::size_t>(std::ceil(T / chunk - 1e-9));
  return std::max<std::size_t>(blocks, 1) * stride;
}

void require_budget(const RadialGrid& g, double R_obs, double T) {
  if (R_obs + T > g.R() * (1.0 + 1e-12))
    throw UsageError("causality budget violated: R_obs + T exceeds R");
}

void remove_mode(std::vector<double>& w, const std::vector<double>& unit) {
  double c = 0.0;
  for (std::size_t i = 0; i < unit.size(); ++i) c += w[i + 1] * unit[i];
  for (std::size_t i = 0; i < unit.size(); ++i) w[i + 1] -= c * unit[i];
}

void store_level(const RadialGrid& grid, const std::vector<double>& w, double* out, std::size_t nodes) {
  for (std::size_t j = 1; j < nodes; ++j) out[j] = w[j] / grid.r(j);
  const double f1 = w[1] / grid.r(1);
  const double f2 = w[2] / grid.r(2);
  out[0] = (4.0 * f1 - f2) / 3.0;
}

}  // namespace

SpaceTimeField::SpaceTimeField(GridPtr g, double dt_, std::size_t nodes_, std::size_t levels)
    : grid(std::move(g)), dt(dt_), nodes(nodes_), data(nodes_ * levels, 0.0) {}

RadialField SpaceTimeField::slice(std::size_t m) const {
  RadialField out(grid);
  for (std::size_t j = 0; j < nodes; ++j) out.f[j] = at(m, j);
  return out;
}

void SpaceTimeField::set_slice(std::size_t m, const RadialField& f) {
  for (std::size_t j = 0; j < nodes; ++j) at(m, j) = f.f[j];
}

FreeTransport::FreeTransport(const RadialField& f) : grid_(f.grid), w_(f.to_w()) {
  const std::size_t n = w_.size();
  const double dr = grid_->dr();
  W_.assign(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    double cell;
    if (j + 2 < n) {
      const double wm = j == 0 ? -w_[1] : w_[j - 1];
      cell = dr / 24.0 * (-wm + 13.0 * w_[j] + 13.0 * w_[j + 1] - w_[j + 2]);
    } else {
      cell = dr / 12.0 * (-w_[j - 1] + 8.0 * w_[j] + 5.0 * w_[j + 1]);
    }
    W_[j + 1] = W_[j] + cell;
  }
}

void FreeTransport::sine(double t, double* out, std::size_t n_out, Exec exec) const {
  if (t < 0.0) throw DomainError("free evolution needs t >= 0");
  kernels::dalembert_sine(W_.data(), w_.data(), w_.size(), grid_->dr(), t, out, n_out, exec);
}

void FreeTransport::cosine(double t, double* out, std::size_t n_out, Exec exec) const {
  if (t < 0.0) throw DomainError("free evolution needs t >= 0");
  kernels::dalembert_cosine(w_.data(), w_.size(), grid_->dr(), t, out, n_out, exec);
}

RadialField free_sine(const RadialField& f, double t, Exec exec) {
  RadialField out(f.grid);
  FreeTransport(f).sine(t, out.f.data(), out.size(), exec);
  return out;
}

RadialField free_cosine(const RadialField& g0, double t, Exec exec) {
  RadialField out(g0.grid);
  FreeTransport(g0).cosine(t, out.f.data(), out.size(), exec);
  return out;
}

RadialField free_sine(const RadialField& f, double t, double R_obs) {
  require_budget(*f.grid, R_obs, t);
  return free_sine(f, t);
}

RadialField free_cosine(const RadialField& g0, double t, double R_obs) {
  require_budget(*g0.grid, R_obs, t);
  return free_cosine(g0, t);
}

namespace {

SpaceTimeField free_trajectory(const RadialField& f, double T, double dt, double R_obs, bool sine) {
  require_budget(*f.grid, R_obs, T);
  const std::size_t steps = step_count(T, dt, 1);
  const double h = T / static_cast<double>(steps);
  const std::size_t nodes = f.grid->count_within(R_obs);
  SpaceTimeField out(f.grid, h, nodes, steps + 1);
  const FreeTransport tr(f);
  for (std::size_t m = 0; m <= steps; ++m) {
    if (sine) tr.sine(out.t(m), out.row(m), nodes);
    else tr.cosine(out.t(m), out.row(m), nodes);
  }
  return out;
}

}  // namespace

SpaceTimeField free_sine_trajectory(const RadialField& f, double T, double dt, double R_obs) {
  return free_trajectory(f, T, dt, R_obs, true);
}

SpaceTimeField free_cosine_trajectory(const RadialField& f, double T, double dt, double R_obs) {
  return free_trajectory(f, T, dt, R_obs, false);
}

SpaceTimeField free_duhamel(const SpaceTimeField& F, Exec exec) {
  const std::size_t M = F.levels();
  SpaceTimeField out(F.grid, F.dt, F.nodes, M);
  std::vector<FreeTransport> slices;
  slices.reserve(M);
  for (std::size_t i = 0; i < M; ++i) slices.emplace_back(F.slice(i));
  std::vector<double> buf(F.nodes);
  for (std::size_t m = 1; m < M; ++m) {
    double* dst = out.row(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double wt = (i == 0 ? 0.5 : 1.0) * F.dt;
      slices[i].sine(static_cast<double>(m - i) * F.dt, buf.data(), F.nodes, exec);
      for (std::size_t j = 0; j < F.nodes; ++j) dst[j] += wt * buf[j];
    }
  }
  return out;
}

SourceFn source_from(const SpaceTimeField& F) {
  return [&F](double t, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t M = F.levels();
    if (M == 0) return;
    double x = t / F.dt;
    if (x <= 0.0) x = 0.0;
    auto i = static_cast<std::size_t>(x);
    if (i >= M - 1) {
      for (std::size_t j = 0; j < F.nodes; ++j) out[j] = F.at(M - 1, j);
      return;
    }
    const double th = x - static_cast<double>(i);
    for (std::size_t j = 0; j < F.nodes; ++j)
      out[j] = (1.0 - th) * F.at(i, j) + th * F.at(i + 1, j);
  };
}

LinearRun evolve_linear_perturbed(const RadialField& u0, const RadialField& u1,
                                  const SourceFn& source, const LinearOptions& opt) {
  require_same_grid(u0, u1);
  const auto& grid = *u0.grid;
  const std::size_t n = grid.n();
  const double dr = grid.dr();
  double dt = opt.dt > 0.0 ? opt.dt : 0.5 * dr;
  if (dt > dr * (1.0 + 1e-12)) throw UsageError("CFL violated: dt > dr");
  const double R_obs = opt.R_obs > 0.0 ? opt.R_obs : 0.5 * grid.R();
  if (opt.check_budget) require_budget(grid, R_obs, opt.T);
  if (opt.project && !opt.project->grid->same_as(grid)) throw UsageError("spectral data on another grid");
  const std::size_t stride = std::max<std::size_t>(opt.stride, 1);
  const std::size_t N = step_count(opt.T, dt, stride);
  dt = opt.T / static_cast<double>(N);
  const std::size_t levels = N / stride + 1;
  const std::size_t nodes = grid.count_within(R_obs);

  std::vector<double> V(n, 0.0);
  if (opt.with_potential) {
    if (opt.project) V = opt.project->potential.f;
    else for (std::size_t j = 0; j < n; ++j) V[j] = potential(grid.r(j), 1.0);
  }

  LinearRun run;
  run.u = SpaceTimeField(u0.grid, dt * static_cast<double>(stride), nodes, levels);
  if (opt.record_velocity) run.ut = SpaceTimeField(u0.grid, run.u.dt, nodes, levels);

  std::vector<double> prev = u0.to_w(), cur(n), next(n), acc(n), src(n, 0.0), wsrc(n, 0.0);
  std::vector<double> vel = u1.to_w();
  prev[0] = prev[n - 1] = 0.0;
  vel[0] = vel[n - 1] = 0.0;
  if (opt.project) {
    remove_mode(prev, opt.project->w_unit);
    remove_mode(vel, opt.project->w_unit);
  }
  const double inv_dr2 = 1.0 / (dr * dr);

  auto acceleration = [&](const std::vector<double>& v, double t) {
    const double* s = nullptr;
    if (source) {
      source(t, src);
      for (std::size_t j = 0; j < n; ++j) wsrc[j] = grid.r(j) * src[j];
      s = wsrc.data();
    }
    kernels::linear_acceleration(v.data(), V.data(), s, acc.data(), n, inv_dr2, opt.exec);
  };

  auto energy_of = [&](const std::vector<double>& w, const std::vector<double>& wt) {
    double kin = 0.0, grad = 0.0, pot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      kin += wt[j] * wt[j];
      pot += V[j] * w[j] * w[j];
      if (j + 1 < n) {
        const double d = (w[j + 1] - w[j]) / dr;
        grad += d * d;
      }
    }
    return kFourPi * 0.5 * (kin + grad + pot) * dr;
  };

  auto record = [&](std::size_t m, const std::vector<double>& w, const std::vector<double>& wt) {
    if (m % stride != 0) return;
    const std::size_t l = m / stride;
    store_level(grid, w, run.u.row(l), nodes);
    if (opt.record_velocity) store_level(grid, wt, run.ut.row(l), nodes);
    if (opt.record_energy) run.energy.push_back(energy_of(w, wt));
  };

  acceleration(prev, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) cur[j] = prev[j] + dt * vel[j] + 0.5 * dt * dt * acc[j];
  cur[0] = cur[n - 1] = 0.0;
  if (opt.project) remove_mode(cur, opt.project->w_unit);
  record(0, prev, vel);

  // The last level also takes a step so its velocity is centred too.
  for (std::size_t m = 1; m <= N; ++m) {
    acceleration(cur, static_cast<double>(m) * dt);
    kernels::leapfrog_update(prev.data(), cur.data(), acc.data(), next.data(), n, dt * dt, opt.exec);
    if (opt.project) remove_mode(next, opt.project->w_unit);
    if (!std::isfinite(next[n / 2]) || !std::isfinite(next[1]))
      throw InstabilityError("linear leapfrog produced non-finite values");
    for (std::size_t j = 0; j < n; ++j) vel[j] = (next[j] - prev[j]) / (2.0 * dt);
    record(m, cur, vel);
    prev.swap(cur);
    cur.swap(next);
  }
  return run;
}

int measure_orientation(const SpectralData& S) {
  LinearOptions opt;
  opt.T = 2.0 / S.k;
  opt.R_obs = std::min(S.grid->R() - opt.T, 4.0);
  opt.with_potential = true;
  const RadialField kg = S.k * S.g;
  const auto run = evolve_linear_perturbed(S.g, kg, nullptr, opt);
  const double end = inner_product(run.u.slice(run.u.levels() - 1), S.g);
  return std::abs(end) > 1.0 ? 1 : -1;
}

namespace {

SecularSplit split(const RadialField& f, const SpectralData& S, double T, double dt, double R_obs,
                   bool sine) {
  LinearOptions opt;
  opt.T = T;
  opt.dt = dt;
  opt.R_obs = R_obs;
  opt.project = &S;
  const RadialField pf = project_continuous(f, S);
  const RadialField zero(f.grid);
  SecularSplit out;
  out.full = sine ? evolve_linear_perturbed(zero, pf, nullptr, opt).u
                  : evolve_linear_perturbed(pf, zero, nullptr, opt).u;
  const std::size_t M = out.full.levels();
  const std::size_t nodes = out.full.nodes;
  out.secular = SpaceTimeField(f.grid, out.full.dt, nodes, M);
  out.remainder = SpaceTimeField(f.grid, out.full.dt, nodes, M);

  const RadialField Vd = resonance_weight(S);
  const FreeTransport tr(f);
  const std::size_t n = f.grid->n();
  std::vector<double> buf(n);
  const double c = secular_constant(S);
  double integral = 0.0, last = 0.0;
  const auto& meas = f.grid->measure();
  for (std::size_t m = 0; m < M; ++m) {
    const double t = out.full.t(m);
    if (sine) tr.sine(t, buf.data(), n); else tr.cosine(t, buf.data(), n);
    double p = 0.0;
    for (std::size_t j = 0; j < n; ++j) p += meas[j] * buf[j] * Vd.f[j];
    if (m > 0) integral += 0.5 * out.full.dt * (p + last);
    last = p;
    for (std::size_t j = 0; j < nodes; ++j) {
      const double s = -c * integral * S.resonance.f[j];
      out.secular.at(m, j) = s;
      out.remainder.at(m, j) = out.full.at(m, j) - s;
    }
  }
  return out;
}

}  // namespace

SecularSplit secular_decomposition_S(const RadialField& f, const SpectralData& S, double T,
                                     double dt, double R_obs) {
  return split(f, S, T, dt, R_obs, true);
}

SecularSplit secular_decomposition_C(const RadialField& g0, const SpectralData& S, double T,
                                     double dt, double R_obs) {
  return split(g0, S, T, dt, R_obs, false);
}

}  // namespace solmanifold

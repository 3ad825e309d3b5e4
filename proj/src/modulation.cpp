#include "solmanifold/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "solmanifold/errors.hpp"
#include "solmanifold/soliton.hpp"

namespace solmanifold {

RadialField nonlinearity(const RadialField& u, const RadialField& phi_a) {
  require_same_grid(u, phi_a);
  RadialField out(u.grid);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = u.f[j], p = phi_a.f[j];
    out.f[j] = x * x * (10.0 * p * p * p + x * (10.0 * p * p + x * (5.0 * p + x)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nonlinear evolution

NonlinearRun evolve_nonlinear(const RadialField& psi0, const RadialField& psi1,
                              const NonlinearOptions& opt) {
  require_same_grid(psi0, psi1);
  const GridPtr gp = psi0.grid;
  const auto& grid = *gp;
  const std::size_t n = grid.n();
  const double dr = grid.dr();
  double dt = opt.dt > 0.0 ? opt.dt : 0.5 * dr;
  if (dt > dr * (1.0 + 1e-12)) throw UsageError("CFL violated: dt > dr");
  const auto N = static_cast<std::size_t>(std::max(1.0, std::ceil(opt.T / dt - 1e-9)));
  dt = opt.T / static_cast<double>(N);
  const double R_obs = opt.R_obs > 0.0 ? opt.R_obs : 0.5 * grid.R();
  const double store = opt.store_radius > 0.0 ? opt.store_radius : R_obs;
  const std::size_t obs_nodes = grid.count_within(R_obs);
  const std::size_t store_nodes = grid.count_within(store);
  const double ceiling = opt.blowup_ceiling > 0.0 ? opt.blowup_ceiling : 10.0 * phi(0.0, 1.0);
  if (opt.spectral && !opt.spectral->grid->same_as(grid)) throw UsageError("spectral data on another grid");

  std::vector<double> W(n), inv_r4(n, 0.0), src;
  for (std::size_t j = 0; j < n; ++j) {
    W[j] = grid.r(j) * phi(grid.r(j), 1.0);
    if (j > 0) inv_r4[j] = 1.0 / std::pow(grid.r(j), 4);
  }
  const double inv_dr2 = 1.0 / (dr * dr);
  // Raw runs carry the data's own boundary value: the reference is tilted by a
  // linear function so the perturbation starts at zero on both ends.
  std::vector<double> tilt(n, 0.0);
  if (opt.scheme == Scheme::raw) {
    const double edge = grid.R() * psi0.f.back() - W[n - 1];
    for (std::size_t j = 0; j < n; ++j) {
      tilt[j] = edge * grid.r(j) / grid.R();
      W[j] += tilt[j];
    }
    src.assign(n, 0.0);
    for (std::size_t j = 1; j + 1 < n; ++j)
      src[j] = (W[j + 1] - 2.0 * W[j] + W[j - 1]) * inv_dr2 + std::pow(W[j], 5) * inv_r4[j];
  }

  std::vector<double> ow;
  if (opt.spectral) {
    ow.assign(n, 0.0);
    const auto& meas = grid.measure();
    for (std::size_t j = 1; j < n; ++j) ow[j] = meas[j] * opt.spectral->g.f[j] / grid.r(j) / opt.spectral->gg;
  }

  NonlinearRun run;
  const std::size_t stride = opt.stride;
  if (stride > 0) {
    const std::size_t levels = N / stride + 1;
    run.psi = SpaceTimeField(gp, dt * static_cast<double>(stride), store_nodes, levels);
    run.psi_t = SpaceTimeField(gp, run.psi.dt, store_nodes, levels);
  }

  std::vector<double> prev(n), cur(n), next(n), acc(n);
  std::vector<double> vel = psi1.to_w();
  {
    const auto w0 = psi0.to_w();
    for (std::size_t j = 0; j < n; ++j) prev[j] = w0[j] - W[j];
  }
  prev[0] = prev[n - 1] = 0.0;
  vel[0] = vel[n - 1] = 0.0;

  auto acceleration = [&](const std::vector<double>& v) {
    kernels::nonlinear_acceleration(v.data(), W.data(), inv_r4.data(), src.empty() ? nullptr : src.data(),
                                    acc.data(), n, inv_dr2, opt.exec);
  };

  auto to_field = [&](const std::vector<double>& v, bool add_phi, double* out, std::size_t nodes) {
    for (std::size_t j = 1; j < nodes; ++j) out[j] = (v[j] + (add_phi ? W[j] : 0.0)) / grid.r(j);
    const double f1 = (v[1] + (add_phi ? W[1] : 0.0)) / grid.r(1);
    const double f2 = (v[2] + (add_phi ? W[2] : 0.0)) / grid.r(2);
    out[0] = (4.0 * f1 - f2) / 3.0;
  };

  auto energy_of = [&](const std::vector<double>& v, const std::vector<double>& vt) {
    RadialField p(gp), pt(gp);
    to_field(v, true, p.f.data(), n);
    to_field(vt, false, pt.f.data(), n);
    return energy(p, pt);
  };

  // Returns false when the run must stop at this level.
  auto observe = [&](std::size_t m, const std::vector<double>& v, const std::vector<double>& vt) {
    const double t = static_cast<double>(m) * dt;
    if (stride > 0 && m % stride == 0) {
      const std::size_t l = m / stride;
      to_field(v, true, run.psi.row(l), store_nodes);
      to_field(vt, false, run.psi_t.row(l), store_nodes);
    }
    if (opt.record_energy && (stride == 0 || m % stride == 0)) {
      run.energy_t.push_back(t);
      run.energy.push_back(energy_of(v, vt));
    }
    run.end_time = t;
    double peak = 0.0;
    for (std::size_t j = 1; j < obs_nodes; ++j) peak = std::max(peak, std::abs(W[j] + v[j]) / grid.r(j));
    if (!std::isfinite(peak)) throw InstabilityError("nonlinear leapfrog produced non-finite values");
    if (peak > ceiling) {
      run.outcome = Outcome::blowup;
      return false;
    }
    if (opt.spectral) {
      double o = 0.0;
      for (std::size_t j = 1; j + 1 < n; ++j) o += ow[j] * (v[j] + tilt[j]);
      run.overlap_t.push_back(t);
      run.overlap.push_back(o);
      if (opt.departure_threshold > 0.0 && std::abs(o) > opt.departure_threshold) {
        run.outcome = Outcome::departed;
        run.exit_sign = o > 0.0 ? 1 : -1;
        return false;
      }
    }
    return true;
  };

  acceleration(prev);
  for (std::size_t j = 1; j + 1 < n; ++j) cur[j] = prev[j] + dt * vel[j] + 0.5 * dt * dt * acc[j];
  cur[0] = cur[n - 1] = 0.0;
  if (!observe(0, prev, vel)) return run;

  for (std::size_t m = 1; m <= N; ++m) {
    acceleration(cur);
    kernels::leapfrog_update(prev.data(), cur.data(), acc.data(), next.data(), n, dt * dt, opt.exec);
    for (std::size_t j = 0; j < n; ++j) vel[j] = (next[j] - prev[j]) / (2.0 * dt);
    if (!observe(m, cur, vel)) break;
    prev.swap(cur);
    cur.swap(next);
  }
  if (run.outcome == Outcome::completed) run.end_time = opt.T;
  return run;
}

// ---------------------------------------------------------------------------
// Modulation parameter

namespace {

struct ScaleEquation {
  const RadialField& psi;
  double value(double a) const {
    const auto& g = *psi.grid;
    const auto& meas = g.measure();
    double s = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double r = g.r(j);
      s += meas[j] * (psi.f[j] - phi(r, a)) * potential(r, a) * dphi_da(r, a);
    }
    return s;
  }
  double derivative(double a) const {
    const auto& g = *psi.grid;
    const auto& meas = g.measure();
    double s = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double r = g.r(j);
      const double p = phi(r, a), d = dphi_da(r, a), d2 = d2phi_da2(r, a);
      const double p3 = p * p * p;
      const double dVd = -20.0 * p3 * d * d - 5.0 * p3 * p * d2;
      s += meas[j] * (-d * (-5.0 * p3 * p) * d + (psi.f[j] - p) * dVd);
    }
    return s;
  }
};

}  // namespace

double extract_modulation(const RadialField& psi, double a_start) {
  const ScaleEquation eq{psi};
  double a = std::clamp(a_start, kModulationLow + 1e-6, kModulationHigh - 1e-6);
  for (int it = 0; it < 40; ++it) {
    const double G = eq.value(a);
    const double dG = eq.derivative(a);
    if (dG == 0.0 || !std::isfinite(G)) break;
    const double step = G / dG;
    a -= step;
    if (!(a > kModulationLow && a < kModulationHigh)) break;
    if (std::abs(step) < 1e-14 * a) return a;
  }
  // Fallback: scan for a sign change, closest to the starting point first.
  const int samples = 200;
  double best_lo = 0.0, best_hi = 0.0, best_dist = kInf;
  double prev_a = kModulationLow + 1e-9, prev_g = eq.value(prev_a);
  for (int i = 1; i <= samples; ++i) {
    const double x = kModulationLow + 1e-9 + (kModulationHigh - kModulationLow - 2e-9) * i / samples;
    const double gx = eq.value(x);
    if ((prev_g <= 0.0 && gx >= 0.0) || (prev_g >= 0.0 && gx <= 0.0)) {
      const double dist = std::abs(0.5 * (prev_a + x) - a_start);
      if (dist < best_dist) {
        best_dist = dist;
        best_lo = prev_a;
        best_hi = x;
      }
    }
    prev_a = x;
    prev_g = gx;
  }
  if (!std::isfinite(best_dist)) throw ModulationWindowError("no modulation root in (1/2, 3/2)");
  boost::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(
      [&](double x) { return eq.value(x); }, best_lo, best_hi,
      boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (root.first + root.second);
}

ModulationHistory zero_history(GridPtr grid, double dt, std::size_t levels) {
  ModulationHistory h;
  h.dt = dt;
  h.a.assign(levels, 1.0);
  h.adot.assign(levels, 0.0);
  h.u.assign(levels, RadialField(grid));
  return h;
}

RadialField modulation_source(const RadialField& u0, double a0, const SpectralData& S) {
  const auto& g = *u0.grid;
  RadialField out(u0.grid);
  // Discrete residual difference res(a0) - res(1), res(a) = D2 phi(a) + phi(a)^5:
  // zero in the continuum, O(dr^2 |a0 - 1|) on the grid. With it the fixed point
  // of the map is the balanced discrete solution.
  RadialField res(u0.grid);
  if (a0 != 1.0) {
    const RadialField pa = sample(u0.grid, [a0](double r) { return phi(r, a0); });
    const RadialField p1 = sample(u0.grid, [](double r) { return phi(r, 1.0); });
    const RadialField La = laplacian(pa), L1 = laplacian(p1);
    for (std::size_t j = 1; j + 1 < g.n(); ++j)
      res.f[j] = (La.f[j] + std::pow(pa.f[j], 5)) - (L1.f[j] + std::pow(p1.f[j], 5));
  }
  for (std::size_t j = 0; j < g.n(); ++j) {
    const double r = g.r(j);
    const double p = phi(r, a0);
    const double x = u0.f[j];
    const double N = x * x * (10.0 * p * p * p + x * (10.0 * p * p + x * (5.0 * p + x)));
    out.f[j] = (S.potential.f[j] - potential(r, a0)) * x + N + res.f[j];
  }
  return out;
}

namespace {

RadialField defect_field(GridPtr grid, double a) {
  return sample(grid, [a](double r) { return resonance_defect_profile(r, a); });
}

RadialField resonance_at(GridPtr grid, double a) {
  return sample(grid, [a](double r) { return dphi_da(r, a); });
}

void require_oriented(const SpectralData& S) {
  if (S.orientation != 1)
    throw UsageError("modulation formulas assume (g, +k g) is the growing mode");
}

}  // namespace

AdotCondition::AdotCondition(const SpectralData& S, const RadialField& p, const RadialField& q,
                             double dt, std::size_t levels)
    : S_(S), dt_(dt), levels_(levels) {
  const RadialField Vd = resonance_weight(S);
  const FreeTransport tr(Vd);
  const std::size_t n = S.grid->n();
  Ks_.assign(levels, RadialField(S.grid));
  Kc_.assign(levels, RadialField(S.grid));
  data_.assign(levels, 0.0);
  for (std::size_t m = 0; m < levels; ++m) {
    const double t = dt * static_cast<double>(m);
    tr.sine(t, Ks_[m].f.data(), n);
    tr.cosine(t, Kc_[m].f.data(), n);
    // Free propagators are self-adjoint: <cos(t) p, V dphi> = <p, cos(t) V dphi>.
    data_[m] = inner_product(p, Kc_[m]) + inner_product(q, Ks_[m]);
  }
}

double AdotCondition::evaluate(std::size_t m, const ModulationHistory& hist) const {
  if (m >= hist.levels() || m >= levels_) throw UsageError("history shorter than requested time");
  double duh = 0.0, def = 0.0;
  for (std::size_t i = 0; i <= m && m > 0; ++i) {
    const double wt = (i == 0 || i == m) ? 0.5 * dt_ : dt_;
    const RadialField F0 = modulation_source(hist.u[i], hist.a[i], S_);
    duh += wt * inner_product(F0, Ks_[m - i]);
    if (hist.adot[i] != 0.0)
      def += wt * hist.adot[i] * inner_product(defect_field(S_.grid, hist.a[i]), Kc_[m - i]);
  }
  return -std::pow(hist.a[m], 1.25) * secular_constant(S_) * (data_[m] + duh - def);
}

std::vector<double> AdotCondition::evaluate_all(const ModulationHistory& hist) const {
  const std::size_t M = std::min(hist.levels(), levels_);
  if (hist.levels() < levels_) throw UsageError("history shorter than the condition horizon");
  std::vector<RadialField> F0(M), D(M);
  std::vector<bool> has_defect(M, false);
  for (std::size_t i = 0; i < M; ++i) {
    F0[i] = modulation_source(hist.u[i], hist.a[i], S_);
    if (hist.adot[i] != 0.0) {
      D[i] = defect_field(S_.grid, hist.a[i]);
      has_defect[i] = true;
    }
  }
  std::vector<double> out(M, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    double duh = 0.0, def = 0.0;
    for (std::size_t i = 0; i <= m && m > 0; ++i) {
      const double wt = (i == 0 || i == m) ? 0.5 * dt_ : dt_;
      duh += wt * inner_product(F0[i], Ks_[m - i]);
      if (has_defect[i]) def += wt * hist.adot[i] * inner_product(D[i], Kc_[m - i]);
    }
    out[m] = -std::pow(hist.a[m], 1.25) * secular_constant(S_) * (data_[m] + duh - def);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unstable coordinates and the manifold offset

namespace {

// phi0(s) = <F0(s), g>, chi(s) = adot0(s) <dphi_da(a0(s)), g>.
void mode_forcing(const ModulationHistory& hist, const SpectralData& S, std::vector<double>& phi0,
                  std::vector<double>& chi) {
  const std::size_t M = hist.levels();
  phi0.assign(M, 0.0);
  chi.assign(M, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    phi0[i] = inner_product(modulation_source(hist.u[i], hist.a[i], S), S.g) / S.gg;
    if (hist.adot[i] != 0.0)
      chi[i] = hist.adot[i] * inner_product(resonance_at(S.grid, hist.a[i]), S.g) / S.gg;
  }
}

}  // namespace

XpmResult xpm_evolution(const ModulationHistory& hist, const SpectralData& S, const RadialField& p,
                        const RadialField& q) {
  require_oriented(S);
  std::vector<double> phi0, chi;
  mode_forcing(hist, S, phi0, chi);
  const std::size_t M = hist.levels();
  const double k = S.k, dt = hist.dt, e = std::exp(-k * dt);
  const double l_minus = (k * inner_product(p, S.g) - inner_product(q, S.g)) / S.gg;

  std::vector<double> zm(M), zp(M), I(M, 0.0), J(M, 0.0);
  for (std::size_t m = 1; m < M; ++m) {
    const double a = phi0[m - 1] + k * chi[m - 1], b = phi0[m] + k * chi[m];
    I[m] = e * I[m - 1] + 0.5 * dt * (e * a + b);
  }
  double peak = 0.0;
  for (std::size_t m = M - 1; m-- > 0;) {
    const double a = phi0[m] - k * chi[m], b = phi0[m + 1] - k * chi[m + 1];
    J[m] = e * J[m + 1] + 0.5 * dt * (a + e * b);
  }
  for (std::size_t m = 0; m < M; ++m) peak = std::max(peak, std::abs(phi0[m] - k * chi[m]));

  XpmResult out;
  out.x_plus.resize(M);
  out.x_minus.resize(M);
  out.beta.resize(M);
  const double s = 1.0 / std::sqrt(2.0 * k);
  for (std::size_t m = 0; m < M; ++m) {
    const double t = dt * static_cast<double>(m);
    zm[m] = std::exp(-k * t) * l_minus + chi[m] - I[m];
    zp[m] = -chi[m] - J[m];
    out.x_plus[m] = s * zp[m];
    out.x_minus[m] = s * zm[m];
    out.beta[m] = (zp[m] + zm[m]) / (2.0 * k);
  }
  out.tail_bound = std::exp(-k * hist.horizon()) * peak / k;
  return out;
}

HResult h_fixed_point(const ModulationHistory& hist, const SpectralData& S, const RadialField& p,
                      const RadialField& q) {
  require_oriented(S);
  std::vector<double> phi0, chi;
  mode_forcing(hist, S, phi0, chi);
  const std::size_t M = hist.levels();
  const double k = S.k, dt = hist.dt;
  double I = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double wt = (i == 0 || i + 1 == M) ? 0.5 * dt : dt;
    // The grid overlap <dphi_da, g> is O(dr^2) rather than zero; keeping the
    // full dphi_da(a0) in chi makes the identity exact on the grid.
    const double v = phi0[i] - k * chi[i];
    I += wt * std::exp(-k * dt * static_cast<double>(i)) * v;
    peak = std::max(peak, std::abs(v));
  }
  const double l_plus = (k * inner_product(p, S.g) + inner_product(q, S.g)) / S.gg;
  HResult out;
  out.integral = I;
  out.tail_bound = std::exp(-k * hist.horizon()) * peak / k;
  if (out.tail_bound > 1e-3 * std::abs(I) && out.tail_bound > 0.0)
    throw UsageError("horizon too short for the manifold offset integral");
  out.h = (-l_plus - I) / (2.0 * k * S.gg);
  return out;
}

ManifoldQuery make_query(RadialField p, RadialField q, const SpectralData& S, double epsilon) {
  require_oriented(S);
  auto l_plus = [&](const RadialField& pp) {
    return (S.k * inner_product(pp, S.g) + inner_product(q, S.g)) / S.gg;
  };
  const double l = l_plus(p);
  for (std::size_t j = 0; j < p.size(); ++j) p.f[j] -= l / S.k * S.g.f[j];
  ManifoldQuery out;
  out.constraint_residual = std::abs(l_plus(p));
  out.p = std::move(p);
  out.q = std::move(q);
  out.epsilon = epsilon;
  out.constraint_ok = out.constraint_residual < 1e-10;
  return out;
}

std::pair<RadialField, RadialField> manifold_data(const ManifoldQuery& query, const SpectralData& S,
                                                  double h) {
  RadialField psi0 = sample(S.grid, [](double r) { return phi(r, 1.0); });
  psi0 += query.p;
  RadialField psi1 = query.q;
  for (std::size_t j = 0; j < psi0.size(); ++j) {
    psi0.f[j] += h * S.g.f[j];
    psi1.f[j] += h * S.k * S.g.f[j];
  }
  return {psi0, psi1};
}

int exit_sign(const ManifoldQuery& query, const SpectralData& S, double h, const ShootOptions& opt,
              NonlinearRun* run) {
  const auto [psi0, psi1] = manifold_data(query, S, h);
  NonlinearOptions nopt;
  nopt.T = opt.T;
  nopt.dt = opt.dt;
  nopt.scheme = Scheme::balanced;
  nopt.spectral = &S;
  nopt.departure_threshold = opt.departure_threshold;
  nopt.exec = opt.exec;
  NonlinearRun r = evolve_nonlinear(psi0, psi1, nopt);
  int sign = r.exit_sign;
  if (r.outcome == Outcome::blowup) sign = 1;
  if (run) *run = std::move(r);
  return sign;
}

ShootResult shoot_h(const ManifoldQuery& query, const SpectralData& S, const ShootOptions& opt) {
  require_oriented(S);
  ShootResult res;
  if (!query.constraint_ok) {
    res.message = "query constraint not enforced";
    return res;
  }
  const double eps = query.epsilon;
  double h_max = opt.h_max > 0.0 ? opt.h_max : std::max(10.0 * eps, 1e-8);
  const double tol = opt.tolerance > 0.0 ? opt.tolerance : 1e-12 * std::max(eps, 1e-6);
  double lo = -h_max, hi = h_max;
  int s_lo = exit_sign(query, S, lo, opt), s_hi = exit_sign(query, S, hi, opt);
  for (int widen = 0; widen < 3 && s_lo == s_hi && s_lo != 0; ++widen) {
    lo *= 10.0;
    hi *= 10.0;
    s_lo = exit_sign(query, S, lo, opt);
    s_hi = exit_sign(query, S, hi, opt);
  }
  if (s_lo == 0 && s_hi == 0) {
    res.message = "both bracket ends stayed: horizon too short";
    return res;
  }
  if (s_lo == s_hi) {
    res.message = "bracket ends exit with the same sign";
    return res;
  }
  int it = 0;
  while (hi - lo > tol && it < opt.max_iterations) {
    const double mid = 0.5 * (lo + hi);
    const int s = exit_sign(query, S, mid, opt);
    ++it;
    if (s == 0) {  // stayed for the whole horizon: mid is on the manifold to run precision
      lo = hi = mid;
      break;
    }
    if (s == s_lo) lo = mid; else hi = mid;
  }
  res.ok = true;
  res.h = 0.5 * (lo + hi);
  res.bracket_width = hi - lo;
  res.iterations = it;
  return res;
}

// ---------------------------------------------------------------------------
// Linearised map

PicardResult picard_map(const ModulationHistory& in, const ManifoldQuery& query,
                        const SpectralData& S, const PicardOptions& opt) {
  require_oriented(S);
  const GridPtr gp = S.grid;
  const std::size_t n = gp->n();
  const std::size_t M = in.levels();
  if (M < 3) throw UsageError("history needs at least three levels");
  const double T = in.horizon();

  PicardResult res;
  const HResult hr = h_fixed_point(in, S, query.p, query.q);
  res.h = hr.h;
  res.h_tail = hr.tail_bound;

  // Scale parameter from the condition.
  const AdotCondition cond(S, query.p, query.q, in.dt, M);
  ModulationHistory out;
  out.dt = in.dt;
  out.adot = cond.evaluate_all(in);
  out.a.assign(M, 1.0);
  for (std::size_t m = 1; m < M; ++m) out.a[m] = out.a[m - 1] + 0.5 * in.dt * (out.adot[m - 1] + out.adot[m]);

  // Continuous part: E1 with data (P_c p, P_c q) and source P_c F0, minus the
  // time derivative of the auxiliary run Z_tt + H Z = P_c X.
  SpaceTimeField F(gp, in.dt, n, M), X(gp, in.dt, n, M);
  for (std::size_t i = 0; i < M; ++i) {
    F.set_slice(i, modulation_source(in.u[i], in.a[i], S));
    const double c = out.adot[i] * std::pow(in.a[i], -1.25);
    RadialField xi = c * S.resonance;
    if (in.adot[i] != 0.0) xi += in.adot[i] * defect_field(gp, in.a[i]);
    X.set_slice(i, xi);
  }
  LinearOptions lopt;
  lopt.T = T;
  lopt.dt = in.dt / static_cast<double>(opt.substeps);
  lopt.stride = opt.substeps;
  lopt.R_obs = gp->R();
  lopt.check_budget = false;
  lopt.project = &S;
  const RadialField zero(gp);
  const auto E1 = evolve_linear_perturbed(project_continuous(query.p, S), project_continuous(query.q, S),
                                          source_from(F), lopt);
  lopt.record_velocity = true;
  const auto Z = evolve_linear_perturbed(zero, zero, source_from(X), lopt);

  const XpmResult x = xpm_evolution(in, S, query.p, query.q);
  res.xpm_tail = x.tail_bound;

  out.u.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    RadialField u = E1.u.slice(i);
    u -= Z.ut.slice(i);
    for (std::size_t j = 0; j < n; ++j) u.f[j] += x.beta[i] * S.g.f[j];
    out.u[i] = std::move(u);
  }
  res.out = std::move(out);
  return res;
}

namespace {

double adot_norm(const std::vector<double>& d, double dt) {
  double l1 = 0.0, sup = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double wt = (i == 0 || i + 1 == d.size()) ? 0.5 * dt : dt;
    l1 += wt * std::abs(d[i]);
    sup = std::max(sup, std::abs(d[i]));
  }
  return l1 + sup;
}

double u_norm(const SpaceTimeField& u, double R_obs) {
  return mixed_norm(u, 6.0, 2.0, TimeNorm::sup, R_obs) + mixed_norm(u, kInf, kInf, TimeNorm::l2, R_obs) +
         mixed_norm(u, kInf, kInf, TimeNorm::l1, R_obs);
}

}  // namespace

double x_distance(const ModulationHistory& h1, const ModulationHistory& h2, double R_obs) {
  if (h1.levels() != h2.levels()) throw UsageError("histories of different length");
  const GridPtr gp = h1.u.front().grid;
  const std::size_t nodes = gp->count_within(R_obs);
  SpaceTimeField d(gp, h1.dt, nodes, h1.levels());
  std::vector<double> da(h1.levels());
  for (std::size_t m = 0; m < h1.levels(); ++m) {
    for (std::size_t j = 0; j < nodes; ++j) d.at(m, j) = h1.u[m].f[j] - h2.u[m].f[j];
    da[m] = h1.adot[m] - h2.adot[m];
  }
  return u_norm(d, R_obs) + adot_norm(da, h1.dt);
}

double x_norm(const ModulationHistory& h, double R_obs) {
  const auto z = zero_history(h.u.front().grid, h.dt, h.levels());
  return x_distance(h, z, R_obs);
}

ModulationHistory history_from_run(const NonlinearRun& run, const SpectralData& S) {
  const GridPtr gp = S.grid;
  if (run.psi.nodes != gp->n()) throw UsageError("history needs full-grid snapshots");
  const std::size_t M = run.psi.levels();
  ModulationHistory h;
  h.dt = run.psi.dt;
  h.a.resize(M);
  h.adot.assign(M, 0.0);
  h.u.resize(M);
  double a = 1.0;
  for (std::size_t m = 0; m < M; ++m) {
    const RadialField psi = run.psi.slice(m);
    a = extract_modulation(psi, a);
    h.a[m] = a;
    RadialField u = psi;
    for (std::size_t j = 0; j < gp->n(); ++j) u.f[j] -= phi(gp->r(j), a);
    h.u[m] = std::move(u);
  }
  for (std::size_t m = 0; m < M && M >= 3; ++m) {
    if (m == 0) h.adot[m] = (-3.0 * h.a[0] + 4.0 * h.a[1] - h.a[2]) / (2.0 * h.dt);
    else if (m + 1 == M) h.adot[m] = (3.0 * h.a[m] - 4.0 * h.a[m - 1] + h.a[m - 2]) / (2.0 * h.dt);
    else h.adot[m] = (h.a[m + 1] - h.a[m - 1]) / (2.0 * h.dt);
  }
  return h;
}

}  // namespace solmanifold

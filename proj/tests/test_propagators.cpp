#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "solmanifold/errors.hpp"
#include "solmanifold/propagators.hpp"
#include "solmanifold/soliton.hpp"

using namespace solmanifold;

namespace {

double gauss(double r) { return std::exp(-r * r); }

// Free evolutions of e^{-r^2} in closed form (1D d'Alembert on w = r u).
double sine_exact(double r, double t) {
  if (r == 0.0) return t * std::exp(-t * t);
  return (std::exp(-std::pow(r - t, 2)) - std::exp(-std::pow(r + t, 2))) / (4 * r);
}
double cosine_exact(double r, double t) {
  if (r == 0.0) return (1 - 2 * t * t) * std::exp(-t * t);
  return ((r - t) * std::exp(-std::pow(r - t, 2)) + (r + t) * std::exp(-std::pow(r + t, 2))) / (2 * r);
}

double max_error(const RadialField& u, double t, double (*exact)(double, double), double rmax) {
  double e = 0.0;
  for (std::size_t j = 0; j < u.grid->count_within(rmax); ++j) e = std::max(e, std::abs(u[j] - exact(u.grid->r(j), t)));
  return e;
}

const SpectralData& reference() {
  static const SpectralData S = ground_state(make_grid(40.0, 1601));
  return S;
}

}  // namespace

TEST_CASE("exact free propagators against the closed form") {
  auto g = make_grid(30.0, 6001);
  auto f = sample(g, gauss);
  for (double t : {0.0, 1.3, 7.9}) {
    CHECK(max_error(free_sine(f, t), t, sine_exact, 15.0) < 1e-5);
    CHECK(max_error(free_cosine(f, t), t, cosine_exact, 15.0) < 1e-4);
  }
}

TEST_CASE("leapfrog and exact transport agree on the free equation") {
  auto g = make_grid(30.0, 6001);
  auto f = sample(g, gauss);
  RadialField zero(g);
  LinearOptions opt;
  opt.T = 8.0;
  opt.R_obs = 15.0;
  opt.with_potential = false;
  auto s = evolve_linear_perturbed(zero, f, nullptr, opt).u;
  auto c = evolve_linear_perturbed(f, zero, nullptr, opt).u;
  const std::size_t last = s.levels() - 1;
  const double T = s.t(last);
  CHECK(T == doctest::Approx(8.0));
  auto exact_s = free_sine(f, T), exact_c = free_cosine(f, T);
  double es = 0.0, ec = 0.0;
  for (std::size_t j = 0; j < s.nodes; ++j) {
    es = std::max(es, std::abs(s.at(last, j) - exact_s[j]));
    ec = std::max(ec, std::abs(c.at(last, j) - exact_c[j]));
  }
  CHECK(es < 1e-4);
  CHECK(ec < 1e-3);
}

TEST_CASE("causality budget") {
  auto g = make_grid(20.0, 801);
  auto f = sample(g, gauss);
  CHECK_THROWS_AS(free_sine(f, 12.0, 10.0), UsageError);
  CHECK_NOTHROW(free_sine(f, 10.0, 10.0));
  CHECK_THROWS_AS(free_cosine_trajectory(f, 15.0, 0.1, 10.0), UsageError);
  LinearOptions opt;
  opt.T = 15.0;
  opt.R_obs = 10.0;
  CHECK_THROWS_AS(evolve_linear_perturbed(f, f, nullptr, opt), UsageError);
  opt.T = 5.0;
  opt.dt = 0.1;
  CHECK_THROWS_AS(evolve_linear_perturbed(f, f, nullptr, opt), UsageError);
}

TEST_CASE("Duhamel integral matches a leapfrog run with a source") {
  auto g = make_grid(30.0, 1501);
  auto F0 = sample(g, [](double r) { return std::exp(-std::pow(r - 2.0, 2)); });
  const double T = 4.0, dt = 0.02;
  SpaceTimeField F(g, dt, g->n(), static_cast<std::size_t>(std::lround(T / dt)) + 1);
  for (std::size_t m = 0; m < F.levels(); ++m) {
    const double t = F.t(m);
    for (std::size_t j = 0; j < g->n(); ++j) F.at(m, j) = std::cos(t) * F0[j];
  }
  auto D = free_duhamel(F);
  RadialField zero(g);
  LinearOptions opt;
  opt.T = T;
  opt.dt = dt;
  opt.R_obs = 15.0;
  opt.with_potential = false;
  auto L = evolve_linear_perturbed(zero, zero, source_from(F), opt).u;
  const std::size_t m = L.levels() - 1;
  double e = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < L.nodes; ++j) {
    e = std::max(e, std::abs(L.at(m, j) - D.at(m, j)));
    scale = std::max(scale, std::abs(D.at(m, j)));
  }
  CHECK(scale > 0.1);
  CHECK(e / scale < 1e-3);
}

TEST_CASE("property: sine is linear and its time derivative is the cosine") {
  auto g = make_grid(30.0, 3001);
  gen::Source src(501);
  for (int c = 0; c < gen::kCases; ++c) {
    auto f = src.gaussians(g, 5.0), h = src.bump(g, 5.0);
    // t and dt on the mesh, so the transport reads table values exactly.
    const double dt = g->dr(), t = dt * static_cast<double>(src.index(50, 1000)), s = src.uniform(-2.0, 2.0);
    auto lhs = free_sine(f + s * h, t), rhs = free_sine(f, t) + s * free_sine(h, t);
    auto d = (1.0 / (2 * dt)) * (free_sine(f, t + dt) - free_sine(f, t - dt));
    auto cf = free_cosine(f, t);
    INFO("case " << c << " t=" << t);
    double lin = 0.0, der = 0.0, sc = 0.0;
    for (std::size_t j = 1; j < g->count_within(12.0); ++j) {
      lin = std::max(lin, std::abs(lhs[j] - rhs[j]));
      der = std::max(der, std::abs(d[j] - cf[j]));
      sc = std::max(sc, std::abs(cf[j]));
    }
    CHECK(lin < 1e-12);
    CHECK(der < 1e-3 * (sc + 1e-3));
  }
}

TEST_CASE("linear energy is conserved on P_c data and dt-convergent") {
  const auto& S = reference();
  auto f = project_continuous(sample(S.grid, [](double r) { return std::exp(-std::pow(r - 3.0, 2)); }), S);
  RadialField zero(S.grid);
  auto drift = [&](double dt) {
    LinearOptions opt;
    opt.T = 15.0;
    opt.dt = dt;
    opt.R_obs = 20.0;
    opt.project = &S;
    opt.record_energy = true;
    auto run = evolve_linear_perturbed(f, zero, nullptr, opt);
    double lo = run.energy.front(), hi = lo;
    for (double e : run.energy) lo = std::min(lo, e), hi = std::max(hi, e);
    return (hi - lo) / std::abs(run.energy.front());
  };
  const double d1 = drift(0.0125), d2 = drift(0.00625);
  CHECK(d1 < 1e-3);
  CHECK(d1 / d2 > 3.0);
}

TEST_CASE("projection keeps the g-component at zero") {
  const auto& S = reference();
  auto f = sample(S.grid, [](double r) { return std::exp(-r * r); });
  LinearOptions opt;
  opt.T = 10.0;
  opt.R_obs = 30.0;
  opt.project = &S;
  auto run = evolve_linear_perturbed(f, f, nullptr, opt);
  for (std::size_t m = 0; m < run.u.levels(); m += 50) {
    auto u = run.u.slice(m);
    // The stored ball ends at 30, where g is below 1e-20.
    CHECK(std::abs(inner_product(u, S.g)) < 1e-6);
  }
}

TEST_CASE("the growing mode has positive orientation") {
  CHECK(measure_orientation(reference()) == 1);
}

TEST_CASE("secular split adds up") {
  const auto& S = reference();
  auto f = resonance_weight(S);
  auto sp = secular_decomposition_S(f, S, 10.0, 0.025, 10.0);
  REQUIRE(sp.full.levels() == sp.secular.levels());
  for (std::size_t m = 0; m < sp.full.levels(); m += 37)
    for (std::size_t j = 0; j < sp.full.nodes; j += 29)
      CHECK(sp.full.at(m, j) == doctest::Approx(sp.secular.at(m, j) + sp.remainder.at(m, j)).epsilon(1e-12).scale(1.0));
  for (std::size_t j = 0; j < sp.full.nodes; ++j) CHECK(sp.secular.at(0, j) == 0.0);
}

TEST_CASE("space-time slices round trip") {
  auto g = make_grid(10.0, 101);
  SpaceTimeField u(g, 0.1, 51, 3);
  auto f = sample(g, [](double r) { return r; });
  u.set_slice(1, f);
  auto back = u.slice(1);
  CHECK(back[50] == doctest::Approx(5.0));
  CHECK(back[51] == 0.0);
  CHECK(u.levels() == 3);
  CHECK(u.t(2) == doctest::Approx(0.2));
}

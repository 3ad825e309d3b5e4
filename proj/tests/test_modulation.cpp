#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "solmanifold/errors.hpp"
#include "solmanifold/modulation.hpp"
#include "solmanifold/soliton.hpp"

using namespace solmanifold;

namespace {

const SpectralData& reference() {
  static const SpectralData S = ground_state(make_grid(40.0, 1601));
  return S;
}

ManifoldQuery bump_query(double eps) {
  const auto& S = reference();
  auto p = sample(S.grid, [eps](double r) { return eps * std::exp(-std::pow(r - 2.0, 2)); });
  return make_query(p, RadialField(S.grid), S, eps);
}

ShootOptions serial_shoot() {
  ShootOptions so;
  so.exec = Exec::serial;
  return so;
}

struct Shot {
  ShootResult res;
  NonlinearRun run;
};

const Shot& shot_1e3() {
  static const Shot s = [] {
    Shot out;
    const auto Q = bump_query(1e-3);
    out.res = shoot_h(Q, reference(), serial_shoot());
    exit_sign(Q, reference(), out.res.h, serial_shoot(), &out.run);
    return out;
  }();
  return s;
}

// Balanced run from the manifold data, stored on the full grid at every step.
NonlinearRun full_run(const ManifoldQuery& Q, double h, double T) {
  auto [p0, p1] = manifold_data(Q, reference(), h);
  NonlinearOptions no;
  no.T = T;
  no.scheme = Scheme::balanced;
  no.stride = 1;
  no.R_obs = no.store_radius = 40.0;
  no.exec = Exec::serial;
  return evolve_nonlinear(p0, p1, no);
}

}  // namespace

TEST_CASE("property: N is the superlinear part of the quintic") {
  auto g = make_grid(10.0, 101);
  gen::Source src(701);
  for (int c = 0; c < gen::kCases; ++c) {
    const double a = src.uniform(0.6, 1.4);
    auto u = src.gaussians(g, 6.0);
    u *= src.uniform(0.01, 1.0);
    auto pa = sample(g, [a](double r) { return phi(r, a); });
    auto N = nonlinearity(u, pa);
    INFO("case " << c);
    for (std::size_t j = 0; j < g->n(); j += 7) {
      const double p = pa[j], x = u[j];
      const double want = std::pow(p + x, 5) - std::pow(p, 5) - 5 * std::pow(p, 4) * x;
      // The oracle cancels down from (p + |x|)^5.
      CHECK(std::abs(N[j] - want) < 1e-14 * std::pow(p + std::abs(x), 5));
    }
  }
}

TEST_CASE("property: extract_modulation recovers the scale of a soliton") {
  auto g = make_grid(40.0, 1601);
  gen::Source src(702);
  for (int c = 0; c < gen::kCases; ++c) {
    const double a = src.uniform(0.7, 1.4), start = src.uniform(0.8, 1.2);
    auto psi = sample(g, [a](double r) { return phi(r, a); });
    INFO("case " << c << " a=" << a << " start=" << start);
    CHECK(extract_modulation(psi, start) == doctest::Approx(a).epsilon(1e-10));
  }
}

TEST_CASE("no modulation root for the zero field") {
  CHECK_THROWS_AS(extract_modulation(RadialField(make_grid(40.0, 1601))), ModulationWindowError);
}

TEST_CASE("balanced scheme keeps the sampled soliton at rest") {
  const auto& S = reference();
  auto p = sample(S.grid, [](double r) { return phi(r, 1.0); });
  NonlinearOptions no;
  no.T = 5.0;
  no.scheme = Scheme::balanced;
  no.spectral = &S;
  auto run = evolve_nonlinear(p, RadialField(S.grid), no);
  CHECK(run.outcome == Outcome::completed);
  double o = 0.0;
  for (double x : run.overlap) o = std::max(o, std::abs(x));
  CHECK(o < 1e-13);
}

TEST_CASE("constraint and manifold data") {
  const auto& S = reference();
  auto Q = bump_query(1e-3);
  CHECK(Q.constraint_ok);
  CHECK(std::abs(inner_product(S.k * Q.p + Q.q, S.g)) < 1e-15);
  auto [p0, p1] = manifold_data(Q, S, 2e-6);
  for (std::size_t j = 0; j < S.grid->n(); j += 101) {
    CHECK(p0[j] == doctest::Approx(phi(S.grid->r(j), 1.0) + Q.p[j] + 2e-6 * S.g[j]).epsilon(1e-14));
    CHECK(p1[j] == doctest::Approx(Q.q[j] + 2e-6 * S.k * S.g[j]).epsilon(1e-14).scale(1e-20));
  }
}

TEST_CASE("shooting gives a codimension-one exit structure") {
  const auto& s = shot_1e3();
  REQUIRE(s.res.ok);
  const auto Q = bump_query(1e-3);
  const double off = 1e-6;
  const int up = exit_sign(Q, reference(), s.res.h + off, serial_shoot());
  const int down = exit_sign(Q, reference(), s.res.h - off, serial_shoot());
  CHECK(up * down == -1);
  CHECK(up == 1);
}

TEST_CASE("h from the fixed-point identity agrees with shooting") {
  const auto& s = shot_1e3();
  const double eps = 1e-3;
  const auto Q = bump_query(eps);
  auto run = full_run(Q, s.res.h, s.run.end_time - 8.0);
  auto H = history_from_run(run, reference());
  // a = 1 frame: u = psi - phi(., 1), adot = 0.
  ModulationHistory H1 = H;
  for (std::size_t m = 0; m < H1.levels(); ++m) {
    H1.a[m] = 1.0;
    H1.adot[m] = 0.0;
    H1.u[m] = run.psi.slice(m) - sample(reference().grid, [](double r) { return phi(r, 1.0); });
  }
  const double h1 = h_fixed_point(H1, reference(), Q.p, Q.q).h;
  CHECK(std::abs(h1 - s.res.h) < 1e-3 * eps * eps);

  SUBCASE("the identity does not depend on the modulation frame") {
    // Synthetic slowly varying a(t); u is re-split against phi(a(t)).
    ModulationHistory Ha = H;
    for (std::size_t m = 0; m < Ha.levels(); ++m) {
      const double t = Ha.dt * static_cast<double>(m), d = 0.05 * eps;
      Ha.a[m] = 1.0 + d * t * t / (1.0 + t * t);
      Ha.adot[m] = d * 2.0 * t / std::pow(1.0 + t * t, 2);
      const double a = Ha.a[m];
      Ha.u[m] = run.psi.slice(m) - sample(reference().grid, [a](double r) { return phi(r, a); });
    }
    const double ha = h_fixed_point(Ha, reference(), Q.p, Q.q).h;
    CHECK(ha == doctest::Approx(h1).epsilon(1e-2));
  }
}

TEST_CASE("h scales quadratically in eps") {
  const auto a = shoot_h(bump_query(1e-4), reference(), serial_shoot());
  const auto b = shoot_h(bump_query(2e-4), reference(), serial_shoot());
  REQUIRE(a.ok);
  REQUIRE(b.ok);
  // Frozen at R = 40, n = 1601.
  CHECK(a.h == doctest::Approx(-5.116354e-8).epsilon(1e-5));
  CHECK(b.h / a.h == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("zero history and the X-norm") {
  auto g = reference().grid;
  auto z = zero_history(g, 0.1, 11);
  CHECK(z.levels() == 11);
  CHECK(z.horizon() == doctest::Approx(1.0));
  CHECK(x_norm(z, 10.0) == 0.0);
  gen::Source src(703);
  for (int c = 0; c < 8; ++c) {
    auto h1 = z, h2 = z, h3 = z;
    for (auto* h : {&h1, &h2, &h3})
      for (std::size_t m = 0; m < h->levels(); ++m) {
        h->u[m] = src.bump(g, 8.0, 1e-3);
        h->adot[m] = src.uniform(-1e-3, 1e-3);
      }
    INFO("case " << c);
    CHECK(x_distance(h1, h2, 10.0) == doctest::Approx(x_distance(h2, h1, 10.0)).epsilon(1e-12));
    CHECK(x_distance(h1, h3, 10.0) <= (x_distance(h1, h2, 10.0) + x_distance(h2, h3, 10.0)) * (1 + 1e-12));
  }
}

TEST_CASE("scale condition vanishes on zero data") {
  const auto& S = reference();
  RadialField zero(S.grid);
  auto z = zero_history(S.grid, 0.1, 21);
  AdotCondition cond(S, zero, zero, 0.1, 21);
  for (double v : cond.evaluate_all(z)) CHECK(v == 0.0);
}

TEST_CASE("xpm evolution of pure g data") {
  const auto& S = reference();
  auto z = zero_history(S.grid, 0.05, 101);
  // Decaying data (g, -k g): x_- = sqrt(2k) e^{-k t}, x_+ = 0 along a zero history.
  auto r = xpm_evolution(z, S, S.g, (-S.k) * S.g);
  CHECK(r.x_minus.front() == doctest::Approx(std::sqrt(2 * S.k)).epsilon(1e-10));
  CHECK(r.x_minus.back() == doctest::Approx(std::sqrt(2 * S.k) * std::exp(-5.0 * S.k)).epsilon(1e-8));
  CHECK(std::abs(r.x_plus.front()) < 1e-10);
}

TEST_CASE("Picard fixed point reproduces the shooting h") {
  const auto& S = reference();
  const double eps = 1e-3;
  const auto Q = bump_query(eps);
  PicardOptions po;
  auto H = zero_history(S.grid, 0.05, 201);  // T = 10
  PicardResult pr;
  for (int it = 0; it < 30; ++it) {
    pr = picard_map(H, Q, S, po);
    const double d = x_distance(pr.out, H, po.R_obs);
    H = pr.out;
    if (d < 1e-12 * eps) break;
  }
  CHECK(pr.h == doctest::Approx(shot_1e3().res.h).epsilon(5e-3));
}

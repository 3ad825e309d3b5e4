#include <doctest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "solmanifold/errors.hpp"
#include "solmanifold/mixed_norms.hpp"
#include "solmanifold/soliton.hpp"

using namespace solmanifold;
using std::numbers::pi;

namespace {

// ||e^{-r^2}||_{L^{p,q}(R^3)} with t = 4 pi r^3 / 3 as the distribution variable.
double gaussian_lorentz(double p, double q) {
  const double e = 3.0 * q / (2.0 * p);
  return std::pow(3.0 * std::pow(4.0 * pi / 3.0, q / p) * std::tgamma(e) / (2.0 * std::pow(q, e)), 1.0 / q);
}

SpaceTimeField separable(const RadialField& f, double dt, std::size_t levels, double (*c)(double)) {
  SpaceTimeField u(f.grid, dt, f.size(), levels);
  for (std::size_t m = 0; m < levels; ++m)
    for (std::size_t j = 0; j < f.size(); ++j) u.at(m, j) = c(u.t(m)) * f[j];
  return u;
}

}  // namespace

TEST_CASE("constants: L^p and Lorentz norms of an indicator") {
  auto g = make_grid(2.0, 201);
  auto one = sample(g, [](double) { return 1.0; });
  const double vol = 4.0 * pi / 3.0 * 8.0;
  CHECK(lp_norm(one, 2.0) == doctest::Approx(std::sqrt(vol)).epsilon(1e-13));
  CHECK(lorentz_norm(one, 6.0, 2.0) == doctest::Approx(std::sqrt(3.0) * std::pow(vol, 1.0 / 6.0)).epsilon(1e-13));
  CHECK(lorentz_norm(one, 1.5, kInf) == doctest::Approx(std::pow(vol, 2.0 / 3.0)).epsilon(1e-13));
  // Ball of radius 1: nodes up to r = 1 carry cells out to 1 + dr/2.
  CHECK(lp_norm(one, 1.0, 1.0) == doctest::Approx(4.0 * pi / 3.0 * std::pow(1.005, 3)).epsilon(1e-12));
}

TEST_CASE("Gaussian Lorentz norms against the Gamma-function closed form") {
  auto g = make_grid(10.0, 4001);
  auto f = sample(g, [](double r) { return std::exp(-r * r); });
  for (auto [p, q] : {std::pair{6.0, 2.0}, std::pair{1.5, 1.0}, std::pair{3.0, 3.0}}) {
    INFO("p=" << p << " q=" << q);
    CHECK(lorentz_norm(f, p, q) == doctest::Approx(gaussian_lorentz(p, q)).epsilon(1e-3));
  }
  CHECK(lp_norm(f, 2.0) == doctest::Approx(std::pow(pi / 2, 0.75)).epsilon(1e-4));
}

TEST_CASE("invalid exponents") {
  auto f = RadialField(make_grid(1.0, 17));
  CHECK_THROWS_AS(lorentz_norm(f, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(lorentz_norm(f, kInf, 1.0), DomainError);
  CHECK_THROWS_AS(lp_norm(f, 0.0), DomainError);
}

TEST_CASE("property: Lorentz (p, p) equals L^p") {
  auto g = make_grid(10.0, 1001);
  gen::Source src(601);
  for (int c = 0; c < gen::kCases; ++c) {
    auto f = src.gaussians(g, 8.0);
    const double p = src.uniform(1.0, 8.0), rho = src.uniform(1.0, 10.0);
    INFO("case " << c);
    CHECK(lorentz_norm(f, p, p, rho) == doctest::Approx(lp_norm(f, p, rho)).epsilon(1e-12));
  }
}

TEST_CASE("property: L^{6,2} is homogeneous and subadditive") {
  auto g = make_grid(10.0, 1001);
  gen::Source src(602);
  for (int c = 0; c < gen::kCases; ++c) {
    auto f = src.gaussians(g, 8.0), h = src.bump(g, 8.0);
    const double s = src.uniform(-5.0, 5.0);
    INFO("case " << c);
    CHECK(lorentz_norm(s * f, 6, 2) == doctest::Approx(std::abs(s) * lorentz_norm(f, 6, 2)).epsilon(1e-12));
    CHECK(lorentz_norm(f + h, 6, 2) <= (lorentz_norm(f, 6, 2) + lorentz_norm(h, 6, 2)) * (1 + 1e-12));
    CHECK(lorentz_norm(f, 6, 2, 4.0) <= lorentz_norm(f, 6, 2) * (1 + 1e-12));
  }
}

TEST_CASE("mixed norms of separable fields") {
  auto g = make_grid(5.0, 501);
  auto f = sample(g, [](double r) { return std::exp(-r * r); });
  const double dt = 0.01;
  const std::size_t M = 401;  // T = 4
  auto u = separable(f, dt, M, [](double) { return 1.0; });
  CHECK(mixed_norm(u, kInf, kInf, TimeNorm::l2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mixed_norm(u, kInf, kInf, TimeNorm::l1) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(mixed_norm(u, 6, 2, TimeNorm::sup) == doctest::Approx(lorentz_norm(f, 6, 2)).epsilon(1e-12));
  auto v = separable(f, dt, M, [](double t) { return std::sin(t); });
  // int_0^4 sin^2 = 2 - sin(8)/4
  CHECK(mixed_norm(v, kInf, kInf, TimeNorm::l2) == doctest::Approx(std::sqrt(2 - std::sin(8.0) / 4)).epsilon(1e-5));
  TimeNormAccumulator acc(g, g->n(), dt, Exec::serial);
  for (std::size_t m = 0; m < M; ++m) acc.add(v.row(m));
  CHECK(acc.levels() == M);
  CHECK(acc.mixed(6, 2, TimeNorm::l1) == doctest::Approx(mixed_norm(v, 6, 2, TimeNorm::l1)).epsilon(1e-14));
  CHECK(spacetime_l8(u) == doctest::Approx(std::pow(4.0, 0.125) * lp_norm(f, 8.0)).epsilon(1e-3));
}

TEST_CASE("Kato norm of a Gaussian is 2 pi") {
  auto g = make_grid(10.0, 4001);
  CHECK(kato_norm(sample(g, [](double r) { return std::exp(-r * r); })) == doctest::Approx(2 * pi).epsilon(1e-5));
  // A thin shell at radius 3 of unit mass is maximal on the shell: mass / 3.
  auto shell = sample(g, [](double r) { return std::exp(-std::pow((r - 3.0) / 0.05, 2)); });
  const double mass = lp_norm(shell, 1.0);
  CHECK(kato_norm(shell) == doctest::Approx(mass / 3.0).epsilon(2e-2));
}

TEST_CASE("soliton energy equals pi^2 sqrt(3) / 4") {
  // Pohozaev: |grad phi|^2 = int phi^6, so E = int phi^6 / 3.
  auto g = make_grid(40.0, 3201);
  auto p = sample(g, [](double r) { return phi(r, 1.0); });
  RadialField zero(g);
  CHECK(energy(p, zero) == doctest::Approx(pi * pi * std::sqrt(3.0) / 4).epsilon(1e-4));
  auto v = sample(g, [](double r) { return std::exp(-r * r); });
  CHECK(energy(p, v) - energy(p, zero) == doctest::Approx(0.5 * std::pow(pi / 2, 1.5)).epsilon(1e-8));
}

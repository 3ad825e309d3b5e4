#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "generators.hpp"
#include "solmanifold/errors.hpp"
#include "solmanifold/radial_grid.hpp"

using namespace solmanifold;
using std::numbers::pi;

TEST_CASE("grid shape") {
  auto g = make_grid(10.0, 100);
  CHECK(g->n() == 101);
  CHECK(g->dr() == doctest::Approx(0.1));
  CHECK(g->r(g->n() - 1) == 10.0);
  CHECK(g->count_within(0.0) == 1);
  CHECK(g->count_within(1.0) == 11);
  CHECK(g->count_within(1e9) == g->n());
  CHECK_THROWS_AS(make_grid(0.0, 101), UsageError);
  CHECK_THROWS_AS(make_grid(1.0, 8), UsageError);
}

TEST_CASE("cell volumes tile the ball") {
  auto g = make_grid(7.5, 301);
  double v = 0.0;
  for (double c : g->cell_volume()) v += c;
  CHECK(v == doctest::Approx(4.0 * pi / 3.0 * std::pow(7.5, 3)).epsilon(1e-13));
}

TEST_CASE("Simpson measure is exact on r^2 times cubics") {
  auto g = make_grid(3.0, 61);
  auto one = sample(g, [](double) { return 1.0; });
  auto lin = sample(g, [](double r) { return 2.0 - 0.5 * r; });
  const double R = 3.0;
  CHECK(inner_product(one, lin) == doctest::Approx(4 * pi * (2 * R * R * R / 3 - 0.5 * std::pow(R, 4) / 4)).epsilon(1e-13));
}

TEST_CASE("Gaussian norms") {
  auto g = make_grid(12.0, 2401);
  auto f = sample(g, [](double r) { return std::exp(-r * r); });
  CHECK(l2_norm(f) == doctest::Approx(std::pow(pi / 2, 0.75)).epsilon(1e-10));
  // |grad f|^2 = 16 pi int r^4 e^{-2 r^2} dr = 6 pi^{3/2} / 2^{5/2}
  const double h1 = std::sqrt(16 * pi * 3 * std::sqrt(pi) / (8 * std::pow(2.0, 2.5)));
  CHECK(h1_seminorm(f) == doctest::Approx(h1).epsilon(1e-4));
  CHECK(h1_ball(f, 12.0) == doctest::Approx(h1).epsilon(1e-4));
  CHECK(l2_ball(f, 12.0) == doctest::Approx(l2_norm(f)).epsilon(1e-8));
  CHECK(weighted_norm(f, WeightedKind::bracket_l2) > l2_norm(f));
  CHECK(weighted_norm(f, WeightedKind::bracket_h1) > h1_seminorm(f));
}

TEST_CASE("h1 seminorm includes the harmonic tail") {
  // f = 1/r outside r = 1: the far field is already harmonic, so the norm
  // does not depend on where the grid ends.
  auto prof = [](double r) { return r < 1.0 ? 1.5 - 0.5 * r * r : 1.0 / r; };
  const double a = h1_seminorm(sample(make_grid(4.0, 4001), prof));
  const double b = h1_seminorm(sample(make_grid(8.0, 8001), prof));
  CHECK(a == doctest::Approx(b).epsilon(1e-6));
  // Exact: 4 pi (int_0^1 r^4 dr + int_1^inf r^{-2} dr) = 4 pi (1/5 + 1)
  CHECK(a * a == doctest::Approx(4 * pi * 1.2).epsilon(1e-5));
}

TEST_CASE("laplacian is second order") {
  auto err = [](std::size_t n) {
    auto g = make_grid(8.0, n);
    auto L = laplacian(sample(g, [](double r) { return std::exp(-r * r); }));
    double e = 0.0;
    for (std::size_t j = 0; j < g->n(); ++j) {
      const double r = g->r(j);
      e = std::max(e, std::abs(L[j] - (4 * r * r - 6) * std::exp(-r * r)));
    }
    return e;
  };
  const double e1 = err(401), e2 = err(801);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("from_w inverts to_w") {
  auto g = make_grid(5.0, 501);
  auto f = sample(g, [](double r) { return std::cos(r); });
  auto back = from_w(g, f.to_w());
  for (std::size_t j = 1; j < g->n(); ++j) CHECK(back[j] == doctest::Approx(f[j]).epsilon(1e-14));
  CHECK(back[0] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("fields on different grids do not mix") {
  auto a = RadialField(make_grid(5.0, 101)), b = RadialField(make_grid(5.0, 201));
  CHECK_THROWS_AS(inner_product(a, b), UsageError);
  CHECK_THROWS_AS(a += b, UsageError);
  CHECK_NOTHROW(a += RadialField(make_grid(5.0, 101)));
  CHECK_THROWS_AS(RadialField(make_grid(5.0, 101), std::vector<double>(3)), UsageError);
}

TEST_CASE("property: inner product is symmetric, bilinear and Cauchy-Schwarz") {
  auto g = make_grid(10.0, 1001);
  gen::Source src(201);
  for (int c = 0; c < gen::kCases; ++c) {
    auto f = src.gaussians(g, 6.0), h = src.bump(g, 8.0), k = src.gaussians(g, 4.0);
    const double s = src.uniform(-3.0, 3.0);
    INFO("case " << c);
    CHECK(inner_product(f, h) == doctest::Approx(inner_product(h, f)).epsilon(1e-14).scale(l2_norm(f) * l2_norm(h)));
    CHECK(inner_product(f + s * h, k) ==
          doctest::Approx(inner_product(f, k) + s * inner_product(h, k)).epsilon(1e-12).scale(l2_norm(f) + l2_norm(h)));
    CHECK(std::abs(inner_product(f, h)) <= l2_norm(f) * l2_norm(h) * (1 + 1e-12));
  }
}

TEST_CASE("property: -<Delta f, f> matches |grad f|^2 for compact bumps") {
  auto g = make_grid(12.0, 2401);
  gen::Source src(202);
  for (int c = 0; c < gen::kCases; ++c) {
    auto f = src.bump(g, 8.0);
    const double lhs = -inner_product(laplacian(f), f), rhs = std::pow(h1_seminorm(f), 2);
    INFO("case " << c);
    CHECK(lhs == doctest::Approx(rhs).epsilon(2e-3));
  }
}

TEST_CASE("csv output") {
  auto g = make_grid(1.0, 17);
  std::ostringstream os;
  write_csv(os, sample(g, [](double r) { return r; }));
  CHECK(os.str().rfind("r,value\n0,0\n", 0) == 0);
}

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "generators.hpp"
#include "solmanifold/kernels.hpp"

using namespace solmanifold;
using namespace solmanifold::kernels;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (std::memcmp(&a[j], &b[j], sizeof(double)) != 0) return false;
  return true;
}

std::vector<double> cumulative(const std::vector<double>& w, double dr) {
  std::vector<double> W(w.size(), 0.0);
  for (std::size_t j = 1; j < w.size(); ++j) W[j] = W[j - 1] + 0.5 * dr * (w[j - 1] + w[j]);
  return W;
}

}  // namespace

TEST_CASE("second difference is exact on quadratics") {
  const std::size_t n = 50;
  const double dr = 0.1;
  std::vector<double> w(n), out(n, 7.0);
  for (std::size_t j = 0; j < n; ++j) w[j] = 3.0 * std::pow(dr * j, 2) - dr * j + 1.0;
  second_difference(w.data(), out.data(), n, 1.0 / (dr * dr), Exec::serial);
  CHECK(out.front() == 0.0);
  CHECK(out.back() == 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) CHECK(out[j] == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("nonlinear acceleration matches the direct formula") {
  const std::size_t n = 40;
  gen::Source src(301);
  auto v = src.vector(n, -0.1, 0.1), W = src.vector(n, 0.0, 2.0), r4 = src.vector(n, 0.1, 1.0),
       s = src.vector(n, -1.0, 1.0);
  std::vector<double> out(n);
  nonlinear_acceleration(v.data(), W.data(), r4.data(), s.data(), out.data(), n, 4.0, Exec::serial);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double d2 = 4.0 * (v[j + 1] - 2 * v[j] + v[j - 1]);
    const double want = d2 + (std::pow(W[j] + v[j], 5) - std::pow(W[j], 5)) * r4[j] + s[j];
    CHECK(out[j] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("linear acceleration and leapfrog formulas") {
  const std::size_t n = 30;
  gen::Source src(302);
  auto v = src.vector(n, -1, 1), V = src.vector(n, -5, 0), prev = src.vector(n, -1, 1), acc = src.vector(n, -1, 1);
  std::vector<double> out(n), next(n);
  linear_acceleration(v.data(), V.data(), nullptr, out.data(), n, 9.0, Exec::serial);
  for (std::size_t j = 1; j + 1 < n; ++j)
    CHECK(out[j] == doctest::Approx(9.0 * (v[j + 1] - 2 * v[j] + v[j - 1]) - V[j] * v[j]).epsilon(1e-12));
  leapfrog_update(prev.data(), v.data(), acc.data(), next.data(), n, 0.01, Exec::serial);
  CHECK(next.front() == 0.0);
  CHECK(next.back() == 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) CHECK(next[j] == doctest::Approx(2 * v[j] - prev[j] + 0.01 * acc[j]));
}

TEST_CASE("sine and cosine transport reproduce the Gaussian solutions") {
  // w_0 = r e^{-r^2}: sine solution (e^{-(r-t)^2} - e^{-(r+t)^2}) / (4 r),
  // cosine solution ((r-t) e^{-(r-t)^2} + (r+t) e^{-(r+t)^2}) / (2 r).
  const double dr = 0.005, R = 20.0, t = 3.7;
  const auto n = static_cast<std::size_t>(R / dr) + 1;
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = dr * j * std::exp(-std::pow(dr * j, 2));
  const auto Wc = cumulative(w, dr);
  const std::size_t m = 1200;
  std::vector<double> s(m), c(m);
  dalembert_sine(Wc.data(), w.data(), n, dr, t, s.data(), m, Exec::serial);
  dalembert_cosine(w.data(), n, dr, t, c.data(), m, Exec::serial);
  double es = 0.0, ec = 0.0;
  for (std::size_t j = 1; j < m; ++j) {
    const double r = dr * j, a = std::exp(-std::pow(r - t, 2)), b = std::exp(-std::pow(r + t, 2));
    es = std::max(es, std::abs(s[j] - (a - b) / (4 * r)));
    ec = std::max(ec, std::abs(c[j] - ((r - t) * a + (r + t) * b) / (2 * r)));
  }
  CHECK(es < 1e-5);
  CHECK(ec < 1e-4);
  // r = 0 values: w(t) and w'(t)
  CHECK(s[0] == doctest::Approx(t * std::exp(-t * t)).epsilon(1e-4));
  CHECK(c[0] == doctest::Approx((1 - 2 * t * t) * std::exp(-t * t)).epsilon(1e-3));
}

TEST_CASE("time norm accumulation") {
  std::vector<double> u = {1.0, -2.0, 0.0}, sup(3, 0.0), l1(3, 0.0), l2(3, 0.0);
  accumulate_time_norms(u.data(), 3, 0.5, sup.data(), l1.data(), l2.data(), Exec::serial);
  accumulate_time_norms(u.data(), 3, 0.5, sup.data(), l1.data(), l2.data(), Exec::serial);
  CHECK(sup[1] == 2.0);
  CHECK(l1[1] == 2.0);
  CHECK(l2[1] == 4.0);
  CHECK(l2[2] == 0.0);
}

TEST_CASE("property: serial and parallel kernels agree bitwise") {
  gen::Source src(303);
  for (int c = 0; c < gen::kCases; ++c) {
    const std::size_t n = src.index(16, 20000);
    const double dr = 40.0 / static_cast<double>(n - 1), t = src.uniform(0.0, 30.0);
    auto v = src.vector(n, -1, 1), W = src.vector(n, 0, 2), r4 = src.vector(n, 0, 1), s = src.vector(n, -1, 1);
    auto prev = src.vector(n, -1, 1);
    INFO("case " << c << " n=" << n);
    std::vector<double> a(n), b(n), a2(n), b2(n), a3(n), b3(n);

    second_difference(v.data(), a.data(), n, 3.0, Exec::serial);
    second_difference(v.data(), b.data(), n, 3.0, Exec::parallel);
    CHECK(bitwise_equal(a, b));

    linear_acceleration(v.data(), W.data(), s.data(), a.data(), n, 3.0, Exec::serial);
    linear_acceleration(v.data(), W.data(), s.data(), b.data(), n, 3.0, Exec::parallel);
    CHECK(bitwise_equal(a, b));

    nonlinear_acceleration(v.data(), W.data(), r4.data(), s.data(), a.data(), n, 3.0, Exec::serial);
    nonlinear_acceleration(v.data(), W.data(), r4.data(), s.data(), b.data(), n, 3.0, Exec::parallel);
    CHECK(bitwise_equal(a, b));

    leapfrog_update(prev.data(), v.data(), s.data(), a.data(), n, 1e-3, Exec::serial);
    leapfrog_update(prev.data(), v.data(), s.data(), b.data(), n, 1e-3, Exec::parallel);
    CHECK(bitwise_equal(a, b));

    const auto Wc = cumulative(v, dr);
    dalembert_sine(Wc.data(), v.data(), n, dr, t, a.data(), n, Exec::serial);
    dalembert_sine(Wc.data(), v.data(), n, dr, t, b.data(), n, Exec::parallel);
    CHECK(bitwise_equal(a, b));

    dalembert_cosine(v.data(), n, dr, t, a.data(), n, Exec::serial);
    dalembert_cosine(v.data(), n, dr, t, b.data(), n, Exec::parallel);
    CHECK(bitwise_equal(a, b));

    std::fill(a.begin(), a.end(), 0.0);
    std::fill(a2.begin(), a2.end(), 0.0);
    std::fill(a3.begin(), a3.end(), 0.0);
    b = a, b2 = a2, b3 = a3;
    for (int k = 0; k < 3; ++k) {
      accumulate_time_norms(v.data(), n, 0.1, a.data(), a2.data(), a3.data(), Exec::serial);
      accumulate_time_norms(v.data(), n, 0.1, b.data(), b2.data(), b3.data(), Exec::parallel);
    }
    CHECK(bitwise_equal(a, b));
    CHECK(bitwise_equal(a2, b2));
    CHECK(bitwise_equal(a3, b3));
  }
}

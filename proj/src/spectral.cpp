#include "solmanifold/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "solmanifold/errors.hpp"
#include "solmanifold/soliton.hpp"

namespace solmanifold {

namespace {

struct Tridiagonal {
  std::vector<double> diag;  // interior nodes 1..n-2
  double off = 0.0;
};

Tridiagonal reduced_operator(const RadialGrid& grid, double a) {
  const std::size_t m = grid.n() - 2;
  const double inv = 1.0 / (grid.dr() * grid.dr());
  Tridiagonal T;
  T.diag.resize(m);
  for (std::size_t i = 0; i < m; ++i) T.diag[i] = 2.0 * inv + potential(grid.r(i + 1), a);
  T.off = -inv;
  return T;
}

int count_below(const Tridiagonal& T, double lambda) {
  const double e2 = T.off * T.off;
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < T.diag.size(); ++i) {
    q = T.diag[i] - lambda - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

// Solves (T - mu) x = b in place (LDL^T without pivoting).
void shifted_solve(const Tridiagonal& T, double mu, std::vector<double>& x) {
  const std::size_t m = T.diag.size();
  std::vector<double> d(m);
  const double tiny = 1e-300;
  d[0] = T.diag[0] - mu;
  if (d[0] == 0.0) d[0] = tiny;
  for (std::size_t i = 1; i < m; ++i) {
    const double l = T.off / d[i - 1];
    d[i] = T.diag[i] - mu - l * T.off;
    if (d[i] == 0.0) d[i] = tiny;
    x[i] -= l * x[i - 1];
  }
  x[m - 1] /= d[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) x[i] = (x[i] - T.off * x[i + 1]) / d[i];
}

double rayleigh(const Tridiagonal& T, const std::vector<double>& x) {
  const std::size_t m = x.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double Tx = T.diag[i] * x[i];
    if (i > 0) Tx += T.off * x[i - 1];
    if (i + 1 < m) Tx += T.off * x[i + 1];
    num += x[i] * Tx;
    den += x[i] * x[i];
  }
  return num / den;
}

}  // namespace

int sturm_count(const RadialGrid& grid, double a, double lambda) {
  return count_below(reduced_operator(grid, a), lambda);
}

SpectralData ground_state(GridPtr grid, double a) {
  const auto T = reduced_operator(*grid, a);
  const int negatives = count_below(T, 0.0);
  if (negatives == 0) throw DiscretizationError("no negative eigenvalue: grid too coarse");
  if (negatives > 1)
    throw DiscretizationError("found " + std::to_string(negatives) +
                              " negative symmetric eigenvalues, expected one");

  double lo = *std::min_element(T.diag.begin(), T.diag.end()) - 2.0 * std::abs(T.off);
  double hi = 0.0;
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(lo);
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(T, mid) >= 1) hi = mid; else lo = mid;
  }
  const double lambda0 = 0.5 * (lo + hi);

  const std::size_t m = T.diag.size();
  std::vector<double> x(m, 1.0);
  for (int it = 0; it < 3; ++it) {
    shifted_solve(T, lambda0, x);
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : x) v /= nrm;
  }
  const double lambda = rayleigh(T, x);

  SpectralData S;
  S.grid = grid;
  S.a = a;
  S.k = std::sqrt(-lambda);
  S.negative_count = negatives;

  std::vector<double> w(grid->n(), 0.0);
  for (std::size_t i = 0; i < m; ++i) w[i + 1] = x[i];
  RadialField g = from_w(grid, w);
  double sign = g.f[0] > 0.0 ? 1.0 : -1.0;
  const double nrm = l2_norm(g);
  g *= sign / nrm;
  S.w_unit = x;
  for (double& v : S.w_unit) v *= sign;
  S.g = g;
  S.gg = inner_product(g, g);

  S.resonance = sample(grid, [a](double r) { return dphi_da(r, a); });
  S.potential = sample(grid, [a](double r) { return potential(r, a); });
  const auto pr = resonance_pairing(grid->R(), grid->n(), a);
  S.pairing_VdaPhi_grid = pr.first;
  S.pairing_VdaPhi = pr.second;
  S.overlap_g_daPhi = inner_product(S.g, S.resonance);

  // ||H g + k^2 g|| with the same discrete operator, on interior nodes.
  RadialField res(grid);
  const double inv = 1.0 / (grid->dr() * grid->dr());
  const auto gw = S.g.to_w();
  for (std::size_t j = 1; j + 1 < grid->n(); ++j) {
    const double Hw = -(gw[j + 1] - 2.0 * gw[j] + gw[j - 1]) * inv + S.potential.f[j] * gw[j];
    res.f[j] = (Hw + S.k * S.k * gw[j]) / grid->r(j);
  }
  S.residual = l2_norm(res);
  return S;
}

double extrapolated_rate(double R, std::size_t n, double a) {
  const double kc = ground_state(make_grid(R, n), a).k;
  const double kf = ground_state(make_grid(R, 2 * n - 1), a).k;
  return (4.0 * kf - kc) / 3.0;
}

std::pair<double, double> resonance_pairing(double R, std::size_t n, double a) {
  auto pairing = [a](GridPtr g) {
    const auto V = sample(g, [a](double r) { return potential(r, a); });
    const auto d = sample(g, [a](double r) { return dphi_da(r, a); });
    return inner_product(V, d);
  };
  const auto g1 = make_grid(R, n);
  const auto g2 = make_grid(2.0 * R, 2 * g1->n() - 1);
  const double p1 = pairing(g1);
  const double p2 = pairing(g2);
  return {p1, (4.0 * p2 - p1) / 3.0};
}

double consistency_residual(const SpectralData& S) {
  const auto& grid = *S.grid;
  const std::size_t n = grid.n();
  const auto w = S.g.to_w();
  auto at = [&](long j) -> double {
    if (j < 0) return -w[static_cast<std::size_t>(-j)];
    if (j >= static_cast<long>(n)) return -w[2 * (n - 1) - static_cast<std::size_t>(j)];
    return w[static_cast<std::size_t>(j)];
  };
  const double inv = 1.0 / (12.0 * grid.dr() * grid.dr());
  RadialField res(S.grid);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const long i = static_cast<long>(j);
    const double d2 = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) + 16.0 * at(i - 1) - at(i - 2)) * inv;
    res.f[j] = (-d2 + S.potential.f[j] * w[j] + S.k * S.k * w[j]) / grid.r(j);
  }
  return l2_norm(res);
}

RadialField project_continuous(const RadialField& f, const SpectralData& S) {
  const double c = inner_product(f, S.g) / S.gg;
  RadialField out = f;
  for (std::size_t j = 0; j < out.size(); ++j) out.f[j] -= c * S.g.f[j];
  return out;
}

Coordinates x_pm(const RadialField& u0, const RadialField& u1, const SpectralData& S) {
  const double a0 = inner_product(u0, S.g) / S.gg;
  const double a1 = inner_product(u1, S.g) / S.gg;
  const double s = 1.0 / std::sqrt(2.0 * S.k);
  return {s * (S.k * a0 + S.orientation * a1), s * (S.k * a0 - S.orientation * a1)};
}

double secular_constant(const SpectralData& S) {
  return 4.0 * std::numbers::pi / (S.pairing_VdaPhi * S.pairing_VdaPhi);
}

RadialField resonance_weight(const SpectralData& S) { return multiply(S.potential, S.resonance); }

RadialField secular_projector(const RadialField& f, const SpectralData& S) {
  const double c = -secular_constant(S) * inner_product(f, resonance_weight(S));
  return c * S.resonance;
}

}  // namespace solmanifold

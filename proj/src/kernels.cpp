#include "solmanifold/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace solmanifold::kernels {

namespace {

inline double interp(const double* tab, std::size_t n, double dr, double s, double beyond) {
  const double x = s / dr;
  if (x >= static_cast<double>(n - 1)) return beyond;
  const auto i = static_cast<std::size_t>(x);
  const double th = x - static_cast<double>(i);
  if (th == 0.0) return tab[i];
  return (1.0 - th) * tab[i] + th * tab[i + 1];
}

// Reduced field continued oddly through r = 0 and by zero past r = R.
inline double w_odd(const double* w, std::size_t n, double dr, double s) {
  if (s < 0.0) return -interp(w, n, dr, -s, 0.0);
  return interp(w, n, dr, s, s > static_cast<double>(n - 1) * dr ? 0.0 : w[n - 1]);
}

inline double sine_node(const double* Wc, const double* w, std::size_t n, double dr, double t,
                        std::size_t j) {
  const double r = static_cast<double>(j) * dr;
  if (j == 0) return w_odd(w, n, dr, t);
  const double end = Wc[n - 1];
  return (interp(Wc, n, dr, r + t, end) - interp(Wc, n, dr, std::abs(t - r), end)) / (2.0 * r);
}

inline double cosine_node(const double* w, std::size_t n, double dr, double t, std::size_t j) {
  if (j == 0) {
    return (w_odd(w, n, dr, t - 2.0 * dr) - 8.0 * w_odd(w, n, dr, t - dr) +
            8.0 * w_odd(w, n, dr, t + dr) - w_odd(w, n, dr, t + 2.0 * dr)) /
           (12.0 * dr);
  }
  const double r = static_cast<double>(j) * dr;
  return (w_odd(w, n, dr, r + t) + w_odd(w, n, dr, r - t)) / (2.0 * r);
}

}  // namespace

void second_difference(const double* w, double* out, std::size_t n, double inv_dr2, Exec exec) {
  const auto last = static_cast<long>(n) - 1;
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long j = 1; j < last; ++j) out[j] = (w[j + 1] - 2.0 * w[j] + w[j - 1]) * inv_dr2;
  } else {
    for (long j = 1; j < last; ++j) out[j] = (w[j + 1] - 2.0 * w[j] + w[j - 1]) * inv_dr2;
  }
  out[0] = 0.0;
  out[n - 1] = 0.0;
}

void linear_acceleration(const double* v, const double* V, const double* src, double* out,
                         std::size_t n, double inv_dr2, Exec exec) {
  const auto last = static_cast<long>(n) - 1;
  auto body = [&](long j) {
    double a = (v[j + 1] - 2.0 * v[j] + v[j - 1]) * inv_dr2 - V[j] * v[j];
    if (src) a += src[j];
    out[j] = a;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long j = 1; j < last; ++j) body(j);
  } else {
    for (long j = 1; j < last; ++j) body(j);
  }
  out[0] = 0.0;
  out[n - 1] = 0.0;
}

void nonlinear_acceleration(const double* v, const double* W, const double* inv_r4,
                            const double* src, double* out, std::size_t n, double inv_dr2,
                            Exec exec) {
  const auto last = static_cast<long>(n) - 1;
  auto body = [&](long j) {
    const double x = v[j];
    const double Wj = W[j];
    // (W+x)^5 - W^5 expanded so small x keeps full relative precision.
    const double W2 = Wj * Wj;
    const double poly =
        x * (5.0 * W2 * W2 + x * (10.0 * W2 * Wj + x * (10.0 * W2 + x * (5.0 * Wj + x))));
    double a = (v[j + 1] - 2.0 * x + v[j - 1]) * inv_dr2 + poly * inv_r4[j];
    if (src) a += src[j];
    out[j] = a;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long j = 1; j < last; ++j) body(j);
  } else {
    for (long j = 1; j < last; ++j) body(j);
  }
  out[0] = 0.0;
  out[n - 1] = 0.0;
}

void leapfrog_update(const double* prev, const double* cur, const double* acc, double* next,
                     std::size_t n, double dt2, Exec exec) {
  const auto last = static_cast<long>(n) - 1;
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long j = 1; j < last; ++j) next[j] = 2.0 * cur[j] - prev[j] + dt2 * acc[j];
  } else {
    for (long j = 1; j < last; ++j) next[j] = 2.0 * cur[j] - prev[j] + dt2 * acc[j];
  }
  next[0] = 0.0;
  next[n - 1] = 0.0;
}

void dalembert_sine(const double* Wc, const double* w, std::size_t n, double dr, double t,
                    double* out, std::size_t n_out, Exec exec) {
  const auto m = static_cast<long>(n_out);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long j = 0; j < m; ++j) out[j] = sine_node(Wc, w, n, dr, t, static_cast<std::size_t>(j));
  } else {
    for (long j = 0; j < m; ++j) out[j] = sine_node(Wc, w, n, dr, t, static_cast<std::size_t>(j));
  }
}

void dalembert_cosine(const double* w, std::size_t n, double dr, double t, double* out,
                      std::size_t n_out, Exec exec) {
  const auto m = static_cast<long>(n_out);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long j = 0; j < m; ++j) out[j] = cosine_node(w, n, dr, t, static_cast<std::size_t>(j));
  } else {
    for (long j = 0; j < m; ++j) out[j] = cosine_node(w, n, dr, t, static_cast<std::size_t>(j));
  }
}

void accumulate_time_norms(const double* u, std::size_t n, double wt, double* sup, double* l1,
                           double* l2, Exec exec) {
  const auto m = static_cast<long>(n);
  auto body = [&](long j) {
    const double a = std::abs(u[j]);
    sup[j] = std::max(sup[j], a);
    l1[j] += wt * a;
    l2[j] += wt * a * a;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long j = 0; j < m; ++j) body(j);
  } else {
    for (long j = 0; j < m; ++j) body(j);
  }
}

}  // namespace solmanifold::kernels

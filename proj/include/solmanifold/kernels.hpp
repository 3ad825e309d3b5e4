#pragma once

// Per-node loops shared by the propagators and the nonlinear solver. Every
// kernel has a serial reference path and an OpenMP path computing the same
// per-element arithmetic, so the two agree bitwise.

#include <cstddef>

namespace solmanifold {

enum class Exec { serial, parallel };

namespace kernels {

/// out_j = (w_{j+1} - 2 w_j + w_{j-1}) inv_dr2 on interior nodes, 0 at the ends.
void second_difference(const double* w, double* out, std::size_t n, double inv_dr2, Exec exec);

/// out_j = D2 v_j - V_j v_j + src_j (src may be null).
void linear_acceleration(const double* v, const double* V, const double* src, double* out,
                         std::size_t n, double inv_dr2, Exec exec);

/// out_j = D2 v_j + ((W_j + v_j)^5 - W_j^5) inv_r4_j + src_j (src may be null).
void nonlinear_acceleration(const double* v, const double* W, const double* inv_r4,
                            const double* src, double* out, std::size_t n, double inv_dr2,
                            Exec exec);

/// next = 2 cur - prev + dt2 acc on interior nodes, 0 at the ends.
void leapfrog_update(const double* prev, const double* cur, const double* acc, double* next,
                     std::size_t n, double dt2, Exec exec);

/// Sine transport: out_j = (Wc(r_j + t) - Wc(|t - r_j|)) / (2 r_j), out_0 = w(t).
/// Wc is the cumulative integral of w on the grid (constant past the end),
/// w the reduced field (zero past the end, odd at 0). Linear interpolation.
void dalembert_sine(const double* Wc, const double* w, std::size_t n, double dr, double t,
                    double* out, std::size_t n_out, Exec exec);

/// Cosine transport: out_j = (w(r_j + t) + w(r_j - t)) / (2 r_j) with w odd,
/// out_0 = w'(t) by a fourth-order difference of the interpolant.
void dalembert_cosine(const double* w, std::size_t n, double dr, double t, double* out,
                      std::size_t n_out, Exec exec);

/// sup_j = max(sup_j, |u_j|), l1_j += wt |u_j|, l2_j += wt u_j^2.
void accumulate_time_norms(const double* u, std::size_t n, double wt, double* sup, double* l1,
                           double* l2, Exec exec);

}  // namespace kernels
}  // namespace solmanifold

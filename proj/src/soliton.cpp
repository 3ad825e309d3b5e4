#include "solmanifold/soliton.hpp"

#include <cmath>

#include "solmanifold/errors.hpp"

namespace solmanifold {

namespace {

const double kQuarticRoot3 = std::pow(3.0, 0.25);

void require_positive_scale(double a) {
  if (!(a > 0.0)) throw DomainError("soliton scale must be positive");
}

}  // namespace

double phi(double r, double a) {
  require_positive_scale(a);
  return kQuarticRoot3 * std::pow(a, 0.25) / std::sqrt(1.0 + a * r * r);
}

double dphi_da(double r, double a) {
  require_positive_scale(a);
  const double s = 1.0 + a * r * r;
  // 3^{1/4} a^{-3/4} s^{-3/2} (1 - a r^2) / 4
  return kQuarticRoot3 * std::pow(a, -0.75) * (1.0 - a * r * r) / (4.0 * s * std::sqrt(s));
}

double d2phi_da2(double r, double a) {
  require_positive_scale(a);
  const double r2 = r * r;
  const double s = 1.0 + a * r2;
  const double p = std::pow(a, -0.75);
  const double dp = -0.75 * std::pow(a, -1.75);
  const double q = (1.0 - a * r2) * std::pow(s, -1.5);
  const double dq = -r2 * std::pow(s, -1.5) - 1.5 * r2 * (1.0 - a * r2) * std::pow(s, -2.5);
  return 0.25 * kQuarticRoot3 * (dp * q + p * dq);
}

double potential(double r, double a) {
  const double p = phi(r, a);
  const double p2 = p * p;
  return -5.0 * p2 * p2;
}

double resonance_defect_profile(double r, double a) {
  if (!(a > 0.0) || a > 2.0) throw DomainError("defect profile needs a in (0, 2]");
  return dphi_da(r, a) - std::pow(a, -1.25) * dphi_da(r, 1.0);
}

}  // namespace solmanifold

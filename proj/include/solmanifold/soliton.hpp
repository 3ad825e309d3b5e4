#pragma once

namespace solmanifold {

/// phi(r, a) = (3a)^{1/4} (1 + a r^2)^{-1/2}. Throws DomainError for a <= 0.
double phi(double r, double a);

/// Scale derivative of phi; at a = 1 this is the zero resonance of -Delta + V.
double dphi_da(double r, double a);

/// Second scale derivative, used by Newton steps on the scale parameter.
double d2phi_da2(double r, double a);

/// V(r, a) = -5 phi(r, a)^4.
double potential(double r, double a);

/// dphi_da(r, a) - a^{-5/4} dphi_da(r, 1); accepts a in (0, 2].
double resonance_defect_profile(double r, double a);

inline constexpr double kModulationLow = 0.5;
inline constexpr double kModulationHigh = 1.5;

}  // namespace solmanifold

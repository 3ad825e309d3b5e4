#pragma once

#include <stdexcept>
#include <string>

namespace solmanifold {

/// Argument outside the mathematical domain of a formula (a <= 0, t < 0, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Caller misuse: grid mismatch, CFL or causality violation, missing history.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The discretisation cannot resolve the requested object.
struct DiscretizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time stepping produced non-finite values.
struct InstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Modulation parameter left (1/2, 3/2) or no root was found there.
struct ModulationWindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace solmanifold

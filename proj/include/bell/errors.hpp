#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bell {

/// Two objects that must share a scenario do not.
class ScenarioMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An object fails its own invariants (shape, normalization, positivity).
class InvalidObject : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or LP would exceed the configured size guard.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested quantity does not exist for this input (signaling behavior,
/// zero classical value in a ratio, ...).
class UndefinedQuantity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Size guards for exhaustive enumeration and vertex LPs.
struct Limits {
  std::uint64_t enumeration = 10'000'000;
  std::uint64_t lp_vertices = 100'000;

  /// Defaults, or both limits replaced by BELL_GUARD_LIMIT when it is set.
  /// Raising the guard can exhaust memory or take hours; it is not checked.
  static Limits from_env();
};

}  // namespace bell

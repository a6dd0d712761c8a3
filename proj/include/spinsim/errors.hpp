#pragma once

#include <stdexcept>
#include <string>

namespace spinsim {

// Configuration/parse problems; the CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated physics guards (step guard, detection band, drive ratios);
// exit code 3.
struct PhysicsGuardError : std::runtime_error {
  PhysicsGuardError(const std::string& guard, const std::string& msg)
      : std::runtime_error(guard + ": " + msg), guard_name(guard) {}
  std::string guard_name;
};

// Numerical failures (norm drift, failed convergence); exit code 4.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spinsim

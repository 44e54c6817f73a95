#pragma once

#include <stdexcept>
#include <string>

namespace pmlwave {

/// Invalid or inconsistent user-supplied configuration (bad grid, unknown
/// config key, CFL violation, ...). The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A non-finite or absurdly large value appeared in an updated field.
/// Carries the step index at which the blow-up was detected. The CLI maps
/// this to exit code 3.
class InstabilityError : public std::runtime_error {
public:
  InstabilityError(const std::string& msg, long step)
      : std::runtime_error(msg), step_(step) {}
  long step() const { return step_; }

private:
  long step_;
};

/// Field magnitude past which a run is aborted as unstable. Far above any
/// amplitude the discrete sources and initial states here can produce, far
/// below overflow, so geometric growth is caught within a few dozen steps.
inline constexpr double kBlowupLimit = 1e100;

} // namespace pmlwave

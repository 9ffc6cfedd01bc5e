#pragma once

#include <stdexcept>
#include <string>

namespace timsim {

/// Invalid parameter set or malformed configuration input.
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The time step is too large for the requested dynamics: a per-event
/// probability left [0,1], an explicit stability bound was violated, or a
/// growth factor went negative.  Rerun with a smaller tau.
/// The CLI maps this to exit code 3.
class StepSizeError : public std::runtime_error {
 public:
  explicit StepSizeError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure during integration (non-finite values or negativity
/// beyond round-off tolerance).  The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace timsim

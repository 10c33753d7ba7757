#pragma once

#include <stdexcept>
#include <string>

namespace tsr {

struct InvalidInput : std::invalid_argument {
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

struct ShapeError : std::invalid_argument {
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

struct NonStationaryError : std::runtime_error {
  explicit NonStationaryError(const std::string& what) : std::runtime_error(what) {}
};

struct HorizonExceededError : std::runtime_error {
  explicit HorizonExceededError(const std::string& what) : std::runtime_error(what) {}
};

// The l-infinity violation of the best residual achievable is carried so
// callers (e.g. a tuner skipping infeasible grid points) can report it.
struct InfeasibleError : std::runtime_error {
  double violation;
  InfeasibleError(const std::string& what, double v)
      : std::runtime_error(what), violation(v) {}
};

struct TuningFailedError : std::runtime_error {
  explicit TuningFailedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tsr

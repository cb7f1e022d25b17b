#pragma once

#include <stdexcept>
#include <string>

namespace chordsim {

// Inconsistent sizes between phase vectors, matrices or grids.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A precondition on inputs or configuration does not hold.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The numerical representation can no longer meet its accuracy contract
// (grid too small, back-flow leaving the grid, truncation leak, ...).
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An integrated trajectory produced a non-finite state.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chordsim

#pragma once

#include <stdexcept>

namespace qfs {

/// Invalid configuration or violated precondition. Maps to CLI exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: non-convergence, degenerate data. Maps to CLI exit status 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qfs

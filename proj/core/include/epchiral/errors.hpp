#pragma once

#include <stdexcept>

namespace epchiral {

// Config-file / CLI problems: maps to exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solver breakdowns (non-convergence, step underflow, ...): exit status 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace epchiral

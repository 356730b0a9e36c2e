#pragma once

#include <stdexcept>
#include <string>

namespace varexp {

// Bad user input: malformed config file, unknown key, invalid geometry.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver did not reach its tolerance.
struct SolverError : std::runtime_error {
  SolverError(const std::string& what, double residual_in)
      : std::runtime_error(what), residual(residual_in) {}
  double residual = 0.0;
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace varexp

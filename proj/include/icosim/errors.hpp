#pragma once

#include <stdexcept>
#include <string>

namespace icosim {

/// Thrown when an input violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a numerical search cannot produce a result (no bracket,
/// degenerate configuration, out-of-domain regime).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace icosim

#pragma once

#include <stdexcept>
#include <string>

namespace desens {

/// Invalid or inconsistent configuration (bad JSON, out-of-range parameters,
/// infeasible protocol). CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: rank-deficient fit, model mismatch, singular
/// reconstruction system, degenerate sine fit. CLI maps this to exit code 3,
/// together with std::domain_error raised by model preconditions.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem / stream failure. CLI maps this to exit code 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace desens

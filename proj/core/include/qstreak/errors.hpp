#pragma once

#include <stdexcept>
#include <string>

namespace qstreak {

// Bad input or configuration, detected before any heavy compute. CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Failure during numerics (non-convergence, NaN, invalid run). CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qstreak

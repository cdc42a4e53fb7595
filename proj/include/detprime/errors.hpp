#pragma once

#include <stdexcept>
#include <string>

namespace detprime {

// Thrown when a quadrature or spectral routine cannot reach its accuracy
// target. Carries a human-readable diagnostic (parameters, error estimate).
class NumericFailure : public std::runtime_error {
  public:
    explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by fitting routines when fewer usable data points exist than the
// model requires.
class InsufficientData : public std::runtime_error {
  public:
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace detprime

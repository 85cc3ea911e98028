#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lift {

/// A value left the domain of the operation applied to it: log or sqrt of a
/// nonpositive number, division by zero, a metric that is not positive definite.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions, roles or shapes between arguments.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace lift

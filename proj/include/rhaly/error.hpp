#pragma once

#include <stdexcept>
#include <string>

namespace rhaly {

/// Precondition or input-validation failure.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the decreasing-sequence shortcut when |eta_n| is not non-increasing.
class NonMonotoneError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A computation produced NaN or otherwise could not be carried out.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rhaly

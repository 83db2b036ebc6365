#pragma once

#include <stdexcept>

namespace vnag {

/// Raised when an integration or root search produces a nonfinite value or
/// otherwise cannot deliver the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vnag

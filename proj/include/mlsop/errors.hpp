#pragma once

#include <stdexcept>
#include <string>

namespace mlsop {

/// Base class for all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent caller input (dimension mismatch, bad weights, ...).
struct invalid_input : error {
  using error::error;
};

/// File or stream failure.
struct io_error : error {
  using error::error;
};

/// Numerical breakdown (e.g. a non-positive pivot in a factorization).
struct numerical_error : error {
  numerical_error(const std::string& msg, int index_) : error(msg), index(index_) {}
  int index;
};

}  // namespace mlsop

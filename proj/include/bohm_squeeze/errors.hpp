#pragma once

#include <stdexcept>
#include <string>

namespace bohm_squeeze {

/// Raised when a requested quantity cannot be computed to the demanded
/// precision (e.g. a Schmidt spectrum truncated too early).
class precision_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an iterative or scaling procedure fails to converge.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File-system failure; the message carries the offending path.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bohm_squeeze

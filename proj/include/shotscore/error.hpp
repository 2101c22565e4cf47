#pragma once

#include <stdexcept>
#include <string>

namespace shotscore {

// Error taxonomy, one branch per CLI exit code:
//   ConfigError     -> 2   bad option / config-file value
//   ValidationError -> 3   inputs that fail a contract (shapes, manifests, ...)
//   NumericError    -> 4   divergence, non-finite values
//   IoError         -> 5   unreadable/unwritable or corrupt files
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor/layer dimension mismatch.
struct ShapeError : ValidationError {
  using ValidationError::ValidationError;
};

// Operation called out of order (e.g. backward before forward).
struct StateError : ValidationError {
  using ValidationError::ValidationError;
};

// Checkpoint content does not fit the network it is loaded into.
struct CheckpointError : ValidationError {
  using ValidationError::ValidationError;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed binary file (bad magic, unsupported version/dtype, truncation).
struct FormatError : IoError {
  using IoError::IoError;
};

}  // namespace shotscore

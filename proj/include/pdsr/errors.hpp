#pragma once

#include <stdexcept>

namespace pdsr {

// I/O and configuration problems: missing files, malformed documents,
// unknown config keys. CLI maps these to exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Semantically invalid requests against well-formed inputs: infeasible
// scenario specs, single-class training data, untrained models.
// CLI maps these to exit code 3.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pdsr

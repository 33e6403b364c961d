#pragma once

#include <stdexcept>
#include <string>

namespace cooc {

/// Bad flags, missing paths, invalid config values. CLI exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that parse but cannot be processed (hash mismatch, missing
/// predictions, malformed dataset files). CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A broken internal invariant. CLI exit code 3.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cooc

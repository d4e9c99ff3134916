#pragma once

#include <stdexcept>
#include <string>

namespace sparkle {

// Malformed input, broken invariant, or a failed precondition.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem and codec failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model worker could not produce a usable response (transport, timeout,
// scripted error, or a response that violates the role contract).
class WorkerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparkle

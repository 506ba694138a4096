#pragma once

#include <stdexcept>
#include <string>

namespace pbh {

/// Raised when extract_min or find_min is called on a heap with no live elements.
struct EmptyHeapError : std::runtime_error {
  explicit EmptyHeapError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a caller violates an operation precondition (bad arguments,
/// malformed batch, illegal trace).
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when an internal invariant fails. Indicates a bug in the structure
/// or a schedule that handed out conflicting level ownership.
struct InvariantError : std::logic_error {
  explicit InvariantError(const std::string& msg) : std::logic_error(msg) {}
};

/// Raised while replaying an operation stream; carries the offending index.
struct TraceError : std::runtime_error {
  TraceError(std::size_t index, const std::string& msg)
      : std::runtime_error("op " + std::to_string(index) + ": " + msg), op_index(index) {}
  std::size_t op_index;
};

}  // namespace pbh

#pragma once

#include <stdexcept>
#include <string>

namespace arborrep {

/// Thrown when a computation would exceed a configured size cap.
class CapExceeded : public std::runtime_error {
public:
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an operation requires a transitive action and the action is not.
class IntransitiveAction : public std::runtime_error {
public:
  explicit IntransitiveAction(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace arborrep

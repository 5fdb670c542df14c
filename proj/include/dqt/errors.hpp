#pragma once

#include <stdexcept>
#include <string>

namespace dqt {

// Invalid mathematical input (maps to CLI exit code 2).
struct domain_error : std::invalid_argument {
  explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A documented operation precondition was violated.
struct precondition_error : domain_error {
  explicit precondition_error(const std::string& msg) : domain_error(msg) {}
};

// Case the operation deliberately does not cover; callers report it
// instead of silently skipping.
struct unsupported_error : domain_error {
  explicit unsupported_error(const std::string& msg) : domain_error(msg) {}
};

// Memory/time budget exceeded (maps to CLI exit code 3).
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal invariant failed; indicates an arithmetic bug, never user error.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace dqt

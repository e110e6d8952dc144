#pragma once

#include <stdexcept>
#include <string>

namespace mstree {

/// Malformed configuration document or argument.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model or request that violates a hypothesis: invalid parameters,
/// a progression the requested result does not cover, an unknown address.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request that exceeds a configured resource guardrail.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mstree

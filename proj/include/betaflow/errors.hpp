#pragma once

#include <stdexcept>
#include <string>

namespace betaflow {

/// Invalid physical or structural input (non-positive density, bad layer
/// ordering, malformed ranges, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// The characteristic system degenerates when lambda2 + 2*omega = 0; every
/// operation that would divide by that quantity throws this instead.
class DegenerateSystemError : public std::runtime_error {
 public:
  explicit DegenerateSystemError(const std::string& what) : std::runtime_error(what) {}
};

/// Characteristic-curve integration failure; the message carries the last
/// good parameter value reached.
class IntegrationError : public std::runtime_error {
 public:
  explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

/// Config-file parse or semantic error; the message carries file, line and key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace betaflow

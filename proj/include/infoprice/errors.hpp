#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace infoprice {

/// A parameter or argument lies outside its admissible domain.
class DomainError : public std::invalid_argument {
 public:
  DomainError(std::string field, const std::string& reason)
      : std::invalid_argument(field + ": " + reason), field_(std::move(field)) {}

  /// Name of the offending field or argument.
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A sampled path does not match the grid it is supposed to live on.
class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A rate schedule is malformed or does not cover the requested interval.
class ScheduleDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A root bracket or iterative search failed.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or invalid run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace infoprice

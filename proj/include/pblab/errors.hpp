#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pblab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (s < t, t > T, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A model or experiment was configured inconsistently.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(message), field_(std::move(field)) {}

  /// Name of the offending field; empty when the error is not tied to one.
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Quadrature failed to converge, or a computation produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The inputs fall in a regime the model does not cover (e.g. a discount
/// function whose zeta is not non-increasing, or a family without closed forms).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace pblab

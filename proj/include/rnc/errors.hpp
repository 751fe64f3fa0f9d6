#pragma once

#include <stdexcept>
#include <string>

namespace rnc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or schema-violating configuration, including invalid matrices
/// and generator parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A matrix failed stochastic validation.
class ValidationError : public ConfigError {
 public:
  enum class Kind { dimension_mismatch, negative_entry, row_sum, non_finite };

  ValidationError(Kind kind, const std::string& what) : ConfigError(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// An operation was called with arguments that violate its precondition
/// (dimension mismatch, invalid horizon, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerics did not converge or an internal consistency check
/// on a computed quantity failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rnc

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace actlogic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constraint config, flag set, or other user-supplied configuration is malformed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Closure derived both values for some label.
class Inconsistency : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class PoolExhausted : public Error {
 public:
  using Error::Error;
};

class InvalidMarginals : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteGradient : public Error {
 public:
  using Error::Error;
};

/// Ground-truth labels violate a declared constraint.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

/// Every label was skipped during AUC evaluation.
class Degenerate : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  /// 1-based line number, or 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyFile : public ParseError {
 public:
  explicit EmptyFile(const std::string& path) : ParseError("empty file: " + path, 0) {}
};

}  // namespace actlogic

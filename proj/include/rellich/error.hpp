#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rellich {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DSL text. `offset()` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnboundParameterError : public Error {
 public:
  explicit UnboundParameterError(const std::string& name)
      : Error("unbound parameter '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// A primitive was evaluated outside its domain (log of a non-positive
/// number, division by zero, non-finite result, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& primitive, double value)
      : Error("domain violation in " + primitive + " (argument " + format(value) + ")"),
        primitive_(primitive),
        value_(value) {}
  const std::string& primitive() const noexcept { return primitive_; }
  double value() const noexcept { return value_; }

 private:
  static std::string format(double v);
  std::string primitive_;
  double value_;
};

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to converge or underflowed its step size.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace rellich

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace symphonic {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad argument to an operation (negative step, dimension mismatch, m < 2, ...).
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// A point fell outside a declared coordinate domain.
class EvaluationError : public Error {
public:
  EvaluationError(const std::string& what, std::ptrdiff_t coordinate = -1)
      : Error(what), coordinate_(coordinate) {}

  /// Index of the offending coordinate, or -1 when not tied to one.
  std::ptrdiff_t coordinate() const noexcept { return coordinate_; }

private:
  std::ptrdiff_t coordinate_;
};

/// A value, derivative or intermediate became NaN or infinite.
class NonFiniteError : public Error {
public:
  using Error::Error;
};

/// Expression evaluation left the domain of an elementary function
/// (log of a non-positive number, division by zero, ...).
class DomainError : public NonFiniteError {
public:
  DomainError(const std::string& what, std::string node, std::size_t offset)
      : NonFiniteError(what), node_(std::move(node)), offset_(offset) {}

  const std::string& node() const noexcept { return node_; }
  std::size_t offset() const noexcept { return offset_; }

private:
  std::string node_;
  std::size_t offset_;
};

/// Metric failed the positive-definiteness check.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Weight of a weighted divergence vanished where its exponent is negative.
class SingularWeightError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset,
             std::vector<std::string> expected = {})
      : Error(what), offset_(offset), expected_(std::move(expected)) {}

  /// Byte offset into the source text.
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace symphonic

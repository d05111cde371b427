#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace asympair {

using Index = std::int64_t;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DSL text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// An evaluation left the domain of an operation (division by zero, ln of a
/// nonpositive value, non-finite result, index beyond a table).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, Index index = 0)
      : Error(index > 0 ? what + " at index " + std::to_string(index) : what), index_(index) {}

  /// Sequence index where the violation happened, 0 when not index-related.
  Index index() const noexcept { return index_; }

 private:
  Index index_;
};

/// Exact integer arithmetic would have wrapped.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// The operation refuses to run: an input does not satisfy its contract
/// (for example a tail model that admits no certified bound).
class RefusedError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure stopped without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace asympair

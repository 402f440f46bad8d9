#pragma once

#include <stdexcept>
#include <string>

namespace qcsp {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched signatures, unknown relation symbols, arity clashes.
class SignatureError : public Error {
 public:
  using Error::Error;
};

// Malformed sentence or structure text. Line and column are 1-based; 0 means
// the position is unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line = 0, int column = 0)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& message, int line, int column) {
    if (line <= 0) return message;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  int line_;
  int column_;
};

// A configured size cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// An operation was called on inputs outside its domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcsp

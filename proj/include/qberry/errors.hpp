#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qberry {

// Base of every error the library raises. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed something the operation's precondition forbids.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// A parameter lies outside its admissible interval (e.g. theta outside [0, pi]).
class RangeError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

// Consecutive states along a loop are (numerically) orthogonal.
class DegeneratePathError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownSymbolError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Evaluating a circuit whose free symbols were not all bound.
class UnboundSymbolError : public Error {
 public:
  using Error::Error;
};

}  // namespace qberry

#pragma once

#include <stdexcept>
#include <string>

namespace spek {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Codomain of the first relation differs from the domain of the second.
class TypeMismatch : public Error {
 public:
  using Error::Error;
};

// An object or intermediate tensor exceeds the configured cell ceiling.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

// A generator was requested outside the theory that owns it (e.g. bot in Spek).
class TheoryViolation : public Error {
 public:
  using Error::Error;
};

// A generator has no {1,2}/{3,4} components (unphased permutation, bot).
class NotParallel : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace spek

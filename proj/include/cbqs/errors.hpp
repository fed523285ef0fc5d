#pragma once

#include <stdexcept>
#include <string>

namespace cbqs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed instance/config/CSV text. Carries the 1-based line number (0 when
// the problem is not tied to a single line).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class InfeasibleGeneration : public Error {
 public:
  using Error::Error;
};

class UnsatisfiableConstraint : public Error {
 public:
  using Error::Error;
};

class ExactLimitExceeded : public Error {
 public:
  using Error::Error;
};

class NoFeasibleStart : public Error {
 public:
  using Error::Error;
};

class NoFeasibleSolution : public Error {
 public:
  using Error::Error;
};

}  // namespace cbqs

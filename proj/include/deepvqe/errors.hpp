#pragma once

#include <stdexcept>
#include <string>

namespace deepvqe {

/// Input that violates a documented precondition (bad geometry, malformed
/// file, inconsistent configuration). The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to deliver its postcondition (SCF or Lanczos
/// non-convergence, near-linear dependence). The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure that carries the offending line number.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : ValidationError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace deepvqe

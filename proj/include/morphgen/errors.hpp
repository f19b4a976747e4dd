#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morphgen {

// Bad arguments, configuration, or input files. The CLI maps this family
// to exit code 1; everything else derived from std::exception maps to 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : ValidationError(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class InputError : public ValidationError {
 public:
  InputError(const std::string& what, std::size_t byte_offset)
      : ValidationError(what + " (byte " + std::to_string(byte_offset) + ")"),
        offset_(byte_offset) {}
  std::size_t byte_offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Lexicon synthesis could not produce the requested inventory.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejection sampling exhausted its attempt budget.
class InfeasibleConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration or grid size exceeds the configured budget.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace morphgen

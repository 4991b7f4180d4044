#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairrank {

/// Tensor or matrix dimensions disagree with the declared problem shape.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value lies outside the domain of the operation (log of zero, non-positive impact, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed numeric input such as a non-finite cost.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver state is missing data required by the requested operation.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The outer optimization could not proceed (e.g. too many inner solves failed).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A text input could not be parsed; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An index read from input is outside the declared dimensions.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Invalid experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fairrank

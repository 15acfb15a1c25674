#pragma once

#include <stdexcept>
#include <string>

namespace mcmt {

// Caller violated a documented precondition (bad argument, bad flag).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configuration is well-formed text but semantically invalid.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file could not be parsed. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Inputs parse individually but disagree with each other.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A metric that is undefined for the given inputs (e.g. MOTA with no ground truth).
class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace mcmt

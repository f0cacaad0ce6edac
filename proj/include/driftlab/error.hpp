#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace driftlab {

// Invalid configuration values. `field` names the offending config entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Malformed input text (DIMACS, graph files, sample CSVs). Line numbers are 1-based.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by estimators that need at least one observation.
class EmptySampleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bound kind that has no closed form for the requested quantity.
class UnsupportedKindError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace driftlab

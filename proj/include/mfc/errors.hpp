#pragma once

#include <stdexcept>
#include <string>

namespace mfc {

// Bad call arguments: out-of-range indices, non-positive counts, empty inputs.
class ArgumentError : public std::runtime_error {
 public:
  explicit ArgumentError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric-domain violations on otherwise well-formed data, e.g. a vector
// that is not a probability distribution within tolerance.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// The environment does not support the requested operation (e.g. asking for
// an enumerable global-transition law from a kernel that has none).
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

// A configured resource cap would be exceeded (path enumeration budgets).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN/Inf encountered where a finite value is required.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A closed-form result was requested outside its region of validity.
class ValidityError : public std::runtime_error {
 public:
  explicit ValidityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or out-of-range experiment configuration; carries the offending
// field path so the CLI can name it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : std::runtime_error("config field '" + field + "': " + msg),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace mfc

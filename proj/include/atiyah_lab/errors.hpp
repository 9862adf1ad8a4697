#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace alab {

/// Malformed or inconsistent caller input. Maps to CLI exit code 1.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Text that does not parse; `position` is a 0-based character offset.
class SyntaxError : public InputError {
public:
  SyntaxError(std::size_t position, const std::string& what)
      : InputError("syntax error at position " + std::to_string(position) + ": " + what),
        position_(position),
        detail_(what) {}

  std::size_t position() const { return position_; }
  const std::string& detail() const { return detail_; }

private:
  std::size_t position_;
  std::string detail_;
};

/// A document field with the wrong shape or an invalid value.
class SchemaError : public InputError {
public:
  SchemaError(std::string field, const std::string& what)
      : InputError("schema error in field '" + field + "': " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

private:
  std::string field_;
};

/// An operation was called on data that violates its stated precondition.
class PreconditionError : public InputError {
public:
  using InputError::InputError;
};

/// A mathematical identity that must hold by construction was violated.
/// Always indicates a bug; maps to CLI exit code 4.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace alab

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace locsketch {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed serialized data or sequence text. `field()` names the offending
// header field (or "sequence" for text input) and `offset()` the byte offset
// where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(std::string field, std::size_t offset, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)), offset_(offset) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string field_;
  std::size_t offset_;
};

// Two sketches cannot be compared because their headers differ.
class IncompatibleSketch : public Error {
 public:
  explicit IncompatibleSketch(std::string field)
      : Error("incompatible sketches: mismatched " + field), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace locsketch

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace neurohome {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (empty window, bad rate, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A value lies outside its permitted interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Two stimulus frequencies are closer than the minimum spacing.
class SpacingError : public Error {
 public:
  using Error::Error;
};

// Unknown room, class or device.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `offset` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& detail, std::size_t offset)
      : Error(detail + " (at byte " + std::to_string(offset) + ")"), detail_(detail), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

  // Same error with `prefix` (typically a file name) prepended.
  ParseError within(const std::string& prefix) const { return {prefix + ": " + detail_, offset_}; }

 private:
  std::string detail_;
  std::size_t offset_;
};

}  // namespace neurohome

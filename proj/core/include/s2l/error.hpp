#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace s2l {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input. `offset` is the byte position of the problem when the
// parser can tell.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::optional<std::size_t> offset = std::nullopt)
      : Error(offset ? what + " (at byte " + std::to_string(*offset) + ")" : what), offset_(offset) {}

  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  std::optional<std::size_t> offset_;
};

// Well-formed input that breaks a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace s2l

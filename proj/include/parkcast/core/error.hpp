#pragma once

#include <stdexcept>
#include <string>

namespace parkcast::core {

/// Base error for everything the toolchain can report to a user.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input-file problem carrying file/line context in its message.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Domain invariant violated by otherwise well-formed input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace parkcast::core

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bpro {

// Base of every error thrown by the library. The CLI maps each subclass to a
// distinct exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value lies outside the domain of an operation (e.g. a size outside (0,1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed textual input. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A configured size/state/enumeration cap was exceeded.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t cap) : Error(what), cap_(cap) {}

  [[nodiscard]] std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid command-line usage (bad flag values, missing required inputs).
class UsageError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed; indicates a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace bpro

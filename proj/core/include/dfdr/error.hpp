#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dfdr {

// Base of every error raised by the library. category() is a stable,
// machine-parsable token that the CLI prints and maps to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view category() const noexcept = 0;
};

// Arguments outside an operation's domain (negative counts, lambda >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  std::string_view category() const noexcept override { return "domain"; }
};

// Malformed delimited input. line() is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }
  std::string_view category() const noexcept override { return "parse"; }

 private:
  std::size_t line_;
};

// Invalid scenario or grid configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
  std::string_view category() const noexcept override { return "config"; }
};

// File-system and stream failures.
class IoError : public Error {
 public:
  using Error::Error;
  std::string_view category() const noexcept override { return "io"; }
};

}  // namespace dfdr

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsa {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DegenerateFaceError : public Error {
 public:
  DegenerateFaceError() : Error("degenerate face (area below 1e-12 m^2)") {}
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class NoFloorFoundError : public Error {
 public:
  NoFloorFoundError() : Error("no-floor-found: no near-horizontal faces survive the filters") {}
};

class InvalidEndpointError : public Error {
 public:
  using Error::Error;
};

class InputMismatchError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when a scene description breaks one or more rules; every violation is kept.
class SpecValidationError : public Error {
 public:
  explicit SpecValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid scene spec:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace wsa

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qpc {

enum class ErrorKind {
  ZeroOnContour,
  NotRepresentable,
  IdenticallyZero,
  NoTorusZeros,
  NotMonic,
  InsufficientDepth,
  DegenerateBeta,
  NotRealValued,
  ZeroC,
  ExactSingularHit,
  IdenticallyZeroDet,
  IrrationalFrequency,
  InsufficientQ,
  Overflow,
  NonConvergence,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Numerical failures raised by the library. The CLI maps these to exit 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Malformed configuration; `key` names the offending entry. Exit 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace qpc

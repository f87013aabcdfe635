#pragma once

#include <stdexcept>
#include <string>

namespace ff {

// Error categories surfaced by the CLI as exit codes 2, 3 and 4.
enum class ErrorKind { Input, Precondition, Precision };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Short machine-readable identifier, e.g. "shape_mismatch".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class InputError : public Error {
 public:
  InputError(std::string code, const std::string& what)
      : Error(ErrorKind::Input, std::move(code), what) {}
};

class PreconditionError : public Error {
 public:
  PreconditionError(std::string code, const std::string& what)
      : Error(ErrorKind::Precondition, std::move(code), what) {}
};

class PrecisionError : public Error {
 public:
  PrecisionError(std::string code, const std::string& what)
      : Error(ErrorKind::Precision, std::move(code), what) {}
};

}  // namespace ff

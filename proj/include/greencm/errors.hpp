#pragma once

#include <stdexcept>
#include <string>

namespace greencm {

// Machine-readable error categories. The CLI maps them to exit codes and to
// the "error.kind" field of its JSON error object.
enum class ErrorKind {
  domain,        // input outside the mathematical domain of an operation
  singularity,   // evaluation point lies on a singular divisor
  unavailable,   // requested object does not exist (e.g. obstructed form)
  precision,     // working precision too low for the requested task
  truncation,    // q-expansion order too small for the requested evaluation
  unsupported,   // case outside the implemented scope
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what)
      : Error(ErrorKind::singularity, what) {}
};

class UnavailableError : public Error {
 public:
  explicit UnavailableError(const std::string& what)
      : Error(ErrorKind::unavailable, what) {}
};

class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what) : Error(ErrorKind::precision, what) {}
};

// Carries the minimal truncation order that would have been sufficient.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, long required_order)
      : Error(ErrorKind::truncation, what), required_order_(required_order) {}
  long required_order() const noexcept { return required_order_; }

 private:
  long required_order_;
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what)
      : Error(ErrorKind::unsupported, what) {}
};

}  // namespace greencm

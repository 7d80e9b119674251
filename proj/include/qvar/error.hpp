#pragma once

#include <stdexcept>
#include <string>

namespace qvar {

enum class ErrorKind {
  domain,
  pole,
  overflow,
  truncation,
  convergence,
  cost_guard,
  missing_data,
  eigenvalue_collision,
  symmetry,
  no_stationary_point,
  multiple_stationary_points,
  derivative_floor,
  io,
  usage,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::pole: return "pole";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::cost_guard: return "cost-guard";
    case ErrorKind::missing_data: return "missing-data";
    case ErrorKind::eigenvalue_collision: return "eigenvalue-collision";
    case ErrorKind::symmetry: return "symmetry";
    case ErrorKind::no_stationary_point: return "no-stationary-point";
    case ErrorKind::multiple_stationary_points: return "multiple-stationary-points";
    case ErrorKind::derivative_floor: return "derivative-floor";
    case ErrorKind::io: return "io";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) raise(kind, what);
}

}  // namespace qvar

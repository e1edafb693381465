#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace droplet {

enum class ErrorKind {
  InvalidInput,
  NotStarShaped,
  DegenerateMesh,
  ConvergenceFailure,
  NumericalFailure,
  NotConvex,
  InvalidTimestep,
  MeanConvexityLost,
  Infeasible,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind tag is
/// what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotStarShaped: return "NotStarShaped";
    case ErrorKind::DegenerateMesh: return "DegenerateMesh";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::InvalidTimestep: return "InvalidTimestep";
    case ErrorKind::MeanConvexityLost: return "MeanConvexityLost";
    case ErrorKind::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace droplet

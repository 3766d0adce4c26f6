#pragma once

#include <stdexcept>
#include <string>

namespace hjnet {

enum class ErrorKind {
  InvalidInput,
  DegenerateGeometry,
  OutOfRange,
  InconsistentOrientation,
  StepTooLarge,
  MissingDirichletValue,
  NonPositiveCost,
  NotConverged,
  PathStalled,
  MaxStepsExceeded,
  ZeroError,
  InvalidSteps,
  PointOffNetwork,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InconsistentOrientation: return "InconsistentOrientation";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::MissingDirichletValue: return "MissingDirichletValue";
    case ErrorKind::NonPositiveCost: return "NonPositiveCost";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::PathStalled: return "PathStalled";
    case ErrorKind::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorKind::ZeroError: return "ZeroError";
    case ErrorKind::InvalidSteps: return "InvalidSteps";
    case ErrorKind::PointOffNetwork: return "PointOffNetwork";
  }
  return "Unknown";
}

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hjnet

#pragma once

#include <stdexcept>
#include <string>

namespace fairsc {

/// Failure categories. The CLI maps each category to a distinct exit code.
enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  NotPositiveDefinite,
  IsolatedVertex,
  EmptyGroup,
  RankDeficientConstraint,
  ConvergenceFailure,
  ShiftTooSmall,
  TooLargeForDense,
  InvalidK,
  FairBlockViolation,
  IndivisibleSize,
  Parse,
  Io,
};

inline const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  case ErrorKind::DimensionMismatch: return "DimensionMismatch";
  case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
  case ErrorKind::IsolatedVertex: return "IsolatedVertex";
  case ErrorKind::EmptyGroup: return "EmptyGroup";
  case ErrorKind::RankDeficientConstraint: return "RankDeficientConstraint";
  case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
  case ErrorKind::ShiftTooSmall: return "ShiftTooSmall";
  case ErrorKind::TooLargeForDense: return "TooLargeForDense";
  case ErrorKind::InvalidK: return "InvalidK";
  case ErrorKind::FairBlockViolation: return "FairBlockViolation";
  case ErrorKind::IndivisibleSize: return "IndivisibleSize";
  case ErrorKind::Parse: return "Parse";
  case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string &msg) {
  if (!cond)
    throw Error(kind, msg);
}

} // namespace fairsc

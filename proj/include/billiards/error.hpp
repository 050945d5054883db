#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace billiards {

enum class ErrorKind {
  InvalidCurve,
  InvalidArgument,
  DegenerateChord,
  TangentRay,
  NoIntersection,
  MissesTable,
  OutOfRange,
  NotBracketed,
  NoConvergence,
  ClosureFailure,
  OrderViolation,
  NotClosed,
  NearSingular,
  WrongPeriod,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace billiards

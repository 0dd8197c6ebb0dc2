#pragma once

#include <stdexcept>
#include <string>

namespace harmlab {

enum class ErrorKind {
  InvalidArgument,
  InvalidGraph,
  NonRegularGraph,
  InvalidExponent,
  UnsupportedGroup,
  BallTooLarge,
  PathExitsBall,
  GraphTooLargeForExact,
  EigensolveFailure,
  NonConvergence,
  SupportHitsBoundary,
  SingularSystem,
  NegativeMass,
  MaxNormTooLarge,
  MassMismatch,
  Infeasible,
  DisconnectedRegion,
  NonZeroSum,
  EnumerationBudgetExceeded,
  DisconnectedSet,
  ComplementDisconnected,
  DenseBudgetExceeded,
  NotATree,
  NumericalFailure,
  InvalidConfig,
  IoError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace harmlab

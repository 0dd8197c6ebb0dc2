#include "harmlab/error.hpp"

namespace harmlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::NonRegularGraph: return "NonRegularGraph";
    case ErrorKind::InvalidExponent: return "InvalidExponent";
    case ErrorKind::UnsupportedGroup: return "UnsupportedGroup";
    case ErrorKind::BallTooLarge: return "BallTooLarge";
    case ErrorKind::PathExitsBall: return "PathExitsBall";
    case ErrorKind::GraphTooLargeForExact: return "GraphTooLargeForExact";
    case ErrorKind::EigensolveFailure: return "EigensolveFailure";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::SupportHitsBoundary: return "SupportHitsBoundary";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::MaxNormTooLarge: return "MaxNormTooLarge";
    case ErrorKind::MassMismatch: return "MassMismatch";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::DisconnectedRegion: return "DisconnectedRegion";
    case ErrorKind::NonZeroSum: return "NonZeroSum";
    case ErrorKind::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorKind::DisconnectedSet: return "DisconnectedSet";
    case ErrorKind::ComplementDisconnected: return "ComplementDisconnected";
    case ErrorKind::DenseBudgetExceeded: return "DenseBudgetExceeded";
    case ErrorKind::NotATree: return "NotATree";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace harmlab

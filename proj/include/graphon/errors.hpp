#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphon {

enum class ErrorKind {
  AsymmetricValues,
  WeightsNotNormalized,
  ValueOutOfRange,
  PartitionMismatch,
  MarginalMismatch,
  ResolutionIncompatible,
  TooManyBlocksForExact,
  EmptySet,
  SolverFailure,
  NoInteriorValues,
  ScalingDiverged,
  DimensionMismatch,
  UnsupportedEps,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace graphon

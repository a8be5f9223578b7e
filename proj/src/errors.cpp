#include "graphon/errors.hpp"

namespace graphon {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AsymmetricValues: return "AsymmetricValues";
    case ErrorKind::WeightsNotNormalized: return "WeightsNotNormalized";
    case ErrorKind::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorKind::PartitionMismatch: return "PartitionMismatch";
    case ErrorKind::MarginalMismatch: return "MarginalMismatch";
    case ErrorKind::ResolutionIncompatible: return "ResolutionIncompatible";
    case ErrorKind::TooManyBlocksForExact: return "TooManyBlocksForExact";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::NoInteriorValues: return "NoInteriorValues";
    case ErrorKind::ScalingDiverged: return "ScalingDiverged";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnsupportedEps: return "UnsupportedEps";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace graphon

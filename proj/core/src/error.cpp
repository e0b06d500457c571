#include "vemsad/error.hpp"

namespace vemsad {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonSimplePolygon: return "NonSimplePolygon";
    case ErrorCode::InconsistentSharedEdge: return "InconsistentSharedEdge";
    case ErrorCode::UntaggedBoundaryEdge: return "UntaggedBoundaryEdge";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::NonConvexCell: return "NonConvexCell";
    case ErrorCode::EmptyMarking: return "EmptyMarking";
    case ErrorCode::CentroidOutsideKernel: return "CentroidOutsideKernel";
    case ErrorCode::OrderTooLow: return "OrderTooLow";
    case ErrorCode::SingularLocalSystem: return "SingularLocalSystem";
    case ErrorCode::CoefficientNotSPD: return "CoefficientNotSPD";
    case ErrorCode::CoefficientSingular: return "CoefficientSingular";
    case ErrorCode::DofMismatch: return "DofMismatch";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::PicardDiverged: return "PicardDiverged";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::MissingNeighbor: return "MissingNeighbor";
    case ErrorCode::MissingExactSolution: return "MissingExactSolution";
    case ErrorCode::ZeroError: return "ZeroError";
    case ErrorCode::NonPositiveQuantity: return "NonPositiveQuantity";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace vemsad

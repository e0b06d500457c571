#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vemsad {

enum class ErrorCode {
  InvalidArgument,
  // geometry
  NonSimplePolygon,
  InconsistentSharedEdge,
  UntaggedBoundaryEdge,
  UnsupportedFamily,
  NonConvexCell,
  EmptyMarking,
  CentroidOutsideKernel,
  // local spaces
  OrderTooLow,
  SingularLocalSystem,
  CoefficientNotSPD,
  CoefficientSingular,
  // global solve
  DofMismatch,
  SingularSystem,
  ResidualTooLarge,
  PicardDiverged,
  MaxIterations,
  // estimator / harness
  MissingNeighbor,
  MissingExactSolution,
  ZeroError,
  NonPositiveQuantity,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable code next to the message.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

}  // namespace vemsad

#pragma once

#include <array>
#include <string>
#include <vector>

#include "vemsad/config.hpp"

namespace vemsad {

/// Column layout of the per-level trace file.
inline constexpr const char* kTraceHeader = "level,dofs,err,theta,eff,rate_err,rate_theta,marked,picard_iters";
/// Column layout of the per-cell indicator files.
inline constexpr const char* kIndicatorHeader = "cell_id,Xi1sq,Xi2sq,eta1sq,eta2sq,Lam1sq,Lam2sq,S1sq,S2sq,ThetaEsq";

struct ExperimentResult {
  AdaptTrace trace;
  /// Paths written, in creation order.
  std::vector<std::string> files;
};

/// Initial mesh of an experiment.
PolyMesh initial_mesh(const ExperimentConfig& config, const ManufacturedProblem& problem);

/// Runs the adaptive or uniform loop and writes into config.output_dir:
/// trace.csv, indicators_<level>.csv (if enabled), and solution_<level>.vtk /
/// mesh_<level>.svg (if enabled). Files depend only on the config.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_trace_csv(const AdaptTrace& trace, std::ostream& out);
void write_indicator_csv(const std::vector<LocalIndicators>& locals, std::ostream& out);

struct SelfCheckReport {
  /// Largest relative residual of momentum, Herrmann pressure, flux law and
  /// mass balance over the sample points.
  std::array<double, 4> max_residual{};
  int samples = 0;
  double residual_tolerance = 0.0;
  std::size_t cells = 0;
  int dofs = 0;
  /// Largest rho for which the initial mesh meets the shape assumptions.
  double mesh_rho = 0.0;
  std::vector<std::string> warnings;
  [[nodiscard]] bool ok() const;
};

/// Checks the manufactured data of the configured problem at `samples`
/// seeded random interior points with central differences, and the shape
/// regularity of the initial mesh. Solves nothing.
SelfCheckReport self_check(const ExperimentConfig& config, int samples = 1000);

}  // namespace vemsad

#pragma once

#include <vector>

#include "vemsad/solver.hpp"

namespace vemsad {

struct EstimatorOptions {
  /// Use +p_h / lambda in the Herrmann residual instead of the sign implied
  /// by the weak form.
  bool printed_pressure_sign = false;
  /// Add interior tangential jumps of the flux-gradient proxy to Xi_2.
  bool tangential_jumps = false;
};

/// Squared local indicators of one cell.
struct LocalIndicators {
  int cell = -1;
  double xi1_sq = 0.0, xi2_sq = 0.0;
  double eta1_sq = 0.0, eta2_sq = 0.0;
  double lam1_sq = 0.0, lam2_sq = 0.0;
  double s1_sq = 0.0, s2_sq = 0.0;
  double theta1_sq = 0.0, theta2_sq = 0.0, theta_sq = 0.0;

  /// Fills theta1_sq, theta2_sq and theta_sq from the components.
  void combine(const ModelParameters& params);
};

/// Residual indicators of every cell; interior jumps use both neighbours.
std::vector<LocalIndicators> local_indicators(const SystemState& state, const ProblemData& data,
                                              const EstimatorOptions& options = {});

/// Weighted global sums:
///   Xi^2  = sum Xi1^2 / 2mu + M sum Xi2^2     eta^2 = sum eta1^2 / 2mu + M sum eta2^2
///   Lam^2 = 2mu sum Lam1^2 + M sum Lam2^2     S^2   = sum S1^2 + sum S2^2
/// and Theta^2 = sum Theta_E^2 = Xi^2 + eta^2 + Lam^2 + S^2.
struct GlobalEstimate {
  double theta_sq = 0.0;
  double xi_sq = 0.0, lambda_sq = 0.0, eta_sq = 0.0, s_sq = 0.0;
  [[nodiscard]] double theta() const;
};

GlobalEstimate global_estimate(const std::vector<LocalIndicators>& locals, const ModelParameters& params);

/// Squared parts of the weighted error between an exact solution and the
/// projected discrete one.
struct TrueError {
  double u_sq = 0.0;     // 2mu |eps(u - Pi u_h)|^2
  double p_sq = 0.0;     // (1/2mu + 1/lambda) |p - p_h|^2
  double zeta_sq = 0.0;  // int M^{-1}(exact) (zeta - Pi zeta_h) . (zeta - Pi zeta_h)
  double div_sq = 0.0;   // M |div zeta - div zeta_h|^2
  double phi_sq = 0.0;   // (1/M + theta) |phi - phi_h|^2
  [[nodiscard]] double value() const;
};

/// Throws MissingExactSolution when `problem` is null.
TrueError true_error(const SystemState& state, const ManufacturedProblem* problem);

/// Theta / error; throws ZeroError unless error > 0.
double effectivity(double theta, double error);

}  // namespace vemsad

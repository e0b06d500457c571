#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "vemsad/estimator.hpp"

namespace vemsad {

struct MarkingConfig {
  double delta = 0.5;
  void validate() const;
};

/// Smallest prefix of the cells sorted by decreasing Theta_E^2 (ties by cell
/// id) whose indicators add up to at least delta * sum Theta_E^2. Returns
/// cell ids in that order; empty for delta = 0.
std::vector<int> doerfler_mark(const std::vector<LocalIndicators>& locals, double delta);

struct MarkingCheck {
  bool bulk = false;     // delta * total <= marked sum
  bool minimal = false;  // dropping the smallest marked indicator breaks the bulk property
};

/// Independent check of a marked set against the bulk criterion.
MarkingCheck check_marking(const std::vector<LocalIndicators>& locals, const std::vector<int>& marked, double delta);

/// Experimental orders r_j = -d log(v_j / v_{j-1}) / log(N_j / N_{j-1});
/// entry 0 is NaN. Throws NonPositiveQuantity on non-positive input.
std::vector<double> convergence_rates(const std::vector<int>& dofs, const std::vector<double>& values, int d = 2);

enum class RefinementMode { Uniform, Adaptive };

struct LevelRecord {
  int level = 0;
  int dofs = 0;
  std::size_t cells = 0;
  double err = 0.0;
  double theta = 0.0;
  double eff = 0.0;
  double rate_err = std::numeric_limits<double>::quiet_NaN();
  double rate_theta = std::numeric_limits<double>::quiet_NaN();
  int marked = 0;
  int picard_iters = 0;
  std::vector<double> picard_increments;
  std::vector<Point2> marked_centroids;
  MarkingCheck marking_check;
  RefinementReport refinement;
};

struct AdaptTrace {
  std::vector<LevelRecord> levels;
};

/// Everything produced on one level, passed to the optional observer.
struct LevelView {
  const LevelRecord& record;
  const SystemState& state;
  const std::vector<LocalIndicators>& indicators;
  const std::vector<int>& marked;
};

struct AdaptConfig {
  Orders orders;
  RefinementMode mode = RefinementMode::Adaptive;
  int max_levels = 5;
  /// Stop once a level has at least this many DoFs (0: no budget).
  long dof_budget = 0;
  MarkingConfig marking;
  PicardConfig picard;
  EstimatorOptions estimator;
  std::function<void(const LevelView&)> observer;
};

/// SOLVE -> ESTIMATE -> MARK -> REFINE starting from `initial`. In uniform
/// mode every cell is marked.
AdaptTrace adapt_loop(const ManufacturedProblem& problem, const PolyMesh& initial, const AdaptConfig& config);

}  // namespace vemsad

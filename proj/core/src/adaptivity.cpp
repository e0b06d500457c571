#include "vemsad/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vemsad/error.hpp"

namespace vemsad {

void MarkingConfig::validate() const {
  if (!(delta >= 0.0 && delta <= 1.0)) raise(ErrorCode::InvalidArgument, "marking fraction must lie in [0, 1]");
}

std::vector<int> doerfler_mark(const std::vector<LocalIndicators>& locals, double delta) {
  MarkingConfig{delta}.validate();
  std::vector<int> order(locals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ta = locals[static_cast<std::size_t>(a)].theta_sq;
    const double tb = locals[static_cast<std::size_t>(b)].theta_sq;
    if (ta != tb) return ta > tb;
    return locals[static_cast<std::size_t>(a)].cell < locals[static_cast<std::size_t>(b)].cell;
  });
  double total = 0.0;
  for (const auto& l : locals) total += l.theta_sq;
  const double target = delta * total;
  std::vector<int> marked;
  if (delta == 0.0) return marked;
  double sum = 0.0;
  for (int i : order) {
    if (sum >= target && !marked.empty()) break;
    marked.push_back(locals[static_cast<std::size_t>(i)].cell);
    sum += locals[static_cast<std::size_t>(i)].theta_sq;
  }
  return marked;
}

MarkingCheck check_marking(const std::vector<LocalIndicators>& locals, const std::vector<int>& marked, double delta) {
  std::vector<double> by_cell;
  double total = 0.0;
  for (const auto& l : locals) {
    if (l.cell >= static_cast<int>(by_cell.size())) by_cell.resize(static_cast<std::size_t>(l.cell) + 1, 0.0);
    by_cell[static_cast<std::size_t>(l.cell)] = l.theta_sq;
    total += l.theta_sq;
  }
  double sum = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (int c : marked) {
    sum += by_cell[static_cast<std::size_t>(c)];
    smallest = std::min(smallest, by_cell[static_cast<std::size_t>(c)]);
  }
  MarkingCheck r;
  r.bulk = delta * total <= sum;
  r.minimal = marked.empty() ? delta == 0.0 : sum - smallest < delta * total;
  return r;
}

std::vector<double> convergence_rates(const std::vector<int>& dofs, const std::vector<double>& values, int d) {
  if (dofs.size() != values.size()) raise(ErrorCode::InvalidArgument, "rate input lengths differ");
  std::vector<double> r(values.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < values.size(); ++j)
    if (!(values[j] > 0.0) || dofs[j] <= 0) raise(ErrorCode::NonPositiveQuantity, "rates need positive values and DoFs");
  for (std::size_t j = 1; j < values.size(); ++j)
    r[j] = -d * std::log(values[j] / values[j - 1]) / std::log(static_cast<double>(dofs[j]) / dofs[j - 1]);
  return r;
}

AdaptTrace adapt_loop(const ManufacturedProblem& problem, const PolyMesh& initial, const AdaptConfig& config) {
  config.marking.validate();
  config.picard.validate();
  if (config.max_levels < 1) raise(ErrorCode::InvalidArgument, "max_levels must be >= 1");
  AdaptTrace trace;
  const ProblemData data = problem.data();
  auto mesh = std::make_shared<const PolyMesh>(initial);
  for (int level = 0; level < config.max_levels; ++level) {
    auto disc = std::make_shared<const Discretisation>(mesh, config.orders);
    const PicardResult sol = picard_solve(disc, data, config.picard);
    const auto locals = local_indicators(sol.state, data, config.estimator);
    const GlobalEstimate est = global_estimate(locals, problem.params());

    LevelRecord rec;
    rec.level = level;
    rec.dofs = disc->num_dofs();
    rec.cells = mesh->num_cells();
    rec.err = true_error(sol.state, &problem).value();
    rec.theta = est.theta();
    rec.eff = effectivity(rec.theta, rec.err);
    rec.picard_iters = sol.iterations();
    rec.picard_increments = sol.increments;
    if (!trace.levels.empty()) {
      const LevelRecord& prev = trace.levels.back();
      const auto re = convergence_rates({prev.dofs, rec.dofs}, {prev.err, rec.err});
      const auto rt = convergence_rates({prev.dofs, rec.dofs}, {prev.theta, rec.theta});
      rec.rate_err = re[1];
      rec.rate_theta = rt[1];
    }
    std::vector<int> marked;
    if (config.mode == RefinementMode::Adaptive) {
      marked = doerfler_mark(locals, config.marking.delta);
      rec.marking_check = check_marking(locals, marked, config.marking.delta);
    } else {
      marked.resize(mesh->num_cells());
      std::iota(marked.begin(), marked.end(), 0);
      rec.marking_check = {true, true};
    }
    rec.marked = static_cast<int>(marked.size());
    for (int c : marked) rec.marked_centroids.push_back(mesh->cells()[static_cast<std::size_t>(c)].centroid);

    const bool last = level + 1 == config.max_levels || (config.dof_budget > 0 && rec.dofs >= config.dof_budget);
    std::shared_ptr<const PolyMesh> next;
    if (!last) next = std::make_shared<const PolyMesh>(refine_cells(*mesh, marked, &rec.refinement));
    trace.levels.push_back(std::move(rec));
    if (config.observer) config.observer(LevelView{trace.levels.back(), sol.state, locals, marked});
    if (last) break;
    mesh = std::move(next);
  }
  return trace;
}

}  // namespace vemsad

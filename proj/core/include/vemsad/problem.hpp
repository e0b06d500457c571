#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <memory>
#include <string>

#include "vemsad/geometry.hpp"

namespace vemsad {

/// Physical parameters: Lame pair (mu, lambda), reaction weight theta and
/// the bound M on the mobility and its inverse.
struct ModelParameters {
  double mu = 1.0;
  double lambda = 1.0;
  double theta = 1e-3;
  double M = 12.0;

  /// Throws InvalidArgument unless lambda >= 1, mu > 0, M >= 1 and
  /// 0 <= theta <= 1 / M.
  void validate() const;
};

/// Everything the discrete solver needs: parameters, the two nonlinear
/// couplings and boundary/volume data.
struct ProblemData {
  ModelParameters params;
  /// Active stress modulation l(phi).
  std::function<double(double)> ell;
  /// Inverse mobility M^{-1}(eps, p); `x` is only used in diagnostics.
  std::function<Eigen::Matrix2d(const Eigen::Matrix2d& eps, double p, Point2 x)> inverse_mobility;
  /// True when inverse_mobility ignores its arguments and ell vanishes, so the
  /// two blocks decouple.
  bool frozen = false;

  std::function<Point2(Point2)> body_force;                 // f
  std::function<double(Point2)> source;                     // g
  std::function<Point2(Point2)> displacement_bc;            // u on Gamma_D
  std::function<Point2(Point2, Point2)> traction_bc;        // sigma n on Gamma_N, given x and n
  std::function<double(Point2)> concentration_bc;           // phi on Gamma_D
  std::function<Point2(Point2)> concentration_bc_gradient;  // grad phi_D, used by the estimator
  std::function<double(Point2, Point2)> normal_flux_bc;     // zeta . n on Gamma_N
};

/// Exact fields of a manufactured solution at one point.
struct ExactValues {
  Point2 u;
  Eigen::Matrix2d grad_u;  // rows: components, columns: d/dx, d/dy
  double p = 0.0;
  Point2 grad_p;
  Eigen::Matrix2d sigma;
  Point2 zeta;
  double div_zeta = 0.0;
  double phi = 0.0;
  Point2 grad_phi;
  Point2 f;
  double g = 0.0;
  Eigen::Matrix2d mobility;  // M(eps(u), p) at the exact fields
};

/// A manufactured solution: exact u and phi with all derived data.
class ManufacturedProblem {
public:
  virtual ~ManufacturedProblem() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual ExactValues evaluate(Point2 x) const = 0;
  [[nodiscard]] virtual const ModelParameters& params() const = 0;
  /// Discrete-side data; closures keep the problem alive.
  [[nodiscard]] virtual ProblemData data() const = 0;
  [[nodiscard]] virtual MeshFamily default_family() const = 0;
  [[nodiscard]] virtual BoundaryClassifier classifier() const = 0;
  /// Reference point used to measure where refinement concentrates.
  [[nodiscard]] virtual Point2 focus() const { return {0.5, 0.5}; }
  /// Pointwise residuals of the four governing equations; all vanish for a
  /// consistent set of derived data.
  [[nodiscard]] std::array<double, 4> equation_residuals(Point2 x, double step = 1e-5) const;
};

/// Smooth data on (0,1)^2 with an exponential stress-dependent mobility.
/// `frozen` replaces l by 0 and M by the constant 0.1 I.
std::shared_ptr<const ManufacturedProblem> example1(const ModelParameters& params, bool frozen = false);

/// Data with a point singularity at `centre` (outside the L-shaped domain by
/// default); mobility (1 + 1e-5 / tr sigma) I.
std::shared_ptr<const ManufacturedProblem> example2(const ModelParameters& params, Point2 centre = {0.1, -0.1});
/// Parameters of the L-shape runs: mu = 1.4286e3, lambda = 357.1429,
/// theta = 1e-3, M = 2.
ModelParameters example2_parameters();

/// Polynomial solution for patch tests: u of degree k1 (random coefficients
/// from `seed`), p = -lambda div u, phi of degree k2, M = I and l = 0, on the
/// unit square split.
std::shared_ptr<const ManufacturedProblem> polynomial_problem(const ModelParameters& params, int k1, int k2,
                                                              unsigned seed = 1);

/// Linear mixed Poisson data: u = 0, M = I, l = 0, theta from params and a
/// smooth phi.
std::shared_ptr<const ManufacturedProblem> mixed_poisson_problem(const ModelParameters& params);

/// Builds a problem by name: "example1", "example1_frozen", "example2".
std::shared_ptr<const ManufacturedProblem> make_problem(const std::string& name, const ModelParameters& params);

/// Largest Frobenius norm of `mobility` over an n x n grid of the box
/// [lo, hi], restricted to points where `inside` holds.
double estimate_M_bound(const std::function<Eigen::Matrix2d(Point2)>& mobility, Point2 lo, Point2 hi,
                        const std::function<bool(Point2)>& inside, int n = 201);

}  // namespace vemsad

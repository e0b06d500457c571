#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <vector>

#include "vemsad/geometry.hpp"
#include "vemsad/problem.hpp"
#include "vemsad/quadrature.hpp"
#include "vemsad/spaces.hpp"
#include "vemsad/vem_diffusion.hpp"
#include "vemsad/vem_elasticity.hpp"

namespace vemsad {

/// Polynomial orders of the displacement (k1 >= 2) and flux (k2 >= 1) spaces.
struct Orders {
  int k1 = 2;
  int k2 = 1;
};

/// Local operators of one cell, built once per mesh.
struct CellOperators {
  CellGeometry geometry;
  LocalElasticity elasticity;
  LocalDiffusion diffusion;
  /// Rule used for nonlinear coefficients and data.
  QuadratureRule quadrature;
};

/// A mesh together with its global spaces and cached local operators.
class Discretisation {
public:
  Discretisation(std::shared_ptr<const PolyMesh> mesh, Orders orders);

  [[nodiscard]] const PolyMesh& mesh() const { return *mesh_; }
  [[nodiscard]] std::shared_ptr<const PolyMesh> mesh_ptr() const { return mesh_; }
  [[nodiscard]] Orders orders() const { return orders_; }
  [[nodiscard]] const ElasticitySpace& elasticity() const { return el_; }
  [[nodiscard]] const DiffusionSpace& diffusion() const { return df_; }
  [[nodiscard]] const CellOperators& cell(std::size_t c) const { return cells_[c]; }
  [[nodiscard]] std::size_t num_cells() const { return cells_.size(); }
  /// All unknowns of u, p, zeta and phi, boundary-constrained ones included.
  [[nodiscard]] int num_dofs() const { return el_.size() + df_.size(); }
  [[nodiscard]] int quadrature_degree() const { return quad_degree_; }

private:
  std::shared_ptr<const PolyMesh> mesh_;
  Orders orders_;
  ElasticitySpace el_;
  DiffusionSpace df_;
  std::vector<CellOperators> cells_;
  int quad_degree_ = 0;
};

/// Discrete solution (u_h, p_h, zeta_h, phi_h) with per-cell projections.
struct SystemState {
  std::shared_ptr<const Discretisation> disc;
  Eigen::VectorXd u, p, zeta, phi;
  /// P_k1^2 coefficients of the energy projection of u_h per cell.
  std::vector<Eigen::VectorXd> u_proj;
  /// P_k2^2 coefficients of the L2 projection of zeta_h per cell.
  std::vector<Eigen::VectorXd> zeta_proj;

  /// Recomputes the cached projections from the coefficient vectors.
  void refresh_projections();
  [[nodiscard]] Eigen::VectorXd local_u(std::size_t c) const;
  /// Local flux DoFs with this cell's outward normals.
  [[nodiscard]] Eigen::VectorXd local_zeta(std::size_t c) const;
  [[nodiscard]] Eigen::VectorXd local_p(std::size_t c) const;
  [[nodiscard]] Eigen::VectorXd local_phi(std::size_t c) const;
  /// Symmetric gradient of the projected displacement and p_h at a point of cell c.
  [[nodiscard]] Eigen::Matrix2d strain(std::size_t c, Point2 x) const;
  [[nodiscard]] double pressure(std::size_t c, Point2 x) const;
  [[nodiscard]] double concentration(std::size_t c, Point2 x) const;
  [[nodiscard]] Point2 flux(std::size_t c, Point2 x) const;
};

SystemState zero_state(std::shared_ptr<const Discretisation> disc);
/// Interpolates an exact solution: DoF values for u and zeta, L2
/// projections for p and phi.
SystemState interpolate_state(std::shared_ptr<const Discretisation> disc, const ManufacturedProblem& problem);

/// Square system in all unknowns; rows of fixed unknowns are ignored and
/// their values enter through `fixed_values`.
struct LinearSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<char> fixed;
  Eigen::VectorXd fixed_values;
};

/// Sparse LU on the system with fixed unknowns eliminated. The symbolic
/// analysis is kept across refactorisations of the same pattern.
class ReducedSolver {
public:
  /// Factorises the free block; throws SingularSystem.
  void factorize(const LinearSystem& system);
  /// Solves with the factorised matrix; throws ResidualTooLarge when the
  /// relative residual stays above 1e-10 after refinement.
  [[nodiscard]] Eigen::VectorXd solve(const LinearSystem& system) const;

private:
  std::vector<int> free_index_;  // full -> reduced, -1 when fixed
  std::vector<int> full_index_;  // reduced -> full
  Eigen::SparseMatrix<double> reduced_;
  Eigen::SparseMatrix<double> coupling_;  // free rows, fixed columns
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  bool analysed_ = false;
};

Eigen::VectorXd solve_linear(const LinearSystem& system);

/// [A1 B1^T; B1 -C1/lambda] [u; p] = [F1; G1(phi_h)], with the displacement
/// boundary values fixed.
LinearSystem assemble_elasticity(const Discretisation& disc, const ProblemData& data, const SystemState& state);
/// Recomputes the pressure rows G1(phi_h) of an assembled right-hand side.
void update_elasticity_rhs(LinearSystem& system, const Discretisation& disc, const ProblemData& data,
                           const SystemState& state);
/// [A2 B2^T; B2 -theta C2] [zeta; phi] = [F2; G2], A2 from (Pi u_h, p_h) of
/// `state`, with the prescribed normal fluxes fixed.
LinearSystem assemble_diffusion(const Discretisation& disc, const ProblemData& data, const SystemState& state);

/// Inverse mobility at points of cell c, evaluated on the discrete fields.
std::vector<Eigen::Matrix2d> discrete_inverse_mobility(const SystemState& state, const ProblemData& data,
                                                       std::size_t c, const std::vector<Point2>& points);

struct PicardConfig {
  double tolerance = 1e-6;
  int max_iterations = 50;
  /// Consecutive increment growths tolerated before PicardDiverged.
  int divergence_window = 3;
  void validate() const;
};

struct PicardResult {
  SystemState state;
  /// Relative weighted increment of each iteration.
  std::vector<double> increments;
  [[nodiscard]] int iterations() const { return static_cast<int>(increments.size()); }
};

/// Alternates one elasticity solve and one diffusion solve per iteration
/// from the zero state until the relative weighted increment drops below the
/// tolerance. The elasticity factorisation is reused throughout.
PicardResult picard_solve(std::shared_ptr<const Discretisation> disc, const ProblemData& data,
                          const PicardConfig& config = {});

/// Squared weighted product norm of a state difference:
///   a1-energy + (1/2mu + 1/lambda)|p|^2 + a2-energy + M |div zeta|^2 + (1/M + theta)|phi|^2,
/// with the flux energy taken from the top-left block of `diffusion_matrix`.
double weighted_norm_sq(const Discretisation& disc, const ModelParameters& params, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& p, const Eigen::VectorXd& zeta, const Eigen::VectorXd& phi,
                        const Eigen::SparseMatrix<double>& diffusion_matrix);

}  // namespace vemsad

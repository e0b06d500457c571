#pragma once

#include <Eigen/Dense>
#include <functional>

#include "vemsad/geometry.hpp"
#include "vemsad/polybasis.hpp"

namespace vemsad {

/// Local degrees of freedom of the displacement space of order k >= 2 on one
/// cell, in this order:
///   vertex values          2 per vertex            (x, y interleaved)
///   internal edge values   2 (k - 1) per edge      (Gauss-Lobatto nodes, CCW)
///   divergence moments     (h_E / |E|) int div v m_a,   m_a in M_{k-1} minus 1
///   complement moments     (1 / |E|) int v . m_perp m_b, m_b in M_{k-3}
/// The pressure carries num_monomials(k - 1) monomial coefficients.
struct ElasticityDofLayout {
  int order = 0;
  int num_vertices = 0;

  [[nodiscard]] int edge_offset() const { return 2 * num_vertices; }
  [[nodiscard]] int div_offset() const { return edge_offset() + 2 * (order - 1) * num_vertices; }
  [[nodiscard]] int perp_offset() const { return div_offset() + num_div(); }
  [[nodiscard]] int num_div() const { return num_monomials(order - 1) - 1; }
  [[nodiscard]] int num_perp() const { return num_monomials(order - 3); }
  [[nodiscard]] int size() const { return perp_offset() + num_perp(); }
  [[nodiscard]] int pressure_size() const { return num_monomials(order - 1); }
  [[nodiscard]] int num_boundary() const { return div_offset(); }
  /// Local index of component c at node j (0 = start vertex, k = end vertex)
  /// of edge i.
  [[nodiscard]] int edge_node_dof(int edge, int node, int c) const;
};

ElasticityDofLayout dof_layout_elasticity(const CellGeometry& cell, int order);

/// Vector field with its divergence, used to interpolate smooth data.
struct VectorField {
  std::function<Point2(Point2)> value;
  std::function<double(Point2)> divergence;
};

/// Local operators of the displacement/pressure pair. Vector polynomials of
/// degree d are stored as coefficient vectors [x-part; y-part] in the scaled
/// monomial basis of the cell.
struct LocalElasticity {
  ElasticityDofLayout layout;
  ScaledMonomials basis{{0, 0}, 1.0, 0};
  double area = 0.0;
  /// DoFs -> P_k^2 coefficients of the energy projection.
  Eigen::MatrixXd pi_eps;
  /// DoFs of the monomial vector basis (columns).
  Eigen::MatrixXd dofs_of_basis;
  /// DoFs -> P_{k-2}^2 coefficients of the L2 projection.
  Eigen::MatrixXd pi0;
  /// DoFs -> P_{k-1} coefficients of div v.
  Eigen::MatrixXd div;
  /// int div v m_a for all a in M_{k-1}.
  Eigen::MatrixXd div_moments;
  /// Energy consistency and stabilisation, both without the 2 mu factor.
  Eigen::MatrixXd consistency;
  Eigen::MatrixXd stabilisation;
  /// Diagonal weights of the stabilisation.
  Eigen::VectorXd stab_weights;
  /// b1(v, m_a) = -int m_a div v, rows a in M_{k-1}.
  Eigen::MatrixXd b;
  /// Mass matrix of M_{k-1}.
  Eigen::MatrixXd c;

  [[nodiscard]] Eigen::MatrixXd stiffness(double mu) const { return 2.0 * mu * (consistency + stabilisation); }
  /// Projection as a map on DoF vectors.
  [[nodiscard]] Eigen::MatrixXd pi_eps_dofs() const { return dofs_of_basis * pi_eps; }
  /// v^T stabilisation v through the residual v - Pi v, free of the
  /// cancellation of the assembled quadratic form.
  [[nodiscard]] double stabilisation_energy(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd r = v - dofs_of_basis * (pi_eps * v);
    return r.dot(stab_weights.cwiseProduct(r));
  }
};

/// Builds all local operators. `quad_degree` < 0 selects 2k + 2.
LocalElasticity local_elasticity(const CellGeometry& cell, int order, int quad_degree = -1);

/// int_E Pi0 f . phi_i for every local basis function.
Eigen::VectorXd local_load_elasticity(const LocalElasticity& op, const CellGeometry& cell,
                                      const std::function<Point2(Point2)>& f, int quad_degree = -1);

/// DoF values of a smooth field (moments by quadrature).
Eigen::VectorXd interpolate_elasticity(const ElasticityDofLayout& layout, const CellGeometry& cell,
                                       const VectorField& v, int quad_degree = -1);

/// Positions of the boundary nodes carrying vertex/edge DoFs: vertex i, then
/// the internal nodes of edge i, in CCW order.
std::vector<Point2> elasticity_edge_nodes(const CellGeometry& cell, int order, int edge);

/// Evaluation of a vector polynomial [x-part; y-part] of degree d.
Point2 eval_vector_poly(const ScaledMonomials& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs, Point2 x);
/// Physical Jacobian rows (d v_c / dx, d v_c / dy) of a vector polynomial.
Eigen::Matrix2d eval_vector_poly_jacobian(const ScaledMonomials& basis,
                                          const Eigen::Ref<const Eigen::VectorXd>& coeffs, Point2 x);
/// Physical divergence of the symmetric gradient, as degree-d coefficients.
Eigen::VectorXd div_sym_grad_coeffs(int d, double h, const Eigen::Ref<const Eigen::VectorXd>& coeffs);

}  // namespace vemsad

#pragma once

#include <Eigen/Dense>
#include <functional>

#include "vemsad/geometry.hpp"
#include "vemsad/polybasis.hpp"

namespace vemsad {

/// Local degrees of freedom of the flux space of order k >= 1:
///   normal values   xi . n_E at the k + 1 Gauss-Lobatto nodes of each edge
///                   (n_E outward for this cell, nodes in CCW order)
///   grad moments    (1 / |E|) int xi . grad_xi m_a,  m_a in M_k minus 1
///   perp moments    (1 / |E|) int xi . m_perp m_b,   m_b in M_{k-1}
/// The concentration carries num_monomials(k) monomial coefficients.
struct DiffusionDofLayout {
  int order = 0;
  int num_edges = 0;

  [[nodiscard]] int edge_dof(int edge, int node) const { return edge * (order + 1) + node; }
  [[nodiscard]] int grad_offset() const { return num_edges * (order + 1); }
  [[nodiscard]] int num_grad() const { return num_monomials(order) - 1; }
  [[nodiscard]] int perp_offset() const { return grad_offset() + num_grad(); }
  [[nodiscard]] int num_perp() const { return num_monomials(order - 1); }
  [[nodiscard]] int size() const { return perp_offset() + num_perp(); }
  [[nodiscard]] int concentration_size() const { return num_monomials(order); }
};

DiffusionDofLayout dof_layout_diffusion(const CellGeometry& cell, int order);

/// Pointwise inverse coefficient (symmetric positive definite 2x2 matrix).
using MatrixCoefficient = std::function<Eigen::Matrix2d(Point2)>;

struct LocalDiffusion {
  DiffusionDofLayout layout;
  ScaledMonomials basis{{0, 0}, 1.0, 0};
  double area = 0.0;
  /// DoFs -> P_k^2 coefficients of the L2 projection.
  Eigen::MatrixXd pi0;
  /// DoFs of the monomial vector basis of P_k^2 (columns).
  Eigen::MatrixXd dofs_of_basis;
  /// DoFs -> P_k coefficients of div xi.
  Eigen::MatrixXd div;
  /// int div xi m_a for a in M_k; this is also b2(xi, m_a).
  Eigen::MatrixXd div_moments;
  /// Mass matrix of M_k.
  Eigen::MatrixXd c;
  /// Unweighted stabilisation (I - Pi)^T D (I - Pi).
  Eigen::MatrixXd stabilisation;
  /// Diagonal weights of the stabilisation.
  Eigen::VectorXd stab_weights;

  [[nodiscard]] Eigen::MatrixXd pi0_dofs() const { return dofs_of_basis * pi0; }
  /// xi^T stabilisation xi through the residual xi - Pi xi, free of the
  /// cancellation of the assembled quadratic form.
  [[nodiscard]] double stabilisation_energy(const Eigen::VectorXd& xi) const {
    const Eigen::VectorXd r = xi - dofs_of_basis * (pi0 * xi);
    return r.dot(stab_weights.cwiseProduct(r));
  }
};

/// Builds the coefficient-independent operators. `quad_degree` < 0 selects
/// 2k + 4.
LocalDiffusion local_diffusion(const CellGeometry& cell, int order, int quad_degree = -1);

/// a2 on this cell: consistency with the given inverse coefficient plus the
/// stabilisation scaled by the cell mean of tr(coefficient) / 2.
Eigen::MatrixXd local_diffusion_stiffness(const LocalDiffusion& op, const CellGeometry& cell,
                                          const MatrixCoefficient& inverse_coefficient, int quad_degree = -1);

/// Same, with the coefficient given at the points of polygon_quadrature(cell,
/// quad_degree) (used when it depends on other discrete fields).
Eigen::MatrixXd local_diffusion_stiffness(const LocalDiffusion& op, const std::vector<Point2>& points,
                                          const std::vector<double>& weights,
                                          const std::vector<Eigen::Matrix2d>& inverse_coefficient);

/// DoF values of a smooth flux field (moments by quadrature).
Eigen::VectorXd interpolate_diffusion(const DiffusionDofLayout& layout, const CellGeometry& cell,
                                      const std::function<Point2(Point2)>& xi, int quad_degree = -1);

/// int_E g m_a for a in M_k.
Eigen::VectorXd monomial_moments(const ScaledMonomials& basis, const CellGeometry& cell, int k,
                                 const std::function<double(Point2)>& g, int quad_degree);

/// Gauss-Lobatto node positions of edge i (CCW order, k + 1 nodes).
std::vector<Point2> diffusion_edge_nodes(const CellGeometry& cell, int order, int edge);

/// Throws CoefficientNotSPD when m is not symmetric positive definite.
void require_spd(const Eigen::Matrix2d& m, Point2 where);

}  // namespace vemsad

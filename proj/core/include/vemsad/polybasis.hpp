#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vemsad/geometry.hpp"

namespace vemsad {

/// Number of monomials of total degree <= k in two variables (0 for k < 0).
constexpr int num_monomials(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

struct MultiIndex {
  int a = 0;  // power of xi
  int b = 0;  // power of eta
  [[nodiscard]] int degree() const { return a + b; }
};

/// Graded lexicographic position: degree blocks in increasing order, and
/// inside a block the xi power decreases.
constexpr int monomial_index(int a, int b) {
  const int d = a + b;
  return d * (d + 1) / 2 + (d - a);
}

/// Multi-indices of degree <= k in basis order.
const std::vector<MultiIndex>& multi_indices(int k);

/// Scaled monomials m_alpha(x) = ((x - x_E) / h_E)^alpha on one cell.
class ScaledMonomials {
public:
  ScaledMonomials(Point2 centre, double h, int degree);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int size() const { return num_monomials(degree_); }
  [[nodiscard]] Point2 centre() const { return centre_; }
  [[nodiscard]] double h() const { return h_; }

  [[nodiscard]] Point2 to_local(Point2 x) const { return {(x.x - centre_.x) / h_, (x.y - centre_.y) / h_}; }
  /// Values of all monomials at x.
  [[nodiscard]] Eigen::VectorXd values(Point2 x) const;
  void values(Point2 x, double* out) const;
  /// Physical gradients; column 0 holds d/dx, column 1 d/dy.
  [[nodiscard]] Eigen::MatrixX2d gradients(Point2 x) const;

private:
  Point2 centre_;
  double h_;
  int degree_;
};

/// Values of all monomials of degree <= k at the scaled point (xi, eta).
void eval_scaled_monomials(int k, double xi, double eta, double* out);

/// Coefficient map of d/dxi (dir = 0) or d/deta (dir = 1) on degree-k
/// polynomials; square of size num_monomials(k).
const Eigen::MatrixXd& derivative_matrix(int k, int dir);

/// Coefficient map of multiplication by xi (dir = 0) or eta (dir = 1), from
/// degree k into degree k + 1.
const Eigen::MatrixXd& shift_matrix(int k, int dir);

/// Splits a vector polynomial of degree d as
///   q = sum_a c_a grad_xi m_a  +  sum_b c_b m_perp m_b,
/// with a over degree 1..d+1 monomials and b over degree <= d-1 monomials,
/// m_perp = (eta, -xi). Coefficients of q are ordered [x-part; y-part].
class GradPerpSplit {
public:
  explicit GradPerpSplit(int d);
  [[nodiscard]] int degree() const { return d_; }
  [[nodiscard]] int num_grad() const { return num_monomials(d_ + 1) - 1; }
  [[nodiscard]] int num_perp() const { return num_monomials(d_ - 1); }
  /// Columns: coefficients of grad_xi m_a (a = 1..) then m_perp m_b.
  [[nodiscard]] const Eigen::MatrixXd& basis() const { return basis_; }
  /// Inverse of basis(): vector coefficients -> [grad; perp] coefficients.
  [[nodiscard]] const Eigen::MatrixXd& split() const { return split_; }

  /// Shared instance for degree d.
  static const GradPerpSplit& get(int d);

private:
  int d_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd split_;
};

}  // namespace vemsad

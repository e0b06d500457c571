#pragma once

// Helpers shared by the local element operators.

#include <Eigen/Dense>
#include <vector>

#include "vemsad/geometry.hpp"
#include "vemsad/polybasis.hpp"
#include "vemsad/quadrature.hpp"

namespace vemsad::detail {

inline int degree_of_size(long n) {
  int d = 0;
  while (num_monomials(d) < n) ++d;
  return d;
}

// Scalar mass matrix of the monomials of degree <= k.
inline Eigen::MatrixXd monomial_mass(const ScaledMonomials& basis, const QuadratureRule& q, int k) {
  const int n = num_monomials(k);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd v(n);
  for (std::size_t p = 0; p < q.size(); ++p) {
    const Point2 s = basis.to_local(q.points[p]);
    eval_scaled_monomials(k, s.x, s.y, v.data());
    mass.noalias() += q.weights[p] * v * v.transpose();
  }
  return mass;
}

// Gauss points on one edge with the Lagrange weights of the k + 1
// Gauss-Lobatto nodes at each point.
struct EdgeSamples {
  std::vector<Point2> points;
  std::vector<double> weights;
  Eigen::MatrixXd lagrange;  // (points) x (k + 1)
};

inline EdgeSamples edge_samples(Point2 a, Point2 b, int k, int npoints) {
  const LineRule& lob = gauss_lobatto(k);
  const LineRule& g = gauss_legendre(npoints);
  const double half = 0.5 * distance(a, b);
  EdgeSamples s;
  s.lagrange.resize(npoints, k + 1);
  Eigen::VectorXd l(k + 1);
  for (int i = 0; i < npoints; ++i) {
    const double t = g.nodes[static_cast<std::size_t>(i)];
    s.points.push_back(a + (0.5 * (1.0 + t)) * (b - a));
    s.weights.push_back(half * g.weights[static_cast<std::size_t>(i)]);
    lagrange_basis(lob.nodes, t, l.data());
    s.lagrange.row(i) = l.transpose();
  }
  return s;
}

inline std::vector<Point2> lobatto_nodes(Point2 a, Point2 b, int k) {
  const LineRule& lob = gauss_lobatto(k);
  std::vector<Point2> nodes;
  nodes.reserve(lob.size());
  for (double t : lob.nodes) nodes.push_back(a + (0.5 * (1.0 + t)) * (b - a));
  return nodes;
}

}  // namespace vemsad::detail

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vemsad/geometry.hpp"

namespace vemsad {

/// One-dimensional rule on the reference interval [-1, 1].
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule (exact to degree 2n - 1).
const LineRule& gauss_legendre(int n);
/// Gauss-Lobatto rule with k + 1 nodes including both endpoints (exact to
/// degree 2k - 1). Requires k >= 1.
const LineRule& gauss_lobatto(int k);

/// Values at t of the Lagrange basis attached to `nodes`.
void lagrange_basis(std::span<const double> nodes, double t, double* out);

struct QuadratureRule {
  std::vector<Point2> points;
  std::vector<double> weights;
  int degree = 0;
  [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Rule exact for polynomials of total degree <= `degree` on a star-shaped
/// polygon: fan of triangles from the centroid (or, when the centroid sees
/// some edge from behind, from the kernel centre), each integrated with a
/// collapsed tensor Gauss rule.
QuadratureRule polygon_quadrature(const CellGeometry& cell, int degree);

/// Gauss points on the segment a -> b, weights scaled by its length.
QuadratureRule segment_quadrature(Point2 a, Point2 b, int npoints);

/// int_{a->b} g L_l for the Lagrange basis L_0..L_k on the Gauss-Lobatto
/// nodes of the segment (parametrised from a to b).
std::vector<double> lobatto_edge_moments(Point2 a, Point2 b, int k, const std::function<double(Point2)>& g,
                                         int npoints);

}  // namespace vemsad

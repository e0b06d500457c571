#include "vemsad/vem_elasticity.hpp"

#include <sstream>

#include "vemsad/error.hpp"
#include "vemsad/quadrature.hpp"
#include "local_common.hpp"

namespace vemsad {

using detail::degree_of_size;
using detail::edge_samples;
using detail::EdgeSamples;
using detail::monomial_mass;

int ElasticityDofLayout::edge_node_dof(int edge, int node, int c) const {
  if (node == 0) return 2 * edge + c;
  if (node == order) return 2 * ((edge + 1) % num_vertices) + c;
  return edge_offset() + edge * 2 * (order - 1) + 2 * (node - 1) + c;
}

ElasticityDofLayout dof_layout_elasticity(const CellGeometry& cell, int order) {
  if (order < 2) raise(ErrorCode::OrderTooLow, "displacement order must be >= 2");
  ElasticityDofLayout l;
  l.order = order;
  l.num_vertices = static_cast<int>(cell.size());
  return l;
}

std::vector<Point2> elasticity_edge_nodes(const CellGeometry& cell, int order, int edge) {
  return detail::lobatto_nodes(cell.vertex(static_cast<std::size_t>(edge)),
                               cell.vertex(static_cast<std::size_t>(edge) + 1), order);
}

Point2 eval_vector_poly(const ScaledMonomials& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs, Point2 x) {
  const long n = coeffs.size() / 2;
  const int d = degree_of_size(n);
  Eigen::VectorXd m(n);
  const Point2 s = basis.to_local(x);
  eval_scaled_monomials(d, s.x, s.y, m.data());
  return {coeffs.head(n).dot(m), coeffs.tail(n).dot(m)};
}

Eigen::Matrix2d eval_vector_poly_jacobian(const ScaledMonomials& basis,
                                          const Eigen::Ref<const Eigen::VectorXd>& coeffs, Point2 x) {
  const long n = coeffs.size() / 2;
  const int d = degree_of_size(n);
  const ScaledMonomials local(basis.centre(), basis.h(), d);
  const Eigen::MatrixX2d g = local.gradients(x);
  Eigen::Matrix2d j;
  j.row(0) = coeffs.head(n).transpose() * g;
  j.row(1) = coeffs.tail(n).transpose() * g;
  return j;
}

Eigen::VectorXd div_sym_grad_coeffs(int d, double h, const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  const int n = num_monomials(d);
  const Eigen::MatrixXd& dx = derivative_matrix(d, 0);
  const Eigen::MatrixXd& dy = derivative_matrix(d, 1);
  const Eigen::VectorXd p1 = coeffs.head(n);
  const Eigen::VectorXd p2 = coeffs.tail(n);
  Eigen::VectorXd out(2 * n);
  out.head(n) = dx * (dx * p1) + 0.5 * (dy * (dy * p1)) + 0.5 * (dx * (dy * p2));
  out.tail(n) = 0.5 * (dx * (dy * p1)) + 0.5 * (dx * (dx * p2)) + dy * (dy * p2);
  return out / (h * h);
}

LocalElasticity local_elasticity(const CellGeometry& cell, int k, int quad_degree) {
  LocalElasticity op;
  op.layout = dof_layout_elasticity(cell, k);
  const ElasticityDofLayout& L = op.layout;
  const int n = L.size();
  const int N = num_monomials(k);
  const int nk1 = num_monomials(k - 1);
  const int nk2 = num_monomials(k - 2);
  const double h = cell.diameter;
  const double area = cell.area;
  op.area = area;
  op.basis = ScaledMonomials(cell.centroid, h, k);
  const ScaledMonomials& B = op.basis;
  if (quad_degree < 0) quad_degree = 2 * k + 2;
  const QuadratureRule q = polygon_quadrature(cell, quad_degree);
  const int nv = L.num_vertices;

  const Eigen::MatrixXd mass = monomial_mass(B, q, k);

  // Boundary contributions: int div v m_0, int v.n m_a, the energy boundary
  // term and the rigid-body constraints, all exact on edge Gauss points.
  Eigen::MatrixXd bnd_nm = Eigen::MatrixXd::Zero(nk1, n);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(2 * N, n);
  Eigen::MatrixXd cpoly = Eigen::MatrixXd::Zero(3, 2 * N);
  Eigen::MatrixXd cdofs = Eigen::MatrixXd::Zero(3, n);
  Eigen::VectorXd m(N);
  for (int e = 0; e < nv; ++e) {
    const EdgeSamples s = edge_samples(cell.vertex(static_cast<std::size_t>(e)),
                                        cell.vertex(static_cast<std::size_t>(e) + 1), k, k + 1);
    const Point2 nrm = cell.outward_normal(static_cast<std::size_t>(e));
    for (std::size_t g = 0; g < s.points.size(); ++g) {
      const Point2 x = s.points[g];
      const double w = s.weights[g];
      const Point2 xi = B.to_local(x);
      eval_scaled_monomials(k, xi.x, xi.y, m.data());
      const Eigen::MatrixX2d grad = B.gradients(x);
      const Point2 rbm[3] = {{1, 0}, {0, 1}, {-xi.y, xi.x}};
      for (int a = 0; a < 3; ++a) {
        cpoly.block(a, 0, 1, N) += w * rbm[a].x * m.transpose();
        cpoly.block(a, N, 1, N) += w * rbm[a].y * m.transpose();
      }
      for (int l = 0; l <= k; ++l) {
        const double wl = w * s.lagrange(static_cast<long>(g), l);
        if (wl == 0.0) continue;
        for (int c = 0; c < 2; ++c) {
          const int dof = L.edge_node_dof(e, l, c);
          const double nc = c == 0 ? nrm.x : nrm.y;
          bnd_nm.col(dof) += wl * nc * m.head(nk1);
          for (int a = 0; a < 3; ++a) cdofs(a, dof) += wl * (c == 0 ? rbm[a].x : rbm[a].y);
          for (int i = 0; i < N; ++i) {
            const double mx = grad(i, 0), my = grad(i, 1);
            // eps((m,0)) n and eps((0,m)) n, component c
            const double e1 = c == 0 ? mx * nrm.x + 0.5 * my * nrm.y : 0.5 * my * nrm.x;
            const double e2 = c == 0 ? 0.5 * mx * nrm.y : 0.5 * mx * nrm.x + my * nrm.y;
            rhs(i, dof) += wl * e1;
            rhs(N + i, dof) += wl * e2;
          }
        }
      }
    }
  }

  // int div v m_a: the mean comes from the boundary flux, the rest are DoFs.
  op.div_moments = Eigen::MatrixXd::Zero(nk1, n);
  op.div_moments.row(0) = bnd_nm.row(0);
  for (int a = 1; a < nk1; ++a) op.div_moments(a, L.div_offset() + a - 1) = area / h;

  // Moments against P_{k-2}^2 through the gradient/complement split:
  //   int v . grad_xi m_a = h (-int div v m_a + int_bd v.n m_a)
  //   int v . m_perp m_b  = |E| * DoF
  const GradPerpSplit& split = GradPerpSplit::get(k - 2);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * nk2, n);
  for (int a = 1; a < nk1; ++a) w.row(a - 1) = h * (bnd_nm.row(a) - op.div_moments.row(a));
  for (int b = 0; b < L.num_perp(); ++b) w(split.num_grad() + b, L.perp_offset() + b) = area;
  const Eigen::MatrixXd mom = split.split().transpose() * w;

  // Energy Gram matrix.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  for (std::size_t p = 0; p < q.size(); ++p) {
    const Eigen::MatrixX2d g = B.gradients(q.points[p]);
    // eps(m_i):eps(m_j) for (m,0),(0,m) pairs
    const Eigen::VectorXd gx = g.col(0), gy = g.col(1);
    const double wq = q.weights[p];
    gram.topLeftCorner(N, N).noalias() += wq * (gx * gx.transpose() + 0.5 * gy * gy.transpose());
    gram.bottomRightCorner(N, N).noalias() += wq * (gy * gy.transpose() + 0.5 * gx * gx.transpose());
    gram.topRightCorner(N, N).noalias() += wq * 0.5 * (gy * gx.transpose());
  }
  gram.bottomLeftCorner(N, N) = gram.topRightCorner(N, N).transpose();

  // Interior part of the energy right-hand side: -int v . div eps(m_i).
  for (int i = 0; i < 2 * N; ++i) {
    const Eigen::VectorXd de = div_sym_grad_coeffs(k, h, Eigen::VectorXd::Unit(2 * N, i));
    Eigen::VectorXd r(2 * nk2);
    r << de.head(nk2), de.segment(N, nk2);
    rhs.row(i) -= r.transpose() * mom;
  }

  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * N + 3, 2 * N + 3);
  aug.topLeftCorner(2 * N, 2 * N) = gram;
  aug.block(0, 2 * N, 2 * N, 3) = cpoly.transpose();
  aug.block(2 * N, 0, 3, 2 * N) = cpoly;
  Eigen::MatrixXd aug_rhs(2 * N + 3, n);
  aug_rhs << rhs, cdofs;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(aug);
  if (!lu.isInvertible()) raise(ErrorCode::SingularLocalSystem, "energy projection system is singular");
  op.pi_eps = lu.solve(aug_rhs).topRows(2 * N);

  // DoFs of the monomial vector basis.
  op.dofs_of_basis = Eigen::MatrixXd::Zero(n, 2 * N);
  for (int e = 0; e < nv; ++e) {
    const auto nodes = elasticity_edge_nodes(cell, k, e);
    for (int l = 0; l < k; ++l) {
      const Point2 s = B.to_local(nodes[static_cast<std::size_t>(l)]);
      eval_scaled_monomials(k, s.x, s.y, m.data());
      op.dofs_of_basis.block(L.edge_node_dof(e, l, 0), 0, 1, N) = m.transpose();
      op.dofs_of_basis.block(L.edge_node_dof(e, l, 1), N, 1, N) = m.transpose();
    }
  }
  const int nk3 = num_monomials(k - 3);
  Eigen::VectorXd mlow(std::max(1, nk1));
  for (std::size_t p = 0; p < q.size(); ++p) {
    const Point2 s = B.to_local(q.points[p]);
    eval_scaled_monomials(k, s.x, s.y, m.data());
    eval_scaled_monomials(k - 1, s.x, s.y, mlow.data());
    const Eigen::MatrixX2d g = B.gradients(q.points[p]);
    const double wq = q.weights[p];
    for (int a = 1; a < nk1; ++a) {
      const int row = L.div_offset() + a - 1;
      const double f = wq * (h / area) * mlow(a);
      op.dofs_of_basis.block(row, 0, 1, N) += f * g.col(0).transpose();
      op.dofs_of_basis.block(row, N, 1, N) += f * g.col(1).transpose();
    }
    for (int b = 0; b < nk3; ++b) {
      const int row = L.perp_offset() + b;
      const double f = wq / area * mlow(b);
      op.dofs_of_basis.block(row, 0, 1, N) += f * s.y * m.transpose();
      op.dofs_of_basis.block(row, N, 1, N) -= f * s.x * m.transpose();
    }
  }

  Eigen::MatrixXd vmass = Eigen::MatrixXd::Zero(2 * nk2, 2 * nk2);
  vmass.topLeftCorner(nk2, nk2) = mass.topLeftCorner(nk2, nk2);
  vmass.bottomRightCorner(nk2, nk2) = mass.topLeftCorner(nk2, nk2);
  op.pi0 = vmass.ldlt().solve(mom);
  op.c = mass.topLeftCorner(nk1, nk1);
  op.div = op.c.ldlt().solve(op.div_moments);
  op.b = -op.div_moments;

  op.consistency = op.pi_eps.transpose() * gram * op.pi_eps;
  op.consistency = 0.5 * (op.consistency + op.consistency.transpose()).eval();
  const Eigen::MatrixXd resid = Eigen::MatrixXd::Identity(n, n) - op.dofs_of_basis * op.pi_eps;
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) diag(i) = std::max(1.0, op.consistency(i, i));
  op.stabilisation = resid.transpose() * diag.asDiagonal() * resid;
  op.stabilisation = 0.5 * (op.stabilisation + op.stabilisation.transpose()).eval();
  op.stab_weights = diag;
  return op;
}

Eigen::VectorXd local_load_elasticity(const LocalElasticity& op, const CellGeometry& cell,
                                      const std::function<Point2(Point2)>& f, int quad_degree) {
  const int k = op.layout.order;
  const int nk2 = num_monomials(k - 2);
  if (quad_degree < 0) quad_degree = 2 * k + 2;
  const QuadratureRule q = polygon_quadrature(cell, quad_degree);
  Eigen::VectorXd fm = Eigen::VectorXd::Zero(2 * nk2);
  Eigen::VectorXd m(nk2);
  for (std::size_t p = 0; p < q.size(); ++p) {
    const Point2 s = op.basis.to_local(q.points[p]);
    eval_scaled_monomials(k - 2, s.x, s.y, m.data());
    const Point2 fv = f(q.points[p]);
    fm.head(nk2) += q.weights[p] * fv.x * m;
    fm.tail(nk2) += q.weights[p] * fv.y * m;
  }
  return op.pi0.transpose() * fm;
}

Eigen::VectorXd interpolate_elasticity(const ElasticityDofLayout& L, const CellGeometry& cell,
                                       const VectorField& v, int quad_degree) {
  const int k = L.order;
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(L.size());
  for (int e = 0; e < L.num_vertices; ++e) {
    const auto nodes = elasticity_edge_nodes(cell, k, e);
    for (int l = 0; l < k; ++l) {
      const Point2 val = v.value(nodes[static_cast<std::size_t>(l)]);
      dofs(L.edge_node_dof(e, l, 0)) = val.x;
      dofs(L.edge_node_dof(e, l, 1)) = val.y;
    }
  }
  if (quad_degree < 0) quad_degree = 2 * k + 2;
  const QuadratureRule q = polygon_quadrature(cell, quad_degree);
  const ScaledMonomials basis(cell.centroid, cell.diameter, k);
  const int nk1 = num_monomials(k - 1);
  Eigen::VectorXd m(std::max(1, nk1));
  for (std::size_t p = 0; p < q.size(); ++p) {
    const Point2 s = basis.to_local(q.points[p]);
    eval_scaled_monomials(k - 1, s.x, s.y, m.data());
    const double w = q.weights[p];
    const double dv = v.divergence ? v.divergence(q.points[p]) : 0.0;
    for (int a = 1; a < nk1; ++a) dofs(L.div_offset() + a - 1) += w * cell.diameter / cell.area * dv * m(a);
    if (L.num_perp() > 0) {
      const Point2 val = v.value(q.points[p]);
      for (int b = 0; b < L.num_perp(); ++b)
        dofs(L.perp_offset() + b) += w / cell.area * (val.x * s.y - val.y * s.x) * m(b);
    }
  }
  return dofs;
}

}  // namespace vemsad

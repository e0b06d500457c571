#include "vemsad/vem_diffusion.hpp"

#include <sstream>

#include "vemsad/error.hpp"
#include "vemsad/quadrature.hpp"
#include "local_common.hpp"

namespace vemsad {

DiffusionDofLayout dof_layout_diffusion(const CellGeometry& cell, int order) {
  if (order < 1) raise(ErrorCode::OrderTooLow, "flux order must be >= 1");
  DiffusionDofLayout l;
  l.order = order;
  l.num_edges = static_cast<int>(cell.size());
  return l;
}

std::vector<Point2> diffusion_edge_nodes(const CellGeometry& cell, int order, int edge) {
  return detail::lobatto_nodes(cell.vertex(static_cast<std::size_t>(edge)),
                               cell.vertex(static_cast<std::size_t>(edge) + 1), order);
}

void require_spd(const Eigen::Matrix2d& m, Point2 where) {
  const double asym = std::abs(m(0, 1) - m(1, 0));
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale) || asym > 1e-10 * scale || m(0, 0) <= 0.0 ||
      m.determinant() <= 0.0) {
    std::ostringstream os;
    os << "inverse coefficient not symmetric positive definite at (" << where.x << ", " << where.y << ")";
    raise(ErrorCode::CoefficientNotSPD, os.str());
  }
}

LocalDiffusion local_diffusion(const CellGeometry& cell, int k, int quad_degree) {
  LocalDiffusion op;
  op.layout = dof_layout_diffusion(cell, k);
  const DiffusionDofLayout& L = op.layout;
  const int n = L.size();
  const int N = num_monomials(k);
  const int n1 = num_monomials(k + 1);
  const double h = cell.diameter;
  const double area = cell.area;
  op.area = area;
  op.basis = ScaledMonomials(cell.centroid, h, k + 1);
  const ScaledMonomials& B = op.basis;
  if (quad_degree < 0) quad_degree = 2 * k + 4;
  const QuadratureRule q = polygon_quadrature(cell, std::max(quad_degree, 2 * k + 2));
  const Eigen::MatrixXd mass = detail::monomial_mass(B, q, k + 1);

  // int xi.n m_a over the boundary for a in M_{k+1}.
  Eigen::MatrixXd bnd_nm = Eigen::MatrixXd::Zero(n1, n);
  Eigen::VectorXd m(n1);
  for (int e = 0; e < L.num_edges; ++e) {
    const auto s = detail::edge_samples(cell.vertex(static_cast<std::size_t>(e)),
                                        cell.vertex(static_cast<std::size_t>(e) + 1), k, k + 2);
    for (std::size_t g = 0; g < s.points.size(); ++g) {
      const Point2 xi = B.to_local(s.points[g]);
      eval_scaled_monomials(k + 1, xi.x, xi.y, m.data());
      for (int l = 0; l <= k; ++l)
        bnd_nm.col(L.edge_dof(e, l)) += s.weights[g] * s.lagrange(static_cast<long>(g), l) * m;
    }
  }

  // int div xi m_a = -(|E| / h) DoF + int xi.n m_a; the mean is pure flux.
  op.div_moments = bnd_nm.topRows(N);
  for (int a = 1; a < N; ++a) op.div_moments(a, L.grad_offset() + a - 1) -= area / h;
  op.c = mass.topLeftCorner(N, N);
  op.div = op.c.ldlt().solve(op.div_moments);

  // Moments against P_k^2 through the gradient/complement split. Gradients of
  // top-degree monomials are not DoFs and go through integration by parts with
  // the reconstructed divergence.
  const GradPerpSplit& split = GradPerpSplit::get(k);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * N, n);
  const Eigen::MatrixXd top_div = mass.block(N, 0, n1 - N, N) * op.div;
  for (int a = 1; a < n1; ++a) {
    if (a < N)
      w(a - 1, L.grad_offset() + a - 1) = area;
    else
      w.row(a - 1) = h * (bnd_nm.row(a) - top_div.row(a - N));
  }
  for (int b = 0; b < L.num_perp(); ++b) w(split.num_grad() + b, L.perp_offset() + b) = area;
  const Eigen::MatrixXd mom = split.split().transpose() * w;

  Eigen::MatrixXd vmass = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  vmass.topLeftCorner(N, N) = op.c;
  vmass.bottomRightCorner(N, N) = op.c;
  op.pi0 = vmass.ldlt().solve(mom);

  // DoFs of the monomial vector basis.
  op.dofs_of_basis = Eigen::MatrixXd::Zero(n, 2 * N);
  for (int e = 0; e < L.num_edges; ++e) {
    const auto nodes = diffusion_edge_nodes(cell, k, e);
    const Point2 nrm = cell.outward_normal(static_cast<std::size_t>(e));
    for (int l = 0; l <= k; ++l) {
      const Point2 s = B.to_local(nodes[static_cast<std::size_t>(l)]);
      eval_scaled_monomials(k, s.x, s.y, m.data());
      op.dofs_of_basis.block(L.edge_dof(e, l), 0, 1, N) = nrm.x * m.head(N).transpose();
      op.dofs_of_basis.block(L.edge_dof(e, l), N, 1, N) = nrm.y * m.head(N).transpose();
    }
  }
  const auto& idx = multi_indices(k);
  Eigen::VectorXd mk(N);
  for (std::size_t p = 0; p < q.size(); ++p) {
    const Point2 s = B.to_local(q.points[p]);
    eval_scaled_monomials(k, s.x, s.y, mk.data());
    const double wq = q.weights[p] / area;
    for (int a = 1; a < N; ++a) {
      const auto [ax, ay] = idx[static_cast<std::size_t>(a)];
      // grad_xi m_a at s, from the lower-degree values
      const double gx = ax > 0 ? ax * mk(monomial_index(ax - 1, ay)) : 0.0;
      const double gy = ay > 0 ? ay * mk(monomial_index(ax, ay - 1)) : 0.0;
      const int row = L.grad_offset() + a - 1;
      op.dofs_of_basis.block(row, 0, 1, N) += wq * gx * mk.transpose();
      op.dofs_of_basis.block(row, N, 1, N) += wq * gy * mk.transpose();
    }
    for (int b = 0; b < L.num_perp(); ++b) {
      const int row = L.perp_offset() + b;
      op.dofs_of_basis.block(row, 0, 1, N) += wq * s.y * mk(b) * mk.transpose();
      op.dofs_of_basis.block(row, N, 1, N) -= wq * s.x * mk(b) * mk.transpose();
    }
  }

  const Eigen::MatrixXd k0 = op.pi0.transpose() * vmass * op.pi0;
  const Eigen::MatrixXd resid = Eigen::MatrixXd::Identity(n, n) - op.dofs_of_basis * op.pi0;
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) diag(i) = std::max(area, k0(i, i));
  op.stabilisation = resid.transpose() * diag.asDiagonal() * resid;
  op.stabilisation = 0.5 * (op.stabilisation + op.stabilisation.transpose()).eval();
  op.stab_weights = diag;
  return op;
}

Eigen::MatrixXd local_diffusion_stiffness(const LocalDiffusion& op, const std::vector<Point2>& points,
                                          const std::vector<double>& weights,
                                          const std::vector<Eigen::Matrix2d>& coeff) {
  const int k = op.layout.order;
  const int N = num_monomials(k);
  Eigen::MatrixXd kc = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  Eigen::VectorXd m(N);
  double trace_mean = 0.0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Eigen::Matrix2d& c = coeff[p];
    require_spd(c, points[p]);
    const Point2 s = op.basis.to_local(points[p]);
    eval_scaled_monomials(k, s.x, s.y, m.data());
    const Eigen::MatrixXd mm = weights[p] * m * m.transpose();
    kc.topLeftCorner(N, N) += c(0, 0) * mm;
    kc.topRightCorner(N, N) += c(0, 1) * mm;
    kc.bottomLeftCorner(N, N) += c(1, 0) * mm;
    kc.bottomRightCorner(N, N) += c(1, 1) * mm;
    trace_mean += weights[p] * 0.5 * c.trace();
  }
  trace_mean /= op.area;
  Eigen::MatrixXd a = op.pi0.transpose() * kc * op.pi0;
  a = 0.5 * (a + a.transpose()).eval();
  a += trace_mean * op.stabilisation;
  return a;
}

Eigen::MatrixXd local_diffusion_stiffness(const LocalDiffusion& op, const CellGeometry& cell,
                                          const MatrixCoefficient& inverse_coefficient, int quad_degree) {
  if (quad_degree < 0) quad_degree = 2 * op.layout.order + 4;
  const QuadratureRule q = polygon_quadrature(cell, quad_degree);
  std::vector<Eigen::Matrix2d> coeff;
  coeff.reserve(q.size());
  for (const Point2& x : q.points) coeff.push_back(inverse_coefficient(x));
  return local_diffusion_stiffness(op, q.points, q.weights, coeff);
}

Eigen::VectorXd interpolate_diffusion(const DiffusionDofLayout& L, const CellGeometry& cell,
                                      const std::function<Point2(Point2)>& xi, int quad_degree) {
  const int k = L.order;
  const int N = num_monomials(k);
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(L.size());
  for (int e = 0; e < L.num_edges; ++e) {
    const auto nodes = diffusion_edge_nodes(cell, k, e);
    const Point2 nrm = cell.outward_normal(static_cast<std::size_t>(e));
    for (int l = 0; l <= k; ++l) dofs(L.edge_dof(e, l)) = dot(xi(nodes[static_cast<std::size_t>(l)]), nrm);
  }
  if (quad_degree < 0) quad_degree = 2 * k + 4;
  const QuadratureRule q = polygon_quadrature(cell, quad_degree);
  const ScaledMonomials basis(cell.centroid, cell.diameter, k);
  const auto& idx = multi_indices(k);
  Eigen::VectorXd mk(N);
  for (std::size_t p = 0; p < q.size(); ++p) {
    const Point2 s = basis.to_local(q.points[p]);
    eval_scaled_monomials(k, s.x, s.y, mk.data());
    const Point2 v = xi(q.points[p]);
    const double wq = q.weights[p] / cell.area;
    for (int a = 1; a < N; ++a) {
      const auto [ax, ay] = idx[static_cast<std::size_t>(a)];
      const double gx = ax > 0 ? ax * mk(monomial_index(ax - 1, ay)) : 0.0;
      const double gy = ay > 0 ? ay * mk(monomial_index(ax, ay - 1)) : 0.0;
      dofs(L.grad_offset() + a - 1) += wq * (v.x * gx + v.y * gy);
    }
    for (int b = 0; b < L.num_perp(); ++b) dofs(L.perp_offset() + b) += wq * (v.x * s.y - v.y * s.x) * mk(b);
  }
  return dofs;
}

Eigen::VectorXd monomial_moments(const ScaledMonomials& basis, const CellGeometry& cell, int k,
                                 const std::function<double(Point2)>& g, int quad_degree) {
  const QuadratureRule q = polygon_quadrature(cell, quad_degree);
  const int N = num_monomials(k);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd m(N);
  for (std::size_t p = 0; p < q.size(); ++p) {
    const Point2 s = basis.to_local(q.points[p]);
    eval_scaled_monomials(k, s.x, s.y, m.data());
    out += q.weights[p] * g(q.points[p]) * m;
  }
  return out;
}

}  // namespace vemsad

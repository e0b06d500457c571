#include "vemsad/estimator.hpp"

#include <cmath>
#include <sstream>

#include "vemsad/error.hpp"
#include "vemsad/parallel.hpp"

namespace vemsad {

void LocalIndicators::combine(const ModelParameters& prm) {
  const double two_mu = 2.0 * prm.mu;
  theta1_sq = xi1_sq / two_mu + eta1_sq / two_mu + two_mu * lam1_sq + s1_sq;
  theta2_sq = prm.M * (xi2_sq + eta2_sq + lam2_sq) + s2_sq;
  theta_sq = theta1_sq + theta2_sq;
}

double GlobalEstimate::theta() const { return std::sqrt(theta_sq); }

double TrueError::value() const { return std::sqrt(u_sq + p_sq + zeta_sq + div_sq + phi_sq); }

namespace {

Eigen::Matrix2d stress(const SystemState& st, std::size_t c, Point2 x, double mu) {
  return 2.0 * mu * st.strain(c, x) - st.pressure(c, x) * Eigen::Matrix2d::Identity();
}

Point2 times(const Eigen::Matrix2d& m, Point2 v) {
  return {m(0, 0) * v.x + m(0, 1) * v.y, m(1, 0) * v.x + m(1, 1) * v.y};
}

double sq(Point2 v) { return dot(v, v); }

// Coefficients [x; y] of the L2 projection onto P_k^2 of a field known at the
// quadrature points.
Eigen::VectorXd project_vector(const ScaledMonomials& basis, const Eigen::MatrixXd& mass, int k,
                               const QuadratureRule& q, const std::vector<Point2>& values) {
  const int n = num_monomials(k);
  Eigen::VectorXd rx = Eigen::VectorXd::Zero(n), ry = Eigen::VectorXd::Zero(n), m(n);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Point2 s = basis.to_local(q.points[i]);
    eval_scaled_monomials(k, s.x, s.y, m.data());
    rx += q.weights[i] * values[i].x * m;
    ry += q.weights[i] * values[i].y * m;
  }
  const auto ldlt = mass.topLeftCorner(n, n).ldlt();
  Eigen::VectorXd out(2 * n);
  out << ldlt.solve(rx), ldlt.solve(ry);
  return out;
}

double scalar_at(const ScaledMonomials& basis, const Eigen::VectorXd& coeffs, Point2 x) {
  Eigen::VectorXd m(coeffs.size());
  const Point2 s = basis.to_local(x);
  int d = 0;
  while (num_monomials(d) < coeffs.size()) ++d;
  eval_scaled_monomials(d, s.x, s.y, m.data());
  return m.dot(coeffs);
}

Point2 scalar_gradient(const ScaledMonomials& basis, const Eigen::VectorXd& coeffs, Point2 x) {
  int d = 0;
  while (num_monomials(d) < coeffs.size()) ++d;
  const ScaledMonomials b(basis.centre(), basis.h(), d);
  const Eigen::MatrixX2d g = b.gradients(x);
  return {g.col(0).dot(coeffs), g.col(1).dot(coeffs)};
}

}  // namespace

std::vector<LocalIndicators> local_indicators(const SystemState& st, const ProblemData& data,
                                              const EstimatorOptions& options) {
  const Discretisation& disc = *st.disc;
  const PolyMesh& mesh = disc.mesh();
  const ModelParameters& prm = data.params;
  const double mu = prm.mu;
  const int k1 = disc.orders().k1;
  const int k2 = disc.orders().k2;
  const int edge_points = std::max(k1, k2) + 2;
  const std::size_t nc = disc.num_cells();
  std::vector<LocalIndicators> out(nc);

  // K = Pi_k2(M^{-1} Pi zeta_h) is needed on neighbours for the optional
  // tangential jumps, so it is computed for every cell first.
  std::vector<Eigen::VectorXd> kproxy(nc);
  std::vector<std::vector<Eigen::Matrix2d>> coeff(nc);
  parallel_for(nc, [&](std::size_t c) {
    const CellOperators& op = disc.cell(c);
    coeff[c] = discrete_inverse_mobility(st, data, c, op.quadrature.points);
    std::vector<Point2> w(op.quadrature.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = times(coeff[c][i], st.flux(c, op.quadrature.points[i]));
    kproxy[c] = project_vector(op.diffusion.basis, op.diffusion.c, k2, op.quadrature, w);
  });

  parallel_for(nc, [&](std::size_t c) {
    const CellOperators& op = disc.cell(c);
    const PolyCell& pc = mesh.cells()[c];
    const QuadratureRule& q = op.quadrature;
    const double hE = op.geometry.diameter;
    const ScaledMonomials& eb = op.elasticity.basis;
    const ScaledMonomials& db = op.diffusion.basis;
    LocalIndicators& li = out[c];
    li.cell = static_cast<int>(c);

    // Projected load and divergence of the symmetric gradient.
    std::vector<Point2> fvals(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) fvals[i] = data.body_force(q.points[i]);
    const Eigen::VectorXd pf = k1 >= 2 ? project_vector(eb, op.elasticity.c, k1 - 2, q, fvals) : Eigen::VectorXd();
    const Eigen::VectorXd dse = div_sym_grad_coeffs(k1, hE, st.u_proj[c]);
    const Eigen::VectorXd pl = st.local_p(c);
    const Eigen::VectorXd phl = st.local_phi(c);
    const Eigen::VectorXd divu = op.elasticity.div * st.local_u(c);
    const Eigen::VectorXd zl = st.local_zeta(c);
    const Eigen::VectorXd divz = op.diffusion.div * zl;
    const Eigen::VectorXd& kc = kproxy[c];
    const int nk = num_monomials(k2);
    const ScaledMonomials kb(db.centre(), db.h(), k2);

    double vol1 = 0.0, eta1 = 0.0, lam1 = 0.0, vol2 = 0.0, rot2 = 0.0, eta2 = 0.0, lam2 = 0.0, trace_mean = 0.0;
    const double psign = options.printed_pressure_sign ? 1.0 : -1.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Point2 x = q.points[i];
      const double w = q.weights[i];
      const Point2 pfx = eval_vector_poly(eb, pf, x);
      const Point2 r1 = pfx + 2.0 * mu * eval_vector_poly(eb, dse, x) - scalar_gradient(eb, pl, x);
      vol1 += w * sq(r1);
      eta1 += w * sq(fvals[i] - pfx);
      const double ph = scalar_at(db, phl, x);
      const double res_l = data.ell(ph) / prm.lambda - scalar_at(eb, divu, x) + psign * scalar_at(eb, pl, x) / prm.lambda;
      lam1 += w * res_l * res_l;

      const Point2 kx = eval_vector_poly(kb, kc, x);
      vol2 += w * sq(kx - scalar_gradient(db, phl, x));
      const Eigen::MatrixX2d g = kb.gradients(x);
      const double rot = g.col(0).dot(kc.tail(nk)) - g.col(1).dot(kc.head(nk));
      rot2 += w * rot * rot;
      eta2 += w * sq(times(coeff[c][i], st.flux(c, x)) - kx);
      const double res_d = -data.source(x) - scalar_at(db, divz, x) + prm.theta * ph;
      lam2 += w * res_d * res_d;
      trace_mean += w * 0.5 * coeff[c][i].trace();
    }
    trace_mean /= op.geometry.area;

    double edge1 = 0.0, edge2 = 0.0;
    for (std::size_t i = 0; i < pc.edges.size(); ++i) {
      const MeshEdge& e = mesh.edge(pc.edges[i]);
      const Point2 a = op.geometry.vertex(i), b = op.geometry.vertex(i + 1);
      const Point2 n = op.geometry.outward_normal(i);
      const Point2 t{-n.y, n.x};
      const double he = e.length;
      const QuadratureRule eq = segment_quadrature(a, b, edge_points);
      if (e.tag == BoundaryTag::Interior) {
        const int nb = e.cells[0] == static_cast<int>(c) ? e.cells[1] : e.cells[0];
        if (nb < 0) {
          std::ostringstream os;
          os << "interior edge " << pc.edges[i] << " of cell " << c << " has no neighbour";
          raise(ErrorCode::MissingNeighbor, os.str());
        }
        const auto nbc = static_cast<std::size_t>(nb);
        const ScaledMonomials nkb(disc.cell(nbc).diffusion.basis.centre(), disc.cell(nbc).diffusion.basis.h(), k2);
        for (std::size_t g = 0; g < eq.size(); ++g) {
          const Point2 x = eq.points[g];
          const Eigen::Matrix2d jump = stress(st, c, x, mu) - stress(st, nbc, x, mu);
          edge1 += he * eq.weights[g] * sq(times(jump, n));
          if (options.tangential_jumps) {
            const double tj = dot(eval_vector_poly(kb, kc, x) - eval_vector_poly(nkb, kproxy[nbc], x), t);
            edge2 += he * eq.weights[g] * tj * tj;
          }
        }
      } else if (e.tag == BoundaryTag::Neumann) {
        for (std::size_t g = 0; g < eq.size(); ++g) {
          const Point2 x = eq.points[g];
          edge1 += he * eq.weights[g] * sq(times(stress(st, c, x, mu), n) - data.traction_bc(x, n));
        }
      } else {
        for (std::size_t g = 0; g < eq.size(); ++g) {
          const Point2 x = eq.points[g];
          const double dv = data.concentration_bc(x) - scalar_at(db, phl, x);
          const double dt = dot(data.concentration_bc_gradient(x) - eval_vector_poly(kb, kc, x), t);
          edge2 += he * eq.weights[g] * (dv * dv + dt * dt);
        }
      }
    }

    li.xi1_sq = edge1 + hE * hE * vol1;
    li.eta1_sq = hE * hE * eta1;
    li.lam1_sq = lam1;
    const Eigen::VectorXd ul = st.local_u(c);
    li.s1_sq = 2.0 * mu * op.elasticity.stabilisation_energy(ul);
    li.xi2_sq = edge2 + hE * hE * (vol2 + rot2);
    li.eta2_sq = eta2;
    li.lam2_sq = lam2;
    li.s2_sq = trace_mean * op.diffusion.stabilisation_energy(zl);
    li.combine(prm);
  });
  return out;
}

GlobalEstimate global_estimate(const std::vector<LocalIndicators>& locals, const ModelParameters& prm) {
  GlobalEstimate g;
  const double two_mu = 2.0 * prm.mu;
  for (const LocalIndicators& l : locals) {
    g.theta_sq += l.theta_sq;
    g.xi_sq += l.xi1_sq / two_mu + prm.M * l.xi2_sq;
    g.eta_sq += l.eta1_sq / two_mu + prm.M * l.eta2_sq;
    g.lambda_sq += two_mu * l.lam1_sq + prm.M * l.lam2_sq;
    g.s_sq += l.s1_sq + l.s2_sq;
  }
  return g;
}

TrueError true_error(const SystemState& st, const ManufacturedProblem* problem) {
  if (problem == nullptr) raise(ErrorCode::MissingExactSolution, "true error needs an exact solution");
  const Discretisation& disc = *st.disc;
  const ModelParameters& prm = problem->params();
  const std::size_t nc = disc.num_cells();
  std::vector<TrueError> parts(nc);
  parallel_for(nc, [&](std::size_t c) {
    const CellOperators& op = disc.cell(c);
    const Eigen::VectorXd divz = op.diffusion.div * st.local_zeta(c);
    const ScaledMonomials& db = op.diffusion.basis;
    TrueError& t = parts[c];
    for (std::size_t i = 0; i < op.quadrature.size(); ++i) {
      const Point2 x = op.quadrature.points[i];
      const double w = op.quadrature.weights[i];
      const ExactValues e = problem->evaluate(x);
      const Eigen::Matrix2d de = 0.5 * (e.grad_u + e.grad_u.transpose()) - st.strain(c, x);
      t.u_sq += w * de.squaredNorm();
      const double dp = e.p - st.pressure(c, x);
      t.p_sq += w * dp * dp;
      const Point2 dz = e.zeta - st.flux(c, x);
      t.zeta_sq += w * dot(dz, times(e.mobility.inverse(), dz));
      const double dd = e.div_zeta - scalar_at(db, divz, x);
      t.div_sq += w * dd * dd;
      const double df = e.phi - st.concentration(c, x);
      t.phi_sq += w * df * df;
    }
  });
  TrueError total;
  for (const TrueError& t : parts) {
    total.u_sq += t.u_sq;
    total.p_sq += t.p_sq;
    total.zeta_sq += t.zeta_sq;
    total.div_sq += t.div_sq;
    total.phi_sq += t.phi_sq;
  }
  total.u_sq *= 2.0 * prm.mu;
  total.p_sq *= 1.0 / (2.0 * prm.mu) + 1.0 / prm.lambda;
  total.div_sq *= prm.M;
  total.phi_sq *= 1.0 / prm.M + prm.theta;
  return total;
}

double effectivity(double theta, double error) {
  if (!(error > 0.0)) raise(ErrorCode::ZeroError, "effectivity needs a positive error");
  return theta / error;
}

}  // namespace vemsad

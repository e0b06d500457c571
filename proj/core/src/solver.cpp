#include "vemsad/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vemsad/error.hpp"
#include "vemsad/parallel.hpp"

namespace vemsad {

// ---------------------------------------------------------------------------
// Discretisation and state

Discretisation::Discretisation(std::shared_ptr<const PolyMesh> mesh, Orders orders)
    : mesh_(std::move(mesh)), orders_(orders) {
  if (!mesh_) raise(ErrorCode::InvalidArgument, "null mesh");
  el_ = make_elasticity_space(*mesh_, orders.k1);
  df_ = make_diffusion_space(*mesh_, orders.k2);
  quad_degree_ = 2 * std::max(orders.k1, orders.k2) + 4;
  cells_.resize(mesh_->num_cells());
  parallel_for(cells_.size(), [&](std::size_t c) {
    CellOperators& op = cells_[c];
    op.geometry = mesh_->cell_geometry(static_cast<int>(c));
    op.elasticity = local_elasticity(op.geometry, orders.k1);
    op.diffusion = local_diffusion(op.geometry, orders.k2);
    op.quadrature = polygon_quadrature(op.geometry, quad_degree_);
  });
}

namespace {

double scalar_poly(const ScaledMonomials& basis, const Eigen::VectorXd& coeffs, int degree, Point2 x) {
  Eigen::VectorXd m(num_monomials(degree));
  const Point2 s = basis.to_local(x);
  eval_scaled_monomials(degree, s.x, s.y, m.data());
  return m.dot(coeffs);
}

}  // namespace

void SystemState::refresh_projections() {
  const std::size_t n = disc->num_cells();
  u_proj.resize(n);
  zeta_proj.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    u_proj[c] = disc->cell(c).elasticity.pi_eps * local_u(c);
    zeta_proj[c] = disc->cell(c).diffusion.pi0 * local_zeta(c);
  }
}

Eigen::VectorXd SystemState::local_u(std::size_t c) const {
  const auto& dofs = disc->elasticity().cell_dofs[c];
  Eigen::VectorXd out(static_cast<long>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) out(static_cast<long>(i)) = u(dofs[i]);
  return out;
}

Eigen::VectorXd SystemState::local_zeta(std::size_t c) const {
  const auto& dofs = disc->diffusion().cell_dofs[c];
  const auto& signs = disc->diffusion().cell_signs[c];
  Eigen::VectorXd out(static_cast<long>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) out(static_cast<long>(i)) = signs[i] * zeta(dofs[i]);
  return out;
}

Eigen::VectorXd SystemState::local_p(std::size_t c) const {
  return p.segment(disc->elasticity().pressure_offset[c], num_monomials(disc->orders().k1 - 1));
}

Eigen::VectorXd SystemState::local_phi(std::size_t c) const {
  return phi.segment(disc->diffusion().concentration_offset[c], num_monomials(disc->orders().k2));
}

Eigen::Matrix2d SystemState::strain(std::size_t c, Point2 x) const {
  const Eigen::Matrix2d j = eval_vector_poly_jacobian(disc->cell(c).elasticity.basis, u_proj[c], x);
  return 0.5 * (j + j.transpose());
}

double SystemState::pressure(std::size_t c, Point2 x) const {
  return scalar_poly(disc->cell(c).elasticity.basis, local_p(c), disc->orders().k1 - 1, x);
}

double SystemState::concentration(std::size_t c, Point2 x) const {
  return scalar_poly(disc->cell(c).diffusion.basis, local_phi(c), disc->orders().k2, x);
}

Point2 SystemState::flux(std::size_t c, Point2 x) const {
  return eval_vector_poly(disc->cell(c).diffusion.basis, zeta_proj[c], x);
}

SystemState zero_state(std::shared_ptr<const Discretisation> disc) {
  SystemState s;
  s.disc = std::move(disc);
  s.u = Eigen::VectorXd::Zero(s.disc->elasticity().num_displacement);
  s.p = Eigen::VectorXd::Zero(s.disc->elasticity().num_pressure);
  s.zeta = Eigen::VectorXd::Zero(s.disc->diffusion().num_flux);
  s.phi = Eigen::VectorXd::Zero(s.disc->diffusion().num_concentration);
  s.refresh_projections();
  return s;
}

SystemState interpolate_state(std::shared_ptr<const Discretisation> disc, const ManufacturedProblem& problem) {
  SystemState s = zero_state(std::move(disc));
  const Discretisation& d = *s.disc;
  const int qd = d.quadrature_degree();
  const VectorField uf{[&](Point2 x) { return problem.evaluate(x).u; },
                       [&](Point2 x) { return problem.evaluate(x).grad_u.trace(); }};
  for (std::size_t c = 0; c < d.num_cells(); ++c) {
    const CellOperators& op = d.cell(c);
    const Eigen::VectorXd ul = interpolate_elasticity(op.elasticity.layout, op.geometry, uf, qd);
    const auto& ud = d.elasticity().cell_dofs[c];
    for (std::size_t i = 0; i < ud.size(); ++i) s.u(ud[i]) = ul(static_cast<long>(i));
    const Eigen::VectorXd zl =
        interpolate_diffusion(op.diffusion.layout, op.geometry, [&](Point2 x) { return problem.evaluate(x).zeta; }, qd);
    const auto& zd = d.diffusion().cell_dofs[c];
    const auto& zs = d.diffusion().cell_signs[c];
    for (std::size_t i = 0; i < zd.size(); ++i) s.zeta(zd[i]) = zs[i] * zl(static_cast<long>(i));
    const Eigen::VectorXd pm = monomial_moments(op.elasticity.basis, op.geometry, d.orders().k1 - 1,
                                                [&](Point2 x) { return problem.evaluate(x).p; }, qd);
    s.p.segment(d.elasticity().pressure_offset[c], pm.size()) = op.elasticity.c.ldlt().solve(pm);
    const Eigen::VectorXd fm = monomial_moments(op.diffusion.basis, op.geometry, d.orders().k2,
                                                [&](Point2 x) { return problem.evaluate(x).phi; }, qd);
    s.phi.segment(d.diffusion().concentration_offset[c], fm.size()) = op.diffusion.c.ldlt().solve(fm);
  }
  s.refresh_projections();
  return s;
}

// ---------------------------------------------------------------------------
// Linear algebra

void ReducedSolver::factorize(const LinearSystem& system) {
  const long n = system.matrix.rows();
  if (system.matrix.cols() != n || system.rhs.size() != n || static_cast<long>(system.fixed.size()) != n ||
      system.fixed_values.size() != n)
    raise(ErrorCode::DofMismatch, "linear system dimensions disagree");
  const bool same_layout = analysed_ && static_cast<long>(free_index_.size()) == n &&
                           std::equal(system.fixed.begin(), system.fixed.end(), free_index_.begin(),
                                      [](char f, int idx) { return (f != 0) == (idx < 0); });
  if (!same_layout) {
    free_index_.assign(static_cast<std::size_t>(n), -1);
    full_index_.clear();
    for (long i = 0; i < n; ++i)
      if (!system.fixed[static_cast<std::size_t>(i)]) {
        free_index_[static_cast<std::size_t>(i)] = static_cast<int>(full_index_.size());
        full_index_.push_back(static_cast<int>(i));
      }
  }
  const long nf = static_cast<long>(full_index_.size());
  std::vector<int> fixed_index(static_cast<std::size_t>(n), -1);
  int nfixed = 0;
  for (long i = 0; i < n; ++i)
    if (free_index_[static_cast<std::size_t>(i)] < 0) fixed_index[static_cast<std::size_t>(i)] = nfixed++;

  std::vector<Eigen::Triplet<double>> red, cpl;
  red.reserve(static_cast<std::size_t>(system.matrix.nonZeros()));
  for (int col = 0; col < system.matrix.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, col); it; ++it) {
      const int fi = free_index_[static_cast<std::size_t>(it.row())];
      if (fi < 0) continue;
      const int fj = free_index_[static_cast<std::size_t>(col)];
      if (fj >= 0)
        red.emplace_back(fi, fj, it.value());
      else
        cpl.emplace_back(fi, fixed_index[static_cast<std::size_t>(col)], it.value());
    }
  Eigen::SparseMatrix<double> a(nf, nf);
  a.setFromTriplets(red.begin(), red.end());
  a.makeCompressed();
  coupling_.resize(nf, nfixed);
  coupling_.setFromTriplets(cpl.begin(), cpl.end());

  const bool same_pattern = same_layout && reduced_.rows() == nf && reduced_.nonZeros() == a.nonZeros() &&
                            std::equal(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros(), reduced_.innerIndexPtr()) &&
                            std::equal(a.outerIndexPtr(), a.outerIndexPtr() + nf + 1, reduced_.outerIndexPtr());
  reduced_ = std::move(a);
  if (nf == 0) {
    analysed_ = true;
    return;
  }
  if (!same_pattern) lu_.analyzePattern(reduced_);
  lu_.factorize(reduced_);
  analysed_ = true;
  if (lu_.info() != Eigen::Success) {
    std::ostringstream os;
    os << "sparse LU failed on a system of size " << nf << ": " << lu_.lastErrorMessage();
    raise(ErrorCode::SingularSystem, os.str());
  }
}

Eigen::VectorXd ReducedSolver::solve(const LinearSystem& system) const {
  const long n = system.matrix.rows();
  if (!analysed_ || static_cast<long>(free_index_.size()) != n)
    raise(ErrorCode::DofMismatch, "solver not factorised for this system");
  const long nf = static_cast<long>(full_index_.size());
  Eigen::VectorXd fixed_vals(coupling_.cols());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (long i = 0, k = 0; i < n; ++i)
    if (free_index_[static_cast<std::size_t>(i)] < 0) {
      fixed_vals(k++) = system.fixed_values(i);
      x(i) = system.fixed_values(i);
    }
  if (nf == 0) return x;
  Eigen::VectorXd b(nf);
  for (long r = 0; r < nf; ++r) b(r) = system.rhs(full_index_[static_cast<std::size_t>(r)]);
  if (coupling_.cols() > 0) b -= coupling_ * fixed_vals;
  const double bnorm = b.norm();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(nf);
  if (bnorm > 0.0) {
    y = lu_.solve(b);
    double rel = (b - reduced_ * y).norm() / bnorm;
    for (int step = 0; step < 3 && rel > 1e-12 && std::isfinite(rel); ++step) {
      y += lu_.solve(b - reduced_ * y);
      rel = (b - reduced_ * y).norm() / bnorm;
    }
    if (!std::isfinite(rel) || !y.allFinite())
      raise(ErrorCode::SingularSystem, "sparse LU produced a non-finite solution");
    if (rel > 1e-10) {
      std::ostringstream os;
      os << "relative residual " << rel << " exceeds 1e-10";
      raise(ErrorCode::ResidualTooLarge, os.str());
    }
  }
  for (long r = 0; r < nf; ++r) x(full_index_[static_cast<std::size_t>(r)]) = y(r);
  return x;
}

Eigen::VectorXd solve_linear(const LinearSystem& system) {
  ReducedSolver s;
  s.factorize(system);
  return s.solve(system);
}

// ---------------------------------------------------------------------------
// Assembly

namespace {

Eigen::VectorXd pressure_source(const Discretisation& disc, const ProblemData& data, const SystemState& state) {
  const int k1 = disc.orders().k1;
  const int np = num_monomials(k1 - 1);
  const double inv_lambda = 1.0 / data.params.lambda;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(disc.elasticity().num_pressure);
  parallel_for(disc.num_cells(), [&](std::size_t c) {
    const CellOperators& op = disc.cell(c);
    Eigen::VectorXd m(np);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(np);
    for (std::size_t q = 0; q < op.quadrature.size(); ++q) {
      const Point2 x = op.quadrature.points[q];
      const Point2 s = op.elasticity.basis.to_local(x);
      eval_scaled_monomials(k1 - 1, s.x, s.y, m.data());
      acc += op.quadrature.weights[q] * data.ell(state.concentration(c, x)) * m;
    }
    g.segment(disc.elasticity().pressure_offset[c], np) = -inv_lambda * acc;
  });
  return g;
}

}  // namespace

LinearSystem assemble_elasticity(const Discretisation& disc, const ProblemData& data, const SystemState& state) {
  const ElasticitySpace& sp = disc.elasticity();
  const PolyMesh& mesh = disc.mesh();
  const int k1 = disc.orders().k1;
  const double mu = data.params.mu;
  const double inv_lambda = 1.0 / data.params.lambda;
  const int nu = sp.num_displacement;
  const std::size_t nc = disc.num_cells();
  if (state.phi.size() != disc.diffusion().num_concentration)
    raise(ErrorCode::DofMismatch, "concentration vector does not match the mesh");

  std::vector<Eigen::MatrixXd> ak(nc);
  std::vector<Eigen::VectorXd> fk(nc);
  parallel_for(nc, [&](std::size_t c) {
    const CellOperators& op = disc.cell(c);
    ak[c] = op.elasticity.stiffness(mu);
    Eigen::VectorXd f = local_load_elasticity(op.elasticity, op.geometry, data.body_force, disc.quadrature_degree());
    const PolyCell& pc = mesh.cells()[c];
    for (std::size_t i = 0; i < pc.edges.size(); ++i) {
      if (mesh.edge(pc.edges[i]).tag != BoundaryTag::Neumann) continue;
      const Point2 a = op.geometry.vertex(i), b = op.geometry.vertex(i + 1);
      const Point2 n = op.geometry.outward_normal(i);
      for (int comp = 0; comp < 2; ++comp) {
        const auto mom = lobatto_edge_moments(
            a, b, k1, [&](Point2 x) { const Point2 t = data.traction_bc(x, n); return comp == 0 ? t.x : t.y; },
            k1 + 3);
        for (int l = 0; l <= k1; ++l)
          f(op.elasticity.layout.edge_node_dof(static_cast<int>(i), l, comp)) += mom[static_cast<std::size_t>(l)];
      }
    }
    fk[c] = std::move(f);
  });

  LinearSystem sys;
  const int n = sp.size();
  sys.rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t c = 0; c < nc; ++c) {
    const CellOperators& op = disc.cell(c);
    const auto& dofs = sp.cell_dofs[c];
    const int po = nu + sp.pressure_offset[c];
    const long nl = static_cast<long>(dofs.size());
    for (long i = 0; i < nl; ++i) {
      sys.rhs(dofs[static_cast<std::size_t>(i)]) += fk[c](i);
      for (long j = 0; j < nl; ++j)
        trip.emplace_back(dofs[static_cast<std::size_t>(i)], dofs[static_cast<std::size_t>(j)], ak[c](i, j));
    }
    const Eigen::MatrixXd& b = op.elasticity.b;
    for (long a = 0; a < b.rows(); ++a) {
      for (long j = 0; j < nl; ++j) {
        if (b(a, j) == 0.0) continue;
        trip.emplace_back(po + static_cast<int>(a), dofs[static_cast<std::size_t>(j)], b(a, j));
        trip.emplace_back(dofs[static_cast<std::size_t>(j)], po + static_cast<int>(a), b(a, j));
      }
      for (long bb = 0; bb < b.rows(); ++bb)
        trip.emplace_back(po + static_cast<int>(a), po + static_cast<int>(bb), -inv_lambda * op.elasticity.c(a, bb));
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  sys.rhs.tail(sp.num_pressure) = pressure_source(disc, data, state);

  sys.fixed.assign(static_cast<std::size_t>(n), 0);
  sys.fixed_values = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < nu; ++i) {
    if (!sp.dirichlet[static_cast<std::size_t>(i)]) continue;
    sys.fixed[static_cast<std::size_t>(i)] = 1;
    const Point2 v = data.displacement_bc(sp.dof_point[static_cast<std::size_t>(i)]);
    sys.fixed_values(i) = sp.dof_component[static_cast<std::size_t>(i)] == 0 ? v.x : v.y;
  }
  return sys;
}

void update_elasticity_rhs(LinearSystem& system, const Discretisation& disc, const ProblemData& data,
                           const SystemState& state) {
  system.rhs.tail(disc.elasticity().num_pressure) = pressure_source(disc, data, state);
}

std::vector<Eigen::Matrix2d> discrete_inverse_mobility(const SystemState& state, const ProblemData& data,
                                                       std::size_t c, const std::vector<Point2>& points) {
  std::vector<Eigen::Matrix2d> out;
  out.reserve(points.size());
  for (const Point2& x : points) out.push_back(data.inverse_mobility(state.strain(c, x), state.pressure(c, x), x));
  return out;
}

LinearSystem assemble_diffusion(const Discretisation& disc, const ProblemData& data, const SystemState& state) {
  const DiffusionSpace& sp = disc.diffusion();
  const PolyMesh& mesh = disc.mesh();
  const int k2 = disc.orders().k2;
  const int nz = sp.num_flux;
  const std::size_t nc = disc.num_cells();
  if (state.u.size() != disc.elasticity().num_displacement || state.u_proj.size() != nc)
    raise(ErrorCode::DofMismatch, "displacement state does not match the mesh");

  std::vector<Eigen::MatrixXd> ak(nc);
  std::vector<Eigen::VectorXd> fk(nc), gk(nc);
  parallel_for(nc, [&](std::size_t c) {
    const CellOperators& op = disc.cell(c);
    const auto coeff = discrete_inverse_mobility(state, data, c, op.quadrature.points);
    ak[c] = local_diffusion_stiffness(op.diffusion, op.quadrature.points, op.quadrature.weights, coeff);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(op.diffusion.layout.size());
    const PolyCell& pc = mesh.cells()[c];
    for (std::size_t i = 0; i < pc.edges.size(); ++i) {
      if (mesh.edge(pc.edges[i]).tag != BoundaryTag::Dirichlet) continue;
      const auto mom = lobatto_edge_moments(op.geometry.vertex(i), op.geometry.vertex(i + 1), k2,
                                            data.concentration_bc, k2 + 4);
      for (int l = 0; l <= k2; ++l)
        f(op.diffusion.layout.edge_dof(static_cast<int>(i), l)) += mom[static_cast<std::size_t>(l)];
    }
    fk[c] = std::move(f);
    gk[c] = -monomial_moments(op.diffusion.basis, op.geometry, k2, data.source, disc.quadrature_degree());
  });

  LinearSystem sys;
  const int n = sp.size();
  sys.rhs = Eigen::VectorXd::Zero(n);
  const double theta = data.params.theta;
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t c = 0; c < nc; ++c) {
    const CellOperators& op = disc.cell(c);
    const auto& dofs = sp.cell_dofs[c];
    const auto& sg = sp.cell_signs[c];
    const int po = nz + sp.concentration_offset[c];
    const long nl = static_cast<long>(dofs.size());
    for (long i = 0; i < nl; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      sys.rhs(dofs[ii]) += sg[ii] * fk[c](i);
      for (long j = 0; j < nl; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        trip.emplace_back(dofs[ii], dofs[jj], sg[ii] * sg[jj] * ak[c](i, j));
      }
    }
    const Eigen::MatrixXd& b = op.diffusion.div_moments;
    for (long a = 0; a < b.rows(); ++a) {
      sys.rhs(po + a) += gk[c](a);
      for (long j = 0; j < nl; ++j) {
        const double v = sg[static_cast<std::size_t>(j)] * b(a, j);
        if (v == 0.0) continue;
        trip.emplace_back(po + static_cast<int>(a), dofs[static_cast<std::size_t>(j)], v);
        trip.emplace_back(dofs[static_cast<std::size_t>(j)], po + static_cast<int>(a), v);
      }
      for (long bb = 0; bb < b.rows(); ++bb)
        trip.emplace_back(po + static_cast<int>(a), po + static_cast<int>(bb), -theta * op.diffusion.c(a, bb));
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();

  sys.fixed.assign(static_cast<std::size_t>(n), 0);
  sys.fixed_values = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < nz; ++i) {
    if (!sp.essential[static_cast<std::size_t>(i)]) continue;
    sys.fixed[static_cast<std::size_t>(i)] = 1;
    sys.fixed_values(i) =
        data.normal_flux_bc(sp.dof_point[static_cast<std::size_t>(i)], sp.dof_normal[static_cast<std::size_t>(i)]);
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Picard iteration

void PicardConfig::validate() const {
  if (!(tolerance > 0.0)) raise(ErrorCode::InvalidArgument, "Picard tolerance must be positive");
  if (max_iterations < 1) raise(ErrorCode::InvalidArgument, "Picard max_iterations must be >= 1");
  if (divergence_window < 1) raise(ErrorCode::InvalidArgument, "Picard divergence window must be >= 1");
}

double weighted_norm_sq(const Discretisation& disc, const ModelParameters& prm, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& p, const Eigen::VectorXd& zeta, const Eigen::VectorXd& phi,
                        const Eigen::SparseMatrix<double>& diffusion_matrix) {
  SystemState s;
  s.disc = std::shared_ptr<const Discretisation>(&disc, [](const Discretisation*) {});
  s.u = u;
  s.p = p;
  s.zeta = zeta;
  s.phi = phi;
  const double wp = 1.0 / (2.0 * prm.mu) + 1.0 / prm.lambda;
  const double wphi = 1.0 / prm.M + prm.theta;
  double total = 0.0;
  for (std::size_t c = 0; c < disc.num_cells(); ++c) {
    const CellOperators& op = disc.cell(c);
    const Eigen::VectorXd ul = s.local_u(c);
    const Eigen::VectorXd pl = s.local_p(c);
    const Eigen::VectorXd dz = op.diffusion.div * s.local_zeta(c);
    const Eigen::VectorXd fl = s.local_phi(c);
    total += ul.dot(op.elasticity.stiffness(prm.mu) * ul) + wp * pl.dot(op.elasticity.c * pl) +
             prm.M * dz.dot(op.diffusion.c * dz) + wphi * fl.dot(op.diffusion.c * fl);
  }
  Eigen::VectorXd ext = Eigen::VectorXd::Zero(diffusion_matrix.rows());
  ext.head(zeta.size()) = zeta;
  total += ext.dot(diffusion_matrix * ext);
  return total;
}

PicardResult picard_solve(std::shared_ptr<const Discretisation> disc, const ProblemData& data,
                          const PicardConfig& config) {
  config.validate();
  data.params.validate();
  PicardResult res;
  res.state = zero_state(disc);
  SystemState& st = res.state;
  const int nu = disc->elasticity().num_displacement;
  const int nz = disc->diffusion().num_flux;

  LinearSystem el = assemble_elasticity(*disc, data, st);
  ReducedSolver el_solver;
  el_solver.factorize(el);
  ReducedSolver df_solver;
  int growth = 0;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const Eigen::VectorXd u0 = st.u, p0 = st.p, z0 = st.zeta, f0 = st.phi;
    if (it > 1) update_elasticity_rhs(el, *disc, data, st);
    const Eigen::VectorXd x = el_solver.solve(el);
    st.u = x.head(nu);
    st.p = x.tail(disc->elasticity().num_pressure);
    st.refresh_projections();
    const LinearSystem df = assemble_diffusion(*disc, data, st);
    df_solver.factorize(df);
    const Eigen::VectorXd y = df_solver.solve(df);
    st.zeta = y.head(nz);
    st.phi = y.tail(disc->diffusion().num_concentration);
    st.refresh_projections();

    const double num = weighted_norm_sq(*disc, data.params, st.u - u0, st.p - p0, st.zeta - z0, st.phi - f0, df.matrix);
    const double den = weighted_norm_sq(*disc, data.params, st.u, st.p, st.zeta, st.phi, df.matrix);
    double inc = 0.0;
    if (num > 0.0) inc = den > 0.0 ? std::sqrt(num / den) : std::numeric_limits<double>::infinity();
    res.increments.push_back(inc);
    if (inc < config.tolerance) return res;
    if (it > 1 && inc > res.increments[res.increments.size() - 2]) {
      if (++growth >= config.divergence_window) {
        std::ostringstream os;
        os << "Picard increment grew " << growth << " times in a row (last " << inc << ")";
        raise(ErrorCode::PicardDiverged, os.str());
      }
    } else {
      growth = 0;
    }
  }
  std::ostringstream os;
  os << "Picard did not reach " << config.tolerance << " in " << config.max_iterations << " iterations (last "
     << res.increments.back() << ")";
  raise(ErrorCode::MaxIterations, os.str());
}

}  // namespace vemsad

#include "oracle_compare.hpp"

#include <algorithm>
#include <cmath>

#include "mixed_poisson_oracle.hpp"

namespace oracle {

std::shared_ptr<const vemsad::ManufacturedProblem> oracle_problem() {
  vemsad::ModelParameters prm;
  prm.theta = 0.0;
  return vemsad::polynomial_problem(prm, 2, 3, 17);
}

Comparison compare_diffusion_block(const vemsad::PolyMesh& mesh, const vemsad::ManufacturedProblem& problem) {
  using namespace vemsad;
  Input in;
  for (const Point2& v : mesh.vertices()) in.vertices.push_back({v.x, v.y});
  for (const PolyCell& c : mesh.cells()) in.cells.push_back(c.vertices);
  in.dirichlet = [](Pt m) { return std::abs(m[0]) < 1e-12 || std::abs(m[1]) < 1e-12; };
  in.phi_d = [&](Pt x) { return problem.evaluate({x[0], x[1]}).phi; };
  in.flux = [&](Pt x) {
    const Point2 z = problem.evaluate({x[0], x[1]}).zeta;
    return Pt{z.x, z.y};
  };
  in.source = [&](Pt x) { return problem.evaluate({x[0], x[1]}).g; };
  const std::vector<CellSolution> ref = solve(in);

  const auto disc = std::make_shared<const Discretisation>(std::make_shared<const PolyMesh>(mesh), Orders{2, 1});
  const ProblemData data = problem.data();
  const DiffusionSpace& sp = disc->diffusion();
  SystemState block = zero_state(disc);
  const Eigen::VectorXd x = solve_linear(assemble_diffusion(*disc, data, block));
  block.zeta = x.head(sp.num_flux);
  block.phi = x.tail(sp.num_concentration);
  const SystemState picard = picard_solve(disc, data).state;

  Comparison out;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const CellSolution& r = ref[c];
    const PolyCell& pc = mesh.cells()[c];
    // Oracle phi in raw monomials -> library basis ((x - xc) / h)^a.
    const Eigen::Vector3d phi{r.phi(0) + r.phi(1) * pc.centroid.x + r.phi(2) * pc.centroid.y, r.phi(1) * pc.diameter,
                              r.phi(2) * pc.diameter};
    out.scale = std::max({out.scale, r.flux_dofs.cwiseAbs().maxCoeff(), phi.cwiseAbs().maxCoeff()});
    out.entries += static_cast<std::size_t>(r.flux_dofs.size() + phi.size());
    out.flux_diff = std::max(out.flux_diff, (block.local_zeta(c) - r.flux_dofs).cwiseAbs().maxCoeff());
    out.phi_diff = std::max(out.phi_diff, (block.local_phi(c) - phi).cwiseAbs().maxCoeff());
    out.picard_diff = std::max({out.picard_diff, (picard.local_zeta(c) - r.flux_dofs).cwiseAbs().maxCoeff(),
                                (picard.local_phi(c) - phi).cwiseAbs().maxCoeff()});
  }
  return out;
}

}  // namespace oracle

#include "vemsad/spaces.hpp"

#include "vemsad/error.hpp"
#include "vemsad/polybasis.hpp"
#include "vemsad/quadrature.hpp"

namespace vemsad {

namespace {

std::vector<Point2> nodes_on(Point2 a, Point2 b, int k) {
  const LineRule& lob = gauss_lobatto(k);
  std::vector<Point2> out;
  for (double t : lob.nodes) out.push_back(a + (0.5 * (1.0 + t)) * (b - a));
  return out;
}

}  // namespace

ElasticitySpace make_elasticity_space(const PolyMesh& mesh, int k) {
  if (k < 2) raise(ErrorCode::OrderTooLow, "displacement order must be >= 2");
  ElasticitySpace s;
  s.order = k;
  const int nv = static_cast<int>(mesh.num_vertices());
  const int ne = static_cast<int>(mesh.num_edges());
  const int per_edge = 2 * (k - 1);
  const int num_div = num_monomials(k - 1) - 1;
  const int num_perp = num_monomials(k - 3);
  const int interior = num_div + num_perp;
  const int boundary_total = 2 * nv + per_edge * ne;
  s.num_displacement = boundary_total + interior * static_cast<int>(mesh.num_cells());
  s.dof_point.assign(static_cast<std::size_t>(s.num_displacement), Point2{});
  s.dof_component.assign(static_cast<std::size_t>(s.num_displacement), -1);
  s.dirichlet.assign(static_cast<std::size_t>(s.num_displacement), 0);

  for (int v = 0; v < nv; ++v)
    for (int c = 0; c < 2; ++c) {
      s.dof_point[static_cast<std::size_t>(2 * v + c)] = mesh.vertex(v);
      s.dof_component[static_cast<std::size_t>(2 * v + c)] = c;
    }
  for (int e = 0; e < ne; ++e) {
    const MeshEdge& E = mesh.edge(e);
    const auto nodes = nodes_on(mesh.vertex(E.vertices[0]), mesh.vertex(E.vertices[1]), k);
    const bool fixed = E.tag == BoundaryTag::Dirichlet;
    for (int j = 1; j < k; ++j)
      for (int c = 0; c < 2; ++c) {
        const auto g = static_cast<std::size_t>(2 * nv + per_edge * e + 2 * (j - 1) + c);
        s.dof_point[g] = nodes[static_cast<std::size_t>(j)];
        s.dof_component[g] = c;
        s.dirichlet[g] = fixed;
      }
    if (fixed)
      for (int end = 0; end < 2; ++end)
        for (int c = 0; c < 2; ++c) s.dirichlet[static_cast<std::size_t>(2 * E.vertices[end] + c)] = 1;
  }

  int next_pressure = 0;
  const int np = num_monomials(k - 1);
  for (std::size_t ci = 0; ci < mesh.num_cells(); ++ci) {
    const PolyCell& cell = mesh.cells()[ci];
    const int m = static_cast<int>(cell.vertices.size());
    std::vector<int> dofs(static_cast<std::size_t>(2 * m + per_edge * m + interior));
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < 2; ++c) dofs[static_cast<std::size_t>(2 * i + c)] = 2 * cell.vertices[static_cast<std::size_t>(i)] + c;
    for (int i = 0; i < m; ++i) {
      const int e = cell.edges[static_cast<std::size_t>(i)];
      const bool forward = cell.edge_signs[static_cast<std::size_t>(i)] > 0;
      for (int j = 1; j < k; ++j) {
        const int gj = forward ? j : k - j;
        for (int c = 0; c < 2; ++c)
          dofs[static_cast<std::size_t>(2 * m + per_edge * i + 2 * (j - 1) + c)] =
              2 * nv + per_edge * e + 2 * (gj - 1) + c;
      }
    }
    const int base = boundary_total + interior * static_cast<int>(ci);
    for (int a = 0; a < interior; ++a) dofs[static_cast<std::size_t>(2 * m + per_edge * m + a)] = base + a;
    s.cell_dofs.push_back(std::move(dofs));
    s.pressure_offset.push_back(next_pressure);
    next_pressure += np;
  }
  s.num_pressure = next_pressure;
  return s;
}

DiffusionSpace make_diffusion_space(const PolyMesh& mesh, int k) {
  if (k < 1) raise(ErrorCode::OrderTooLow, "flux order must be >= 1");
  DiffusionSpace s;
  s.order = k;
  const int ne = static_cast<int>(mesh.num_edges());
  const int num_grad = num_monomials(k) - 1;
  const int num_perp = num_monomials(k - 1);
  const int interior = num_grad + num_perp;
  const int boundary_total = (k + 1) * ne;
  s.num_flux = boundary_total + interior * static_cast<int>(mesh.num_cells());
  s.dof_point.assign(static_cast<std::size_t>(boundary_total), Point2{});
  s.dof_normal.assign(static_cast<std::size_t>(boundary_total), Point2{});
  s.essential.assign(static_cast<std::size_t>(s.num_flux), 0);
  for (int e = 0; e < ne; ++e) {
    const MeshEdge& E = mesh.edge(e);
    const auto nodes = nodes_on(mesh.vertex(E.vertices[0]), mesh.vertex(E.vertices[1]), k);
    for (int j = 0; j <= k; ++j) {
      const auto g = static_cast<std::size_t>((k + 1) * e + j);
      s.dof_point[g] = nodes[static_cast<std::size_t>(j)];
      s.dof_normal[g] = E.normal;
      s.essential[g] = E.tag == BoundaryTag::Neumann;
    }
  }
  int next = 0;
  const int nc = num_monomials(k);
  for (std::size_t ci = 0; ci < mesh.num_cells(); ++ci) {
    const PolyCell& cell = mesh.cells()[ci];
    const int m = static_cast<int>(cell.vertices.size());
    std::vector<int> dofs(static_cast<std::size_t>((k + 1) * m + interior));
    std::vector<double> signs(dofs.size(), 1.0);
    for (int i = 0; i < m; ++i) {
      const int e = cell.edges[static_cast<std::size_t>(i)];
      const bool forward = cell.edge_signs[static_cast<std::size_t>(i)] > 0;
      for (int l = 0; l <= k; ++l) {
        const auto li = static_cast<std::size_t>((k + 1) * i + l);
        dofs[li] = (k + 1) * e + (forward ? l : k - l);
        signs[li] = forward ? 1.0 : -1.0;
      }
    }
    const int base = boundary_total + interior * static_cast<int>(ci);
    for (int a = 0; a < interior; ++a) dofs[static_cast<std::size_t>((k + 1) * m + a)] = base + a;
    s.cell_dofs.push_back(std::move(dofs));
    s.cell_signs.push_back(std::move(signs));
    s.concentration_offset.push_back(next);
    next += nc;
  }
  s.num_concentration = next;
  return s;
}

}  // namespace vemsad

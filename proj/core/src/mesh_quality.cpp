#include <algorithm>
#include <cmath>
#include <limits>

#include "vemsad/geometry.hpp"

namespace vemsad {

namespace {

// Line n.x <= b with unit outward normal n.
struct HalfPlane {
  Point2 n;
  double b;
};

std::vector<HalfPlane> edge_half_planes(std::span<const Point2> loop) {
  std::vector<HalfPlane> planes;
  const std::size_t m = loop.size();
  const double scale = polygon_diameter(loop);
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 p = loop[i];
    const Point2 q = loop[(i + 1) % m];
    const Point2 t = q - p;
    const double len = norm(t);
    const Point2 n{t.y / len, -t.x / len};
    const HalfPlane h{n, dot(n, p)};
    // Collinear edges (hanging nodes) repeat the same constraint.
    const bool dup = std::any_of(planes.begin(), planes.end(), [&](const HalfPlane& o) {
      return dot(o.n, h.n) > 1.0 - 1e-12 && std::abs(o.b - h.b) <= 1e-12 * scale;
    });
    if (!dup) planes.push_back(h);
  }
  return planes;
}

bool solve3(const double a[3][3], const double rhs[3], double x[3]) {
  double m[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = a[i][j];
    m[i][3] = rhs[i];
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) < 1e-14) return false;
    for (int j = 0; j < 4; ++j) std::swap(m[c][j], m[piv][j]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (int j = c; j < 4; ++j) m[r][j] -= f * m[c][j];
    }
  }
  for (int i = 0; i < 3; ++i) x[i] = m[i][3] / m[i][i];
  return true;
}

}  // namespace

std::pair<Point2, double> kernel_chebyshev_disk(std::span<const Point2> loop) {
  // max r subject to n_i.x + r <= b_i; the optimum sits where three
  // constraints are active, so enumerate triples.
  const auto planes = edge_half_planes(loop);
  const double scale = polygon_diameter(loop);
  const double tol = 1e-12 * scale;
  Point2 best_c = polygon_centroid(loop);
  double best_r = -std::numeric_limits<double>::infinity();
  const std::size_t m = planes.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        const HalfPlane* h[3] = {&planes[i], &planes[j], &planes[k]};
        double a[3][3], rhs[3], x[3];
        for (int r = 0; r < 3; ++r) {
          a[r][0] = h[r]->n.x;
          a[r][1] = h[r]->n.y;
          a[r][2] = 1.0;
          rhs[r] = h[r]->b;
        }
        if (!solve3(a, rhs, x)) continue;
        if (x[2] <= best_r) continue;
        const Point2 c{x[0], x[1]};
        bool feasible = true;
        for (const auto& p : planes)
          if (dot(p.n, c) + x[2] > p.b + tol) {
            feasible = false;
            break;
          }
        if (feasible) {
          best_r = x[2];
          best_c = c;
        }
      }
  if (!std::isfinite(best_r)) best_r = 0.0;
  return {best_c, best_r};
}

bool MeshQualityReport::all_ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellQuality& c) { return c.ok(); });
}

std::size_t MeshQualityReport::num_violations() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const CellQuality& c) { return !c.ok(); }));
}

double MeshQualityReport::achieved_rho() const {
  double rho = std::numeric_limits<double>::infinity();
  for (const auto& c : cells) {
    if (!c.star_shaped) return 0.0;
    rho = std::min(rho, std::min(c.chebyshev_radius, c.min_edge) / c.diameter);
  }
  return cells.empty() ? 0.0 : rho;
}

MeshQualityReport check_mesh_assumptions(const PolyMesh& mesh, double rho) {
  MeshQualityReport report;
  report.rho = rho;
  report.cells.reserve(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const PolyCell& cell = mesh.cells()[c];
    std::vector<Point2> loop;
    for (int v : cell.vertices) loop.push_back(mesh.vertex(v));
    CellQuality q;
    q.cell = static_cast<int>(c);
    q.diameter = cell.diameter;
    q.chebyshev_radius = kernel_chebyshev_disk(loop).second;
    q.min_edge = std::numeric_limits<double>::infinity();
    for (int e : cell.edges) q.min_edge = std::min(q.min_edge, mesh.edge(e).length);
    q.star_shaped = q.chebyshev_radius > 0.0;
    q.disk_ok = q.chebyshev_radius >= rho * q.diameter;
    q.edges_ok = q.min_edge >= rho * q.diameter;
    report.cells.push_back(q);
  }
  return report;
}

}  // namespace vemsad

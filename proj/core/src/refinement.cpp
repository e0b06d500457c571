#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vemsad/error.hpp"
#include "vemsad/geometry.hpp"

namespace vemsad {

namespace {

// Hanging vertices sit on a straight angle and do not start a new side.
std::vector<std::size_t> corner_positions(const std::vector<Point2>& pts) {
  const std::size_t m = pts.size();
  std::vector<std::size_t> corners;
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 a = pts[i] - pts[(i + m - 1) % m];
    const Point2 b = pts[(i + 1) % m] - pts[i];
    const bool straight = std::abs(cross(a, b)) <= 1e-10 * norm(a) * norm(b) && dot(a, b) > 0.0;
    if (!straight) corners.push_back(i);
  }
  return corners;
}

// Points inserted into one mesh edge, by parameter along its stored direction.
struct EdgeInserts {
  std::vector<std::pair<double, int>> points;

  int add(double t, Point2 p, std::vector<Point2>& vertices) {
    for (const auto& [s, id] : points)
      if (std::abs(s - t) < 1e-12) return id;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(p);
    points.emplace_back(t, id);
    std::sort(points.begin(), points.end());
    return id;
  }
};

}  // namespace

PolyMesh refine_cells(const PolyMesh& mesh, std::span<const int> marked, RefinementReport* report) {
  if (marked.empty()) raise(ErrorCode::EmptyMarking, "no cells marked for refinement");
  std::vector<char> is_marked(mesh.num_cells(), 0);
  for (int c : marked) {
    if (c < 0 || static_cast<std::size_t>(c) >= mesh.num_cells())
      raise(ErrorCode::InvalidArgument, "marked cell id out of range");
    is_marked[static_cast<std::size_t>(c)] = 1;
  }

  // Pass 1: one midpoint per geometric side of every marked cell. A side is
  // the chain of edges between two corners; a vertex already at its midpoint
  // is reused, otherwise the point is inserted into the edge containing it.
  std::vector<Point2> vertices = mesh.vertices();
  std::vector<EdgeInserts> inserts(mesh.num_edges());
  std::vector<std::vector<int>> side_mid(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    if (!is_marked[c]) continue;
    const PolyCell& cell = mesh.cells()[c];
    const std::size_t m = cell.vertices.size();
    std::vector<Point2> pts;
    for (int v : cell.vertices) pts.push_back(mesh.vertex(v));
    const auto corners = corner_positions(pts);
    for (std::size_t s = 0; s < corners.size(); ++s) {
      const std::size_t first = corners[s];
      const std::size_t count = (corners[(s + 1) % corners.size()] + m - first - 1) % m + 1;
      double length = 0.0;
      for (std::size_t j = 0; j < count; ++j) length += distance(pts[(first + j) % m], pts[(first + j + 1) % m]);
      const double half = 0.5 * length;
      double walked = 0.0;
      int mid = -1;
      for (std::size_t j = 0; j < count && mid < 0; ++j) {
        const std::size_t i = (first + j) % m;
        const double len = distance(pts[i], pts[(i + 1) % m]);
        if (j > 0 && std::abs(walked - half) <= 1e-12 * length) {
          mid = cell.vertices[i];
        } else if (walked + len > half + 1e-12 * length) {
          const double local = (half - walked) / len;
          const bool forward = cell.edge_signs[i] > 0;
          const Point2 p = pts[i] + local * (pts[(i + 1) % m] - pts[i]);
          mid = inserts[static_cast<std::size_t>(cell.edges[i])].add(forward ? local : 1.0 - local, p, vertices);
        }
        walked += len;
      }
      side_mid[c].push_back(mid);
    }
  }

  // Cell loops with every inserted point in traversal order.
  auto expanded_loop = [&](const PolyCell& cell) {
    std::vector<int> loop;
    for (std::size_t i = 0; i < cell.vertices.size(); ++i) {
      loop.push_back(cell.vertices[i]);
      const auto& pts = inserts[static_cast<std::size_t>(cell.edges[i])].points;
      if (cell.edge_signs[i] > 0)
        for (const auto& pt : pts) loop.push_back(pt.second);
      else
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) loop.push_back(it->second);
    }
    return loop;
  };

  RefinementReport local;
  std::vector<std::vector<int>> cells;
  // Children are emitted in the position of their parent so every sub-edge is
  // first met by a child of the parent edge's first cell, which keeps the
  // stored edge orientation (and normal) of the parent.
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const PolyCell& cell = mesh.cells()[c];
    std::vector<int> loop = expanded_loop(cell);
    if (!is_marked[c]) {
      cells.push_back(std::move(loop));
      continue;
    }
    std::vector<Point2> pts;
    for (int v : cell.vertices) pts.push_back(mesh.vertex(v));
    Point2 centre = cell.centroid;
    if (!is_convex(pts)) {
      const auto [kc, r] = kernel_chebyshev_disk(pts);
      if (r <= 0.0) {
        std::ostringstream os;
        os << "cell " << c << " is not star-shaped and cannot be split";
        raise(ErrorCode::NonConvexCell, os.str());
      }
      centre = kc;
      ++local.kernel_fan_cells;
    }
    const int ci = static_cast<int>(vertices.size());
    vertices.push_back(centre);

    const std::size_t n = loop.size();
    auto position = [&](int v) {
      return static_cast<std::size_t>(std::find(loop.begin(), loop.end(), v) - loop.begin());
    };
    const auto& mids = side_mid[c];
    const std::size_t sides = mids.size();
    for (std::size_t s = 0; s < sides; ++s) {
      // Child around corner s: previous side midpoint -> corner -> next side midpoint.
      const std::size_t from = position(mids[(s + sides - 1) % sides]);
      const std::size_t to = position(mids[s]);
      std::vector<int> child;
      for (std::size_t i = from;; i = (i + 1) % n) {
        child.push_back(loop[i]);
        if (i == to) break;
      }
      child.push_back(ci);
      cells.push_back(std::move(child));
    }
    ++local.refined_cells;
  }

  PolyMesh::TagMap tags;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const MeshEdge& edge = mesh.edges()[e];
    if (!edge.is_boundary()) continue;
    int prev = edge.vertices[0];
    for (const auto& pt : inserts[e].points) {
      tags.emplace(edge_key(prev, pt.second), edge.tag);
      prev = pt.second;
    }
    tags.emplace(edge_key(prev, edge.vertices[1]), edge.tag);
  }
  if (report) *report = local;
  return PolyMesh::build(std::move(vertices), std::move(cells), tags);
}

PolyMesh refine_uniform(const PolyMesh& mesh, RefinementReport* report) {
  std::vector<int> all(mesh.num_cells());
  std::iota(all.begin(), all.end(), 0);
  return refine_cells(mesh, all, report);
}

}  // namespace vemsad

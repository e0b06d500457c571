#include <algorithm>
#include <numeric>
#include <sstream>

#include "vemsad/error.hpp"
#include "vemsad/geometry.hpp"

namespace vemsad {

char tag_letter(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Dirichlet: return 'D';
    case BoundaryTag::Neumann: return 'N';
    case BoundaryTag::Interior: break;
  }
  return 'I';
}

double signed_area(std::span<const Point2> loop) {
  double a = 0.0;
  const std::size_t m = loop.size();
  for (std::size_t i = 0; i < m; ++i) a += cross(loop[i], loop[(i + 1) % m]);
  return 0.5 * a;
}

Point2 polygon_centroid(std::span<const Point2> loop) {
  // Shift to the first vertex to limit cancellation for small cells.
  const Point2 o = loop[0];
  double a = 0.0, cx = 0.0, cy = 0.0;
  const std::size_t m = loop.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 p = loop[i] - o;
    const Point2 q = loop[(i + 1) % m] - o;
    const double w = cross(p, q);
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  return {o.x + cx / (3.0 * a), o.y + cy / (3.0 * a)};
}

double polygon_diameter(std::span<const Point2> loop) {
  double d = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i)
    for (std::size_t j = i + 1; j < loop.size(); ++j) d = std::max(d, distance(loop[i], loop[j]));
  return d;
}

bool is_convex(std::span<const Point2> loop, double rel_tol) {
  const std::size_t m = loop.size();
  const double scale = polygon_diameter(loop);
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 a = loop[(i + m - 1) % m];
    const Point2 b = loop[i];
    const Point2 c = loop[(i + 1) % m];
    if (cross(b - a, c - b) < -rel_tol * scale * scale) return false;
  }
  return true;
}

CellGeometry make_cell_geometry(std::vector<Point2> loop) {
  CellGeometry g;
  g.area = signed_area(loop);
  if (g.area < 0.0) {
    std::reverse(loop.begin(), loop.end());
    g.area = -g.area;
  }
  g.centroid = polygon_centroid(loop);
  g.diameter = polygon_diameter(loop);
  g.vertices = std::move(loop);
  return g;
}

Point2 CellGeometry::outward_normal(std::size_t edge) const {
  const Point2 t = vertex(edge + 1) - vertex(edge);
  const double len = norm(t);
  return {t.y / len, -t.x / len};
}

double CellGeometry::edge_length(std::size_t edge) const {
  return distance(vertex(edge + 1), vertex(edge));
}

namespace {

bool segments_cross(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  auto orient = [](Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); };
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

void validate_loop(const std::vector<Point2>& vertices, std::vector<int>& loop, std::size_t c) {
  auto fail = [&](const std::string& why) {
    std::ostringstream os;
    os << "cell " << c << ": " << why;
    raise(ErrorCode::NonSimplePolygon, os.str());
  };
  if (loop.size() < 3) fail("fewer than 3 vertices");
  for (int v : loop)
    if (v < 0 || static_cast<std::size_t>(v) >= vertices.size()) fail("vertex id out of range");
  std::vector<int> sorted = loop;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail("repeated vertex");

  std::vector<Point2> pts;
  pts.reserve(loop.size());
  for (int v : loop) pts.push_back(vertices[static_cast<std::size_t>(v)]);
  const double a = signed_area(pts);
  const double scale = polygon_diameter(pts);
  if (std::abs(a) <= 1e-14 * scale * scale) fail("zero area");
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (segments_cross(pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m]))
        fail("self-intersecting boundary");
    }
  if (a < 0.0) std::reverse(loop.begin(), loop.end());
}

}  // namespace

template <typename Tagger>
PolyMesh PolyMesh::build_impl(std::vector<Point2> vertices, std::vector<std::vector<int>> cells,
                              Tagger&& tagger) {
  PolyMesh mesh;
  for (std::size_t c = 0; c < cells.size(); ++c) validate_loop(vertices, cells[c], c);

  mesh.vertices_ = std::move(vertices);
  mesh.cells_.resize(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto& cell = mesh.cells_[c];
    cell.vertices = std::move(cells[c]);
    const std::size_t m = cell.vertices.size();
    cell.edges.resize(m);
    cell.edge_signs.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const int a = cell.vertices[i];
      const int b = cell.vertices[(i + 1) % m];
      const EdgeKey key = edge_key(a, b);
      auto it = mesh.edge_index_.find(key);
      if (it == mesh.edge_index_.end()) {
        MeshEdge e;
        e.vertices = {a, b};
        e.cells = {static_cast<int>(c), -1};
        const int id = static_cast<int>(mesh.edges_.size());
        mesh.edges_.push_back(e);
        mesh.edge_index_.emplace(key, id);
        cell.edges[i] = id;
        cell.edge_signs[i] = 1;
      } else {
        MeshEdge& e = mesh.edges_[static_cast<std::size_t>(it->second)];
        std::ostringstream os;
        os << "edge (" << a << "," << b << ")";
        if (e.cells[1] >= 0) raise(ErrorCode::InconsistentSharedEdge, os.str() + " shared by more than two cells");
        if (e.vertices[0] == a) raise(ErrorCode::InconsistentSharedEdge, os.str() + " traversed in the same direction by two cells");
        e.cells[1] = static_cast<int>(c);
        cell.edges[i] = it->second;
        cell.edge_signs[i] = -1;
      }
    }
  }

  for (auto& e : mesh.edges_) {
    const Point2 a = mesh.vertex(e.vertices[0]);
    const Point2 b = mesh.vertex(e.vertices[1]);
    e.length = distance(a, b);
    e.tangent = (1.0 / e.length) * (b - a);
    e.normal = {e.tangent.y, -e.tangent.x};
    if (e.is_boundary()) {
      e.tag = tagger(e, a, b);
      if (e.tag == BoundaryTag::Interior) {
        std::ostringstream os;
        os << "boundary edge (" << e.vertices[0] << "," << e.vertices[1] << ") at midpoint ("
           << 0.5 * (a.x + b.x) << "," << 0.5 * (a.y + b.y) << ")";
        raise(ErrorCode::UntaggedBoundaryEdge, os.str());
      }
    } else {
      e.tag = BoundaryTag::Interior;
    }
  }

  mesh.vertex_cells_.assign(mesh.vertices_.size(), {});
  for (std::size_t c = 0; c < mesh.cells_.size(); ++c) {
    auto& cell = mesh.cells_[c];
    for (int v : cell.vertices) mesh.vertex_cells_[static_cast<std::size_t>(v)].push_back(static_cast<int>(c));
    std::vector<Point2> pts;
    for (int v : cell.vertices) pts.push_back(mesh.vertex(v));
    cell.area = signed_area(pts);
    cell.centroid = polygon_centroid(pts);
    cell.diameter = polygon_diameter(pts);
  }
  return mesh;
}

PolyMesh PolyMesh::build(std::vector<Point2> vertices, std::vector<std::vector<int>> cells,
                         const BoundaryClassifier& classifier) {
  auto tagger = [&](const MeshEdge&, Point2 a, Point2 b) { return classifier(0.5 * (a + b)); };
  return build_impl(std::move(vertices), std::move(cells), tagger);
}

PolyMesh PolyMesh::build(std::vector<Point2> vertices, std::vector<std::vector<int>> cells,
                         const TagMap& boundary_tags) {
  auto tagger = [&](const MeshEdge& e, Point2, Point2) {
    auto it = boundary_tags.find(edge_key(e.vertices[0], e.vertices[1]));
    return it == boundary_tags.end() ? BoundaryTag::Interior : it->second;
  };
  return build_impl(std::move(vertices), std::move(cells), tagger);
}

int PolyMesh::find_edge(int a, int b) const {
  auto it = edge_index_.find(edge_key(a, b));
  return it == edge_index_.end() ? -1 : it->second;
}

CellGeometry PolyMesh::cell_geometry(int c) const {
  const PolyCell& cell = this->cell(c);
  CellGeometry g;
  g.vertices.reserve(cell.vertices.size());
  for (int v : cell.vertices) g.vertices.push_back(vertex(v));
  g.centroid = cell.centroid;
  g.diameter = cell.diameter;
  g.area = cell.area;
  return g;
}

Point2 PolyMesh::edge_midpoint(int e) const {
  const MeshEdge& ed = edge(e);
  return 0.5 * (vertex(ed.vertices[0]) + vertex(ed.vertices[1]));
}

PolyMesh::TagMap PolyMesh::boundary_tags() const {
  TagMap tags;
  for (const auto& e : edges_)
    if (e.is_boundary()) tags.emplace(edge_key(e.vertices[0], e.vertices[1]), e.tag);
  return tags;
}

double PolyMesh::total_area() const {
  double a = 0.0;
  for (const auto& c : cells_) a += c.area;
  return a;
}

double PolyMesh::boundary_enclosed_area() const {
  double a = 0.0;
  for (const auto& e : edges_)
    if (e.is_boundary()) a += cross(vertex(e.vertices[0]), vertex(e.vertices[1]));
  return 0.5 * a;
}

std::size_t PolyMesh::count_edges(BoundaryTag tag) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [tag](const MeshEdge& e) { return e.tag == tag; }));
}

double PolyMesh::max_diameter() const {
  double h = 0.0;
  for (const auto& c : cells_) h = std::max(h, c.diameter);
  return h;
}

}  // namespace vemsad

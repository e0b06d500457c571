#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vemsad {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

enum class BoundaryTag : std::uint8_t { Interior, Dirichlet, Neumann };

char tag_letter(BoundaryTag tag);

/// Maps the midpoint of a boundary edge to its tag.
using BoundaryClassifier = std::function<BoundaryTag(Point2)>;

/// Unordered vertex pair used as an edge key.
using EdgeKey = std::pair<int, int>;
inline EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

struct MeshEdge {
  // Oriented so that `normal` points out of cells[0].
  std::array<int, 2> vertices{};
  BoundaryTag tag = BoundaryTag::Interior;
  std::array<int, 2> cells{-1, -1};
  double length = 0.0;
  Point2 normal;
  Point2 tangent;

  [[nodiscard]] bool is_boundary() const { return cells[1] < 0; }
};

struct PolyCell {
  std::vector<int> vertices;  // counter-clockwise
  std::vector<int> edges;     // edges[i] joins vertices[i] -> vertices[i+1]
  // +1 when edges[i] is stored in the same direction as the CCW traversal,
  // i.e. when the stored edge normal is outward for this cell.
  std::vector<int> edge_signs;
  double diameter = 0.0;
  double area = 0.0;
  Point2 centroid;
};

/// Self-contained geometric view of one polygon; local VEM operators only
/// depend on this, not on the surrounding mesh.
struct CellGeometry {
  std::vector<Point2> vertices;  // counter-clockwise
  Point2 centroid;
  double diameter = 0.0;
  double area = 0.0;

  [[nodiscard]] std::size_t size() const { return vertices.size(); }
  [[nodiscard]] Point2 vertex(std::size_t i) const { return vertices[i % vertices.size()]; }
  [[nodiscard]] Point2 outward_normal(std::size_t edge) const;
  [[nodiscard]] double edge_length(std::size_t edge) const;
};

/// Signed shoelace area (positive for CCW loops).
double signed_area(std::span<const Point2> loop);
/// Area centroid of a simple polygon.
Point2 polygon_centroid(std::span<const Point2> loop);
/// Maximum pairwise vertex distance.
double polygon_diameter(std::span<const Point2> loop);
/// Builds the CellGeometry of an explicit CCW polygon.
CellGeometry make_cell_geometry(std::vector<Point2> loop);
/// True when all interior angles are <= pi (collinear vertices allowed).
bool is_convex(std::span<const Point2> loop, double rel_tol = 1e-10);

/// Polygonal mesh with derived edge/adjacency data. Immutable after
/// construction; refinement produces a new mesh.
class PolyMesh {
public:
  using TagMap = std::map<EdgeKey, BoundaryTag>;

  /// Builds from vertex loops; boundary edges are tagged by `classifier`
  /// evaluated at the edge midpoint. Loops given clockwise are reversed.
  static PolyMesh build(std::vector<Point2> vertices, std::vector<std::vector<int>> cells,
                        const BoundaryClassifier& classifier);
  /// Same, with explicit tags for every boundary edge.
  static PolyMesh build(std::vector<Point2> vertices, std::vector<std::vector<int>> cells,
                        const TagMap& boundary_tags);

  [[nodiscard]] const std::vector<Point2>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<MeshEdge>& edges() const { return edges_; }
  [[nodiscard]] const std::vector<PolyCell>& cells() const { return cells_; }
  [[nodiscard]] std::size_t num_vertices() const { return vertices_.size(); }
  [[nodiscard]] std::size_t num_edges() const { return edges_.size(); }
  [[nodiscard]] std::size_t num_cells() const { return cells_.size(); }

  [[nodiscard]] const Point2& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  [[nodiscard]] const MeshEdge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  [[nodiscard]] const PolyCell& cell(int c) const { return cells_[static_cast<std::size_t>(c)]; }
  [[nodiscard]] const std::vector<int>& vertex_cells(int v) const {
    return vertex_cells_[static_cast<std::size_t>(v)];
  }
  /// Edge id for an unordered vertex pair, or -1.
  [[nodiscard]] int find_edge(int a, int b) const;

  [[nodiscard]] CellGeometry cell_geometry(int c) const;
  [[nodiscard]] Point2 edge_midpoint(int e) const;

  /// Tags of all boundary edges keyed by vertex pair.
  [[nodiscard]] TagMap boundary_tags() const;
  [[nodiscard]] double total_area() const;
  /// Area enclosed by the boundary edges (shoelace over boundary segments).
  [[nodiscard]] double boundary_enclosed_area() const;
  [[nodiscard]] std::size_t count_edges(BoundaryTag tag) const;
  [[nodiscard]] double max_diameter() const;

private:
  PolyMesh() = default;
  template <typename Tagger>
  static PolyMesh build_impl(std::vector<Point2> vertices, std::vector<std::vector<int>> cells,
                             Tagger&& tagger);

  std::vector<Point2> vertices_;
  std::vector<MeshEdge> edges_;
  std::vector<PolyCell> cells_;
  std::vector<std::vector<int>> vertex_cells_;
  std::map<EdgeKey, int> edge_index_;
};

// ---------------------------------------------------------------------------
// Generation

enum class MeshFamily { Square, Crossed, Voronoi, LShape };

MeshFamily parse_mesh_family(const std::string& name);
std::string to_string(MeshFamily family);

struct VoronoiOptions {
  std::uint64_t seed = 20240611;
  int lloyd_iterations = 50;
};

/// Unit-square boundary split used by the smooth experiment:
/// Dirichlet on {x = 0} and {y = 0}, Neumann elsewhere.
BoundaryTag unit_square_classifier(Point2 midpoint);
/// L-shape split: Neumann on {x = -1} and {y = 1}, Dirichlet elsewhere.
BoundaryTag l_shape_classifier(Point2 midpoint);
/// Default classifier of a family (unit square families vs. L-shape).
BoundaryClassifier default_classifier(MeshFamily family);

/// square: n x n quads on (0,1)^2; crossed: each quad split into 4 triangles
/// through its centre; voronoi: n^2 Lloyd-relaxed seeds clipped to (0,1)^2;
/// l_shape: 3 n^2 quads covering (-1,1)^2 minus [0,1) x (-1,0].
PolyMesh generate_mesh(MeshFamily family, int n, const BoundaryClassifier& classifier,
                       const VoronoiOptions& voronoi = {});
PolyMesh generate_mesh(MeshFamily family, int n);

// ---------------------------------------------------------------------------
// Mesh assumptions

struct CellQuality {
  int cell = -1;
  double chebyshev_radius = 0.0;  // largest disk inside the kernel
  double min_edge = 0.0;
  double diameter = 0.0;
  bool star_shaped = false;
  bool disk_ok = false;   // radius >= rho h_E
  bool edges_ok = false;  // min edge >= rho h_E
  [[nodiscard]] bool ok() const { return star_shaped && disk_ok && edges_ok; }
};

struct MeshQualityReport {
  double rho = 0.0;
  std::vector<CellQuality> cells;
  [[nodiscard]] bool all_ok() const;
  [[nodiscard]] std::size_t num_violations() const;
  /// Largest rho for which every cell would pass.
  [[nodiscard]] double achieved_rho() const;
};

/// Largest disk contained in the kernel of a polygon: centre and radius.
/// The radius is <= 0 when the kernel is empty.
std::pair<Point2, double> kernel_chebyshev_disk(std::span<const Point2> loop);

MeshQualityReport check_mesh_assumptions(const PolyMesh& mesh, double rho);

// ---------------------------------------------------------------------------
// Refinement

struct RefinementReport {
  std::size_t refined_cells = 0;
  std::size_t kernel_fan_cells = 0;  // non-convex cells split about a kernel point
};

/// Midpoint-barycentre refinement: every marked polygon with m geometric
/// sides becomes m quads joining the side midpoints to its barycentre.
/// Hanging vertices do not count as corners; they stay on the children, and
/// one already sitting at a side midpoint is reused. Unmarked neighbours keep
/// inserted points as additional polygon vertices.
PolyMesh refine_cells(const PolyMesh& mesh, std::span<const int> marked,
                      RefinementReport* report = nullptr);
PolyMesh refine_uniform(const PolyMesh& mesh, RefinementReport* report = nullptr);

// ---------------------------------------------------------------------------
// Text format
//   polymesh 2 <nv> <nc>
//   <x> <y>                 (nv lines)
//   <m> <v1> ... <vm>       (nc lines, 0-based ids)
//   <va> <vb> D|N           (one line per boundary edge)

void write_mesh(const PolyMesh& mesh, std::ostream& out);
void write_mesh(const PolyMesh& mesh, const std::string& path);
PolyMesh read_mesh(std::istream& in);
PolyMesh read_mesh(const std::string& path);

}  // namespace vemsad

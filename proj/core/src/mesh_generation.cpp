#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

#include "vemsad/error.hpp"
#include "vemsad/geometry.hpp"

namespace vemsad {

MeshFamily parse_mesh_family(const std::string& name) {
  if (name == "square") return MeshFamily::Square;
  if (name == "crossed") return MeshFamily::Crossed;
  if (name == "voronoi") return MeshFamily::Voronoi;
  if (name == "l_shape" || name == "lshape") return MeshFamily::LShape;
  raise(ErrorCode::UnsupportedFamily, "unknown mesh family '" + name + "'");
}

std::string to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::Square: return "square";
    case MeshFamily::Crossed: return "crossed";
    case MeshFamily::Voronoi: return "voronoi";
    case MeshFamily::LShape: return "l_shape";
  }
  return "unknown";
}

namespace {
constexpr double kOnLineTol = 1e-10;
}

BoundaryTag unit_square_classifier(Point2 m) {
  if (std::abs(m.x) < kOnLineTol || std::abs(m.y) < kOnLineTol) return BoundaryTag::Dirichlet;
  return BoundaryTag::Neumann;
}

BoundaryTag l_shape_classifier(Point2 m) {
  if (std::abs(m.x + 1.0) < kOnLineTol || std::abs(m.y - 1.0) < kOnLineTol) return BoundaryTag::Neumann;
  return BoundaryTag::Dirichlet;
}

BoundaryClassifier default_classifier(MeshFamily family) {
  if (family == MeshFamily::LShape) return l_shape_classifier;
  return unit_square_classifier;
}

namespace {

using Loop = std::vector<Point2>;

// Keeps the part of `poly` where dot(x, a) <= b.
Loop clip_half_plane(const Loop& poly, Point2 a, double b) {
  Loop out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 p = poly[i];
    const Point2 q = poly[(i + 1) % m];
    const double fp = dot(p, a) - b;
    const double fq = dot(q, a) - b;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

// Voronoi cells of `seeds` restricted to the unit square.
std::vector<Loop> voronoi_cells(const std::vector<Point2>& seeds) {
  const Loop square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<Loop> cells(seeds.size());
  std::vector<std::pair<double, std::size_t>> order(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = 0; j < seeds.size(); ++j) order[j] = {distance(seeds[i], seeds[j]), j};
    std::sort(order.begin(), order.end());
    Loop poly = square;
    for (const auto& [d, j] : order) {
      if (j == i) continue;
      double reach = 0.0;
      for (const Point2& p : poly) reach = std::max(reach, distance(p, seeds[i]));
      // Bisectors farther than twice the cell radius cannot cut it.
      if (d > 2.0 * reach) break;
      const Point2 a = seeds[j] - seeds[i];
      const double b = 0.5 * (dot(seeds[j], seeds[j]) - dot(seeds[i], seeds[i]));
      poly = clip_half_plane(poly, a, b);
    }
    cells[i] = std::move(poly);
  }
  return cells;
}

// Merges coincident points (within `tol`) and drops repeated consecutive
// vertices inside each loop.
void weld(const std::vector<Loop>& loops, double tol, std::vector<Point2>& vertices,
          std::vector<std::vector<int>>& cells) {
  std::map<std::pair<long long, long long>, std::vector<int>> buckets;
  auto find_or_add = [&](Point2 p) {
    const long long ix = std::llround(std::floor(p.x / tol));
    const long long iy = std::llround(std::floor(p.y / tol));
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find({ix + dx, iy + dy});
        if (it == buckets.end()) continue;
        for (int v : it->second)
          if (distance(vertices[static_cast<std::size_t>(v)], p) <= tol) return v;
      }
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(p);
    buckets[{ix, iy}].push_back(id);
    return id;
  };
  for (const Loop& loop : loops) {
    std::vector<int> ids;
    for (const Point2& p : loop) {
      const int v = find_or_add(p);
      if (ids.empty() || ids.back() != v) ids.push_back(v);
    }
    while (ids.size() > 1 && ids.front() == ids.back()) ids.pop_back();
    cells.push_back(std::move(ids));
  }
}

// Drops vertices not referenced by any cell and renumbers.
void compact(std::vector<Point2>& vertices, std::vector<std::vector<int>>& cells) {
  std::vector<int> remap(vertices.size(), -1);
  std::vector<Point2> kept;
  for (auto& loop : cells)
    for (int& v : loop) {
      auto& r = remap[static_cast<std::size_t>(v)];
      if (r < 0) {
        r = static_cast<int>(kept.size());
        kept.push_back(vertices[static_cast<std::size_t>(v)]);
      }
      v = r;
    }
  vertices = std::move(kept);
}

PolyMesh square_grid(int n, const BoundaryClassifier& classifier, bool crossed) {
  std::vector<Point2> vertices;
  std::vector<std::vector<int>> cells;
  const double h = 1.0 / n;
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) vertices.push_back({i * h, j * h});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if (!crossed) {
        cells.push_back({a, b, c, d});
        continue;
      }
      const int m = static_cast<int>(vertices.size());
      vertices.push_back({(i + 0.5) * h, (j + 0.5) * h});
      cells.push_back({a, b, m});
      cells.push_back({b, c, m});
      cells.push_back({c, d, m});
      cells.push_back({d, a, m});
    }
  return PolyMesh::build(std::move(vertices), std::move(cells), classifier);
}

PolyMesh l_shape(int n, const BoundaryClassifier& classifier) {
  std::vector<Point2> vertices;
  std::vector<std::vector<int>> cells;
  const int m = 2 * n;
  const double h = 1.0 / n;
  auto id = [m](int i, int j) { return j * (m + 1) + i; };
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) vertices.push_back({-1.0 + i * h, -1.0 + j * h});
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      if (i >= n && j < n) continue;  // removed quadrant [0,1) x (-1,0]
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  compact(vertices, cells);
  return PolyMesh::build(std::move(vertices), std::move(cells), classifier);
}

PolyMesh voronoi(int n, const BoundaryClassifier& classifier, const VoronoiOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Point2> seeds(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (auto& s : seeds) {
    const double x = unif(rng);
    s = {x, unif(rng)};
  }
  std::vector<Loop> cells = voronoi_cells(seeds);
  for (int it = 0; it < opt.lloyd_iterations; ++it) {
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = polygon_centroid(cells[i]);
    cells = voronoi_cells(seeds);
  }
  std::vector<Point2> vertices;
  std::vector<std::vector<int>> loops;
  weld(cells, 1e-8, vertices, loops);
  return PolyMesh::build(std::move(vertices), std::move(loops), classifier);
}

}  // namespace

PolyMesh generate_mesh(MeshFamily family, int n, const BoundaryClassifier& classifier,
                       const VoronoiOptions& voronoi_options) {
  if (n < 1) raise(ErrorCode::InvalidArgument, "mesh resolution must be >= 1");
  switch (family) {
    case MeshFamily::Square: return square_grid(n, classifier, false);
    case MeshFamily::Crossed: return square_grid(n, classifier, true);
    case MeshFamily::Voronoi: return voronoi(n, classifier, voronoi_options);
    case MeshFamily::LShape: return l_shape(n, classifier);
  }
  raise(ErrorCode::UnsupportedFamily, "unsupported mesh family");
}

PolyMesh generate_mesh(MeshFamily family, int n) {
  return generate_mesh(family, n, default_classifier(family));
}

}  // namespace vemsad

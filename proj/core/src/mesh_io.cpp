#include <fstream>
#include <iomanip>
#include <sstream>

#include "vemsad/error.hpp"
#include "vemsad/geometry.hpp"

namespace vemsad {

void write_mesh(const PolyMesh& mesh, std::ostream& out) {
  out << "polymesh 2 " << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  out << std::setprecision(17);
  for (const Point2& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
  for (const PolyCell& c : mesh.cells()) {
    out << c.vertices.size();
    for (int v : c.vertices) out << ' ' << v;
    out << '\n';
  }
  for (const MeshEdge& e : mesh.edges())
    if (e.is_boundary()) out << e.vertices[0] << ' ' << e.vertices[1] << ' ' << tag_letter(e.tag) << '\n';
}

void write_mesh(const PolyMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  write_mesh(mesh, out);
  if (!out) raise(ErrorCode::IoError, "failed writing '" + path + "'");
}

PolyMesh read_mesh(std::istream& in) {
  auto bad = [](const std::string& what) -> void { raise(ErrorCode::IoError, "malformed mesh: " + what); };
  std::string magic;
  int dim = 0;
  std::size_t nv = 0, nc = 0;
  if (!(in >> magic >> dim >> nv >> nc) || magic != "polymesh" || dim != 2) bad("header");
  std::vector<Point2> vertices(nv);
  for (auto& p : vertices)
    if (!(in >> p.x >> p.y)) bad("vertex coordinates");
  std::vector<std::vector<int>> cells(nc);
  for (auto& loop : cells) {
    std::size_t m = 0;
    if (!(in >> m)) bad("cell size");
    loop.resize(m);
    for (int& v : loop)
      if (!(in >> v)) bad("cell vertex id");
  }
  PolyMesh::TagMap tags;
  int a = 0, b = 0;
  std::string t;
  while (in >> a >> b >> t) {
    BoundaryTag tag = BoundaryTag::Interior;
    if (t == "D") tag = BoundaryTag::Dirichlet;
    else if (t == "N") tag = BoundaryTag::Neumann;
    else bad("boundary tag '" + t + "'");
    tags[edge_key(a, b)] = tag;
  }
  if (!in.eof()) bad("trailing content");
  return PolyMesh::build(std::move(vertices), std::move(cells), tags);
}

PolyMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_mesh(in);
}

}  // namespace vemsad

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <regex>
#include <sstream>

#include "vemsad/error.hpp"
#include "vemsad/export.hpp"

using namespace vemsad;

namespace {

std::shared_ptr<const Discretisation> make_disc(const PolyMesh& mesh, Orders o = {2, 1}) {
  return std::make_shared<const Discretisation>(std::make_shared<const PolyMesh>(mesh), o);
}

// Independent reader of the legacy VTK POLYDATA layout. Fails the test on any
// structural inconsistency and returns the parsed arrays.
struct VtkFile {
  std::vector<std::array<double, 3>> points;
  std::vector<std::vector<int>> polygons;
  std::map<std::string, std::vector<double>> point_data, cell_data;
};

VtkFile parse_vtk(const std::string& text) {
  VtkFile f;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# vtk DataFile Version", 0), 0u) << line;
  std::getline(in, line);  // title
  EXPECT_LE(line.size(), 256u);
  std::getline(in, line);
  EXPECT_EQ(line, "ASCII");
  std::getline(in, line);
  EXPECT_EQ(line, "DATASET POLYDATA");

  std::string word, type;
  std::size_t n = 0;
  in >> word >> n >> type;
  EXPECT_EQ(word, "POINTS");
  EXPECT_EQ(type, "double");
  f.points.resize(n);
  for (auto& p : f.points) in >> p[0] >> p[1] >> p[2];

  std::size_t nc = 0, size = 0;
  in >> word >> nc >> size;
  EXPECT_EQ(word, "POLYGONS");
  std::size_t counted = 0;
  for (std::size_t c = 0; c < nc; ++c) {
    std::size_t m = 0;
    in >> m;
    EXPECT_GE(m, 3u);
    std::vector<int> poly(m);
    for (int& v : poly) {
      in >> v;
      EXPECT_GE(v, 0);
      EXPECT_LT(static_cast<std::size_t>(v), n);
    }
    counted += m + 1;
    f.polygons.push_back(poly);
  }
  EXPECT_EQ(counted, size);

  std::map<std::string, std::vector<double>>* target = nullptr;
  std::size_t count = 0;
  while (in >> word) {
    if (word == "POINT_DATA" || word == "CELL_DATA") {
      in >> count;
      EXPECT_EQ(count, word == "POINT_DATA" ? n : nc);
      target = word == "POINT_DATA" ? &f.point_data : &f.cell_data;
      continue;
    }
    EXPECT_TRUE(target != nullptr);
    if (target == nullptr) break;
    std::string name;
    in >> name >> type;
    EXPECT_EQ(type, "double");
    std::size_t width = 3;
    if (word == "SCALARS") {
      std::string lookup, table;
      in >> width >> lookup >> table;
      EXPECT_EQ(lookup, "LOOKUP_TABLE");
    } else {
      EXPECT_EQ(word, "VECTORS");
    }
    std::vector<double> values(count * width);
    for (double& v : values) {
      in >> v;
      EXPECT_TRUE(std::isfinite(v));
    }
    EXPECT_TRUE(in.good() || in.eof());
    EXPECT_FALSE(target->contains(name)) << name;
    (*target)[name] = values;
  }
  return f;
}

std::vector<LocalIndicators> fake_indicators(std::size_t n) {
  std::vector<LocalIndicators> out(n);
  for (std::size_t c = 0; c < n; ++c) {
    out[c].cell = static_cast<int>(c);
    out[c].theta_sq = std::pow(10.0, static_cast<double>(c % 5)) * 1e-4 * static_cast<double>(c + 1);
  }
  return out;
}

}  // namespace

TEST(Vtk, SingleCellHasFourPointsAndOnePolygon) {
  const auto d = make_disc(generate_mesh(MeshFamily::Square, 1));
  std::ostringstream out;
  write_vtk(zero_state(d), {}, out);
  const VtkFile f = parse_vtk(out.str());
  EXPECT_EQ(f.points.size(), 4u);
  ASSERT_EQ(f.polygons.size(), 1u);
  EXPECT_EQ(f.polygons[0].size(), 4u);
  EXPECT_NE(out.str().find("POLYGONS 1 5\n"), std::string::npos);
  EXPECT_FALSE(f.cell_data.contains("theta_sq"));
}

TEST(Vtk, RefinedLShapeFileIsWellFormed) {
  const auto prob = example2(example2_parameters());
  PolyMesh mesh = generate_mesh(MeshFamily::LShape, 1, prob->classifier());
  for (int level = 0; level < 3; ++level) {
    std::vector<int> marked;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      if (distance(mesh.cells()[c].centroid, {0.0, 0.0}) < 0.8) marked.push_back(static_cast<int>(c));
    }
    mesh = refine_cells(mesh, marked);
  }
  const auto d = make_disc(mesh);
  const SystemState s = interpolate_state(d, *prob);
  const auto locals = local_indicators(s, prob->data());
  std::ostringstream out;
  write_vtk(s, locals, out);
  const VtkFile f = parse_vtk(out.str());
  EXPECT_EQ(f.points.size(), mesh.num_vertices());
  EXPECT_EQ(f.polygons.size(), mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) EXPECT_EQ(f.polygons[c], mesh.cells()[c].vertices);
  for (const char* name : {"displacement", "pressure", "concentration", "flux"}) EXPECT_TRUE(f.point_data.contains(name));
  for (const char* name : {"pressure_mean", "concentration_mean", "flux_mean", "theta_sq"}) {
    EXPECT_TRUE(f.cell_data.contains(name));
  }
  // Hanging vertices carry values like any other vertex.
  EXPECT_EQ(f.point_data.at("pressure").size(), mesh.num_vertices());
}

TEST(Vtk, ReproducedPolynomialFieldsAreSampledExactly) {
  ModelParameters prm;
  prm.mu = 1.3;
  prm.lambda = 20.0;
  const auto prob = polynomial_problem(prm, 2, 1, 4);
  const auto d = make_disc(generate_mesh(MeshFamily::Voronoi, 3, unit_square_classifier));
  const SystemState s = interpolate_state(d, *prob);
  std::ostringstream out;
  write_vtk(s, {}, out);
  const VtkFile f = parse_vtk(out.str());
  const auto& u = f.point_data.at("displacement");
  const auto& p = f.point_data.at("pressure");
  const auto& phi = f.point_data.at("concentration");
  for (std::size_t v = 0; v < f.points.size(); ++v) {
    const ExactValues e = prob->evaluate({f.points[v][0], f.points[v][1]});
    EXPECT_NEAR(u[3 * v], e.u.x, 1e-9);
    EXPECT_NEAR(u[3 * v + 1], e.u.y, 1e-9);
    EXPECT_EQ(u[3 * v + 2], 0.0);
    EXPECT_NEAR(p[v], e.p, 1e-8 * std::max(1.0, std::abs(e.p)));
    EXPECT_NEAR(phi[v], e.phi, 1e-8 * std::max(1.0, std::abs(e.phi)));
  }
}

TEST(Svg, ColourScaleSpansIndicatorRange) {
  const PolyMesh mesh = generate_mesh(MeshFamily::Voronoi, 4);
  const auto locals = fake_indicators(mesh.num_cells());
  std::ostringstream out;
  write_svg(mesh, locals, out);
  const std::string svg = out.str();

  double lo = 1e300, hi = 0.0;
  std::size_t lo_cell = 0, hi_cell = 0;
  for (std::size_t c = 0; c < locals.size(); ++c) {
    const double t = std::sqrt(locals[c].theta_sq);
    if (t < lo) lo = t, lo_cell = c;
    if (t > hi) hi = t, hi_cell = c;
  }
  const std::regex bar(R"re(data-min="([^"]+)" data-max="([^"]+)")re");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, bar));
  EXPECT_NEAR(std::stod(m[1]), lo, 1e-7 * lo);
  EXPECT_NEAR(std::stod(m[2]), hi, 1e-7 * hi);

  const std::regex poly(R"re(<polygon data-cell="(\d+)" data-theta="[^"]+" fill="(rgb\([^)]*\))")re");
  std::map<std::size_t, std::string> fill;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator(); ++it) {
    fill[std::stoul((*it)[1])] = (*it)[2];
  }
  EXPECT_EQ(fill.size(), mesh.num_cells());
  EXPECT_EQ(fill[lo_cell], "rgb(49,54,149)");
  EXPECT_EQ(fill[hi_cell], "rgb(215,48,39)");
}

TEST(Svg, NeedsOneIndicatorPerCell) {
  const PolyMesh mesh = generate_mesh(MeshFamily::Square, 2);
  std::ostringstream out;
  EXPECT_THROW(write_svg(mesh, fake_indicators(3), out), Error);
}

TEST(Export, UnwritablePathIsIoError) {
  const auto d = make_disc(generate_mesh(MeshFamily::Square, 1));
  try {
    export_solution(zero_state(d), {}, ExportFormat::VtkPoly, "/nonexistent/dir/out.vtk");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

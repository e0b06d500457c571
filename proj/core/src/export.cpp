#include "vemsad/export.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>

#include "vemsad/error.hpp"
#include "vemsad/quadrature.hpp"

namespace vemsad {

namespace {

struct Sampled {
  std::vector<double> p, phi;
  std::vector<Point2> zeta;
};

// Vertex averages of the cell-wise fields.
Sampled vertex_samples(const SystemState& s) {
  const PolyMesh& mesh = s.disc->mesh();
  const std::size_t nv = mesh.num_vertices();
  Sampled out{std::vector<double>(nv, 0.0), std::vector<double>(nv, 0.0), std::vector<Point2>(nv)};
  std::vector<int> count(nv, 0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    for (int v : mesh.cells()[c].vertices) {
      const Point2 x = mesh.vertex(v);
      const auto i = static_cast<std::size_t>(v);
      out.p[i] += s.pressure(c, x);
      out.phi[i] += s.concentration(c, x);
      out.zeta[i] = out.zeta[i] + s.flux(c, x);
      ++count[i];
    }
  }
  for (std::size_t i = 0; i < nv; ++i) {
    if (count[i] == 0) continue;
    const double w = 1.0 / count[i];
    out.p[i] *= w;
    out.phi[i] *= w;
    out.zeta[i] = w * out.zeta[i];
  }
  return out;
}

Sampled cell_means(const SystemState& s) {
  const PolyMesh& mesh = s.disc->mesh();
  const std::size_t nc = mesh.num_cells();
  Sampled out{std::vector<double>(nc, 0.0), std::vector<double>(nc, 0.0), std::vector<Point2>(nc)};
  for (std::size_t c = 0; c < nc; ++c) {
    const CellGeometry g = mesh.cell_geometry(static_cast<int>(c));
    const QuadratureRule q = polygon_quadrature(g, s.disc->quadrature_degree());
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double w = q.weights[i] / g.area;
      out.p[c] += w * s.pressure(c, q.points[i]);
      out.phi[c] += w * s.concentration(c, q.points[i]);
      out.zeta[c] = out.zeta[c] + w * s.flux(c, q.points[i]);
    }
  }
  return out;
}

void scalars(std::ostream& out, const char* name, const std::vector<double>& v) {
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double x : v) out << x << '\n';
}

void vectors(std::ostream& out, const char* name, const std::vector<Point2>& v) {
  out << "VECTORS " << name << " double\n";
  for (const Point2& x : v) out << x.x << ' ' << x.y << " 0\n";
}

std::array<int, 3> colour(double t) {
  // Blue -> cyan -> yellow -> red.
  static constexpr std::array<std::array<double, 3>, 4> stops{{{49, 54, 149}, {116, 173, 209}, {254, 224, 144}, {215, 48, 39}}};
  t = std::clamp(t, 0.0, 1.0) * 3.0;
  const auto i = std::min<std::size_t>(2, static_cast<std::size_t>(t));
  const double f = t - static_cast<double>(i);
  std::array<int, 3> rgb{};
  for (std::size_t k = 0; k < 3; ++k) rgb[k] = static_cast<int>(std::lround((1 - f) * stops[i][k] + f * stops[i + 1][k]));
  return rgb;
}

}  // namespace

void write_vtk(const SystemState& state, const std::vector<LocalIndicators>& indicators, std::ostream& out) {
  const PolyMesh& mesh = state.disc->mesh();
  if (!indicators.empty() && indicators.size() != mesh.num_cells()) {
    raise(ErrorCode::InvalidArgument, "indicator count does not match the mesh");
  }
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(12);
  s << "# vtk DataFile Version 3.0\nvem-sad solution\nASCII\nDATASET POLYDATA\n";
  s << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Point2& v : mesh.vertices()) s << v.x << ' ' << v.y << " 0\n";
  std::size_t size = 0;
  for (const PolyCell& c : mesh.cells()) size += c.vertices.size() + 1;
  s << "POLYGONS " << mesh.num_cells() << ' ' << size << '\n';
  for (const PolyCell& c : mesh.cells()) {
    s << c.vertices.size();
    for (int v : c.vertices) s << ' ' << v;
    s << '\n';
  }

  const Sampled at_vertices = vertex_samples(state);
  std::vector<Point2> u(mesh.num_vertices());
  for (std::size_t v = 0; v < u.size(); ++v) u[v] = {state.u(static_cast<Eigen::Index>(2 * v)), state.u(static_cast<Eigen::Index>(2 * v + 1))};
  s << "POINT_DATA " << mesh.num_vertices() << '\n';
  vectors(s, "displacement", u);
  scalars(s, "pressure", at_vertices.p);
  scalars(s, "concentration", at_vertices.phi);
  vectors(s, "flux", at_vertices.zeta);

  const Sampled means = cell_means(state);
  s << "CELL_DATA " << mesh.num_cells() << '\n';
  scalars(s, "pressure_mean", means.p);
  scalars(s, "concentration_mean", means.phi);
  vectors(s, "flux_mean", means.zeta);
  if (!indicators.empty()) {
    std::vector<double> theta(indicators.size());
    for (std::size_t c = 0; c < theta.size(); ++c) theta[c] = indicators[c].theta_sq;
    scalars(s, "theta_sq", theta);
  }
  out << s.str();
}

void write_svg(const PolyMesh& mesh, const std::vector<LocalIndicators>& indicators, std::ostream& out) {
  if (indicators.size() != mesh.num_cells()) raise(ErrorCode::InvalidArgument, "SVG export needs one indicator per cell");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  Point2 bmin{lo, lo}, bmax{hi, hi};
  std::vector<double> theta(indicators.size());
  for (std::size_t c = 0; c < theta.size(); ++c) {
    theta[c] = std::sqrt(std::max(0.0, indicators[c].theta_sq));
    lo = std::min(lo, theta[c]);
    hi = std::max(hi, theta[c]);
  }
  for (const Point2& v : mesh.vertices()) {
    bmin = {std::min(bmin.x, v.x), std::min(bmin.y, v.y)};
    bmax = {std::max(bmax.x, v.x), std::max(bmax.y, v.y)};
  }
  const bool log_scale = lo > 0.0;
  auto unit = [&](double t) {
    if (hi <= lo) return 0.5;
    return log_scale ? std::log(t / lo) / std::log(hi / lo) : (t - lo) / (hi - lo);
  };

  constexpr double size = 600.0, margin = 10.0, bar = 60.0;
  const double scale = size / std::max(bmax.x - bmin.x, bmax.y - bmin.y);
  auto px = [&](Point2 p) { return Point2{margin + (p.x - bmin.x) * scale, margin + (bmax.y - p.y) * scale}; };
  const double width = 2 * margin + (bmax.x - bmin.x) * scale + bar + 80.0;
  const double height = 2 * margin + (bmax.y - bmin.y) * scale;

  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(8);
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
    << width << ' ' << height << "\">\n";
  s << "<g id=\"cells\" stroke=\"black\" stroke-width=\"0.5\">\n";
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto rgb = colour(unit(theta[c]));
    s << "<polygon data-cell=\"" << c << "\" data-theta=\"" << theta[c] << "\" fill=\"rgb(" << rgb[0] << ',' << rgb[1]
      << ',' << rgb[2] << ")\" points=\"";
    const auto& vs = mesh.cells()[c].vertices;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const Point2 p = px(mesh.vertex(vs[i]));
      s << (i ? " " : "") << p.x << ',' << p.y;
    }
    s << "\"/>\n";
  }
  s << "</g>\n";

  // Colour bar: 32 bands from min (bottom) to max (top).
  const double x0 = width - bar - 70.0, bar_h = height - 2 * margin;
  constexpr int bands = 32;
  s << "<g id=\"colourbar\" data-min=\"" << lo << "\" data-max=\"" << hi << "\" data-scale=\""
    << (log_scale ? "log" : "linear") << "\">\n";
  for (int b = 0; b < bands; ++b) {
    const auto rgb = colour((b + 0.5) / bands);
    s << "<rect x=\"" << x0 << "\" y=\"" << margin + bar_h * (bands - 1 - b) / bands << "\" width=\"20\" height=\""
      << bar_h / bands << "\" fill=\"rgb(" << rgb[0] << ',' << rgb[1] << ',' << rgb[2] << ")\"/>\n";
  }
  s << "<text x=\"" << x0 + 25 << "\" y=\"" << margin + 10 << "\" font-size=\"10\">" << hi << "</text>\n";
  s << "<text x=\"" << x0 + 25 << "\" y=\"" << margin + bar_h << "\" font-size=\"10\">" << lo << "</text>\n";
  s << "</g>\n</svg>\n";
  out << s.str();
}

void export_solution(const SystemState& state, const std::vector<LocalIndicators>& indicators, ExportFormat format,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  if (format == ExportFormat::VtkPoly) {
    write_vtk(state, indicators, out);
  } else {
    write_svg(state.disc->mesh(), indicators, out);
  }
  out.flush();
  if (!out) raise(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace vemsad

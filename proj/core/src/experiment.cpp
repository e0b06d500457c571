#include "vemsad/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <locale>
#include <random>
#include <sstream>

#include "vemsad/error.hpp"
#include "vemsad/export.hpp"

namespace vemsad {

namespace {

namespace fs = std::filesystem;

std::ostringstream csv_stream() {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(12);
  return s;
}

// NaN prints as "nan" regardless of sign or platform spelling.
struct Num {
  double v;
  friend std::ostream& operator<<(std::ostream& o, Num n) {
    if (std::isnan(n.v)) return o << "nan";
    return o << n.v;
  }
};

void write_file(const fs::path& path, const std::string& text, std::vector<std::string>& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) raise(ErrorCode::IoError, "write to '" + path.string() + "' failed");
  files.push_back(path.string());
}

}  // namespace

PolyMesh initial_mesh(const ExperimentConfig& config, const ManufacturedProblem& problem) {
  return generate_mesh(config.family, config.n, problem.classifier(), config.voronoi);
}

void write_trace_csv(const AdaptTrace& trace, std::ostream& out) {
  auto s = csv_stream();
  s << kTraceHeader << '\n';
  for (const LevelRecord& l : trace.levels) {
    s << l.level << ',' << l.dofs << ',' << Num{l.err} << ',' << Num{l.theta} << ',' << Num{l.eff} << ','
      << Num{l.rate_err} << ',' << Num{l.rate_theta} << ',' << l.marked << ',' << l.picard_iters << '\n';
  }
  out << s.str();
}

void write_indicator_csv(const std::vector<LocalIndicators>& locals, std::ostream& out) {
  auto s = csv_stream();
  s << kIndicatorHeader << '\n';
  for (const LocalIndicators& l : locals) {
    s << l.cell << ',' << l.xi1_sq << ',' << l.xi2_sq << ',' << l.eta1_sq << ',' << l.eta2_sq << ',' << l.lam1_sq << ','
      << l.lam2_sq << ',' << l.s1_sq << ',' << l.s2_sq << ',' << l.theta_sq << '\n';
  }
  out << s.str();
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto problem = make_problem(config.problem, config.params);
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) raise(ErrorCode::IoError, "cannot create output directory '" + dir.string() + "': " + ec.message());

  ExperimentResult result;
  AdaptConfig adapt = config.adapt_config();
  adapt.observer = [&](const LevelView& v) {
    const std::string tag = std::to_string(v.record.level);
    if (config.write_indicators) {
      std::ostringstream s;
      write_indicator_csv(v.indicators, s);
      write_file(dir / ("indicators_" + tag + ".csv"), s.str(), result.files);
    }
    if (config.write_vtk) {
      std::ostringstream s;
      write_vtk(v.state, v.indicators, s);
      write_file(dir / ("solution_" + tag + ".vtk"), s.str(), result.files);
    }
    if (config.write_svg) {
      std::ostringstream s;
      write_svg(v.state.disc->mesh(), v.indicators, s);
      write_file(dir / ("mesh_" + tag + ".svg"), s.str(), result.files);
    }
  };
  result.trace = adapt_loop(*problem, initial_mesh(config, *problem), adapt);
  std::ostringstream s;
  write_trace_csv(result.trace, s);
  write_file(dir / "trace.csv", s.str(), result.files);
  return result;
}

bool SelfCheckReport::ok() const {
  return std::all_of(max_residual.begin(), max_residual.end(), [&](double r) { return r <= residual_tolerance; });
}

SelfCheckReport self_check(const ExperimentConfig& config, int samples) {
  if (samples < 1) raise(ErrorCode::InvalidArgument, "need at least one sample point");
  const auto problem = make_problem(config.problem, config.params);
  const PolyMesh mesh = initial_mesh(config, *problem);

  SelfCheckReport r;
  r.samples = samples;
  // Central differences with step 1e-5 resolve the residuals to about 1e-7.
  r.residual_tolerance = 1e-6;
  r.cells = mesh.num_cells();
  r.dofs = Discretisation(std::make_shared<const PolyMesh>(mesh), config.orders).num_dofs();
  r.mesh_rho = check_mesh_assumptions(mesh, 0.1).achieved_rho();
  r.warnings = config.warnings;

  // Points drawn uniformly from the fan triangles of the cells, kept away
  // from the boundary so the difference stencil stays inside.
  std::mt19937_64 rng(config.voronoi.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < samples; ++i) {
    const PolyCell& cell = mesh.cells()[static_cast<std::size_t>(i) % mesh.num_cells()];
    const std::size_t m = cell.vertices.size();
    const std::size_t k = static_cast<std::size_t>(unit(rng) * static_cast<double>(m)) % m;
    double a = unit(rng), b = unit(rng);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    const Point2 c = cell.centroid;
    const Point2 x = c + 0.98 * (a * (mesh.vertex(cell.vertices[k]) - c) +
                                 b * (mesh.vertex(cell.vertices[(k + 1) % m]) - c));
    const auto res = problem->equation_residuals(x);
    for (std::size_t j = 0; j < 4; ++j) r.max_residual[j] = std::max(r.max_residual[j], res[j]);
  }
  return r;
}

}  // namespace vemsad

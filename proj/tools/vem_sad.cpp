#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

#include "vemsad/error.hpp"
#include "vemsad/experiment.hpp"
#include "vemsad/parallel.hpp"

namespace {

int run(const std::string& path) {
  const vemsad::ExperimentConfig config = vemsad::load_config(path);
  for (const auto& w : config.warnings) std::cerr << "warning: " << w << '\n';
  std::cerr << "threads: " << vemsad::thread_count() << '\n';
  const vemsad::ExperimentResult result = vemsad::run_experiment(config);
  std::printf("%5s %9s %12s %12s %7s %7s %7s %7s %6s\n", "level", "dofs", "err", "theta", "eff", "r_err", "r_theta",
              "marked", "picard");
  for (const auto& l : result.trace.levels) {
    std::printf("%5d %9d %12.4e %12.4e %7.3f %7.3f %7.3f %7d %6d\n", l.level, l.dofs, l.err, l.theta, l.eff, l.rate_err,
                l.rate_theta, l.marked, l.picard_iters);
  }
  std::printf("wrote %zu files to %s\n", result.files.size(), config.output_dir.c_str());
  return 0;
}

int mesh(const std::string& family, int n, const std::string& out) {
  vemsad::write_mesh(vemsad::generate_mesh(vemsad::parse_mesh_family(family), n), out);
  return 0;
}

int check(const std::string& path) {
  const vemsad::ExperimentConfig config = vemsad::load_config(path);
  const vemsad::SelfCheckReport r = vemsad::self_check(config);
  for (const auto& w : r.warnings) std::cout << "warning: " << w << '\n';
  std::printf("config: ok (%s, %s n=%d, k1=%d, k2=%d)\n", config.problem.c_str(),
              vemsad::to_string(config.family).c_str(), config.n, config.orders.k1, config.orders.k2);
  std::printf("initial mesh: %zu cells, %d dofs, shape constant rho = %.4f\n", r.cells, r.dofs, r.mesh_rho);
  const char* names[4] = {"momentum", "pressure", "flux law", "mass balance"};
  for (int i = 0; i < 4; ++i) {
    std::printf("residual %-13s max %.3e over %d points\n", names[i], r.max_residual[static_cast<std::size_t>(i)],
                r.samples);
  }
  std::printf("self-check: %s (tolerance %.0e)\n", r.ok() ? "PASS" : "FAIL", r.residual_tolerance);
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual element solver for stress-assisted diffusion"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
  run_cmd->add_option("config", run_config, "Config file")->required()->check(CLI::ExistingFile);

  std::string family, out;
  int n = 1;
  auto* mesh_cmd = app.add_subcommand("mesh", "Generate a mesh in the text mesh format");
  mesh_cmd->add_option("family", family, "square, crossed, voronoi or l_shape")->required();
  mesh_cmd->add_option("n", n, "Resolution")->required()->check(CLI::PositiveNumber);
  mesh_cmd->add_option("-o,--output", out, "Output file")->required();

  std::string check_config;
  auto* check_cmd = app.add_subcommand("check", "Validate a config and run the self-checks");
  check_cmd->add_option("config", check_config, "Config file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return run(run_config);
    if (*mesh_cmd) return mesh(family, n, out);
    return check(check_config);
  } catch (const vemsad::Error& e) {
    std::cerr << "error [" << vemsad::to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  }
}

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vemsad/adaptivity.hpp"
#include "vemsad/geometry.hpp"
#include "vemsad/problem.hpp"

namespace vemsad {

/// One experiment: problem, initial mesh, discretisation, loop and outputs.
struct ExperimentConfig {
  std::string problem;  // example1, example1_frozen or example2
  ModelParameters params;
  MeshFamily family = MeshFamily::Square;
  int n = 1;
  VoronoiOptions voronoi;
  Orders orders;
  RefinementMode mode = RefinementMode::Adaptive;
  int levels = 5;
  long dof_budget = 0;
  double delta = 0.5;
  PicardConfig picard;
  EstimatorOptions estimator;
  std::string output_dir;
  bool write_indicators = true;
  bool write_vtk = false;
  bool write_svg = false;
  /// Non-fatal remarks, e.g. k1 != k2 + 1.
  std::vector<std::string> warnings;

  /// Loop settings derived from the fields above (no observer).
  [[nodiscard]] AdaptConfig adapt_config() const;
};

/// Parses the sectioned key = value format. Comment lines start with ';' or
/// '#'. Syntax errors report the line, field errors name "[section] key".
/// Throws ConfigError.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
/// Reads a config file; IoError if it cannot be opened.
ExperimentConfig load_config(const std::string& path);

}  // namespace vemsad

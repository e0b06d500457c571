#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "vemsad/error.hpp"
#include "vemsad/experiment.hpp"

using namespace vemsad;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vemsad_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ExperimentConfig uniform_example1(const fs::path& dir, int levels) {
  ExperimentConfig c;
  c.problem = "example1";
  c.family = MeshFamily::Square;
  c.n = 2;
  c.mode = RefinementMode::Uniform;
  c.levels = levels;
  c.output_dir = dir.string();
  return c;
}

}  // namespace

TEST(Experiment, UniformExample1TraceHasOneRowPerLevel) {
  const fs::path dir = scratch("uniform");
  const ExperimentResult r = run_experiment(uniform_example1(dir, 4));
  const auto trace = lines(slurp(dir / "trace.csv"));
  ASSERT_EQ(trace.size(), 5u);
  EXPECT_EQ(trace[0], kTraceHeader);
  EXPECT_EQ(trace[1].substr(0, 2), "0,");
  EXPECT_NE(trace[1].find(",nan,nan,"), std::string::npos);
  ASSERT_EQ(r.trace.levels.size(), 4u);
  EXPECT_GT(r.trace.levels[3].rate_err, 1.8);
  EXPECT_LT(r.trace.levels[3].rate_err, 2.4);
  for (int j = 0; j < 4; ++j) {
    const auto ind = lines(slurp(dir / ("indicators_" + std::to_string(j) + ".csv")));
    EXPECT_EQ(ind[0], kIndicatorHeader);
    EXPECT_EQ(ind.size(), r.trace.levels[static_cast<std::size_t>(j)].cells + 1);
  }
  EXPECT_FALSE(fs::exists(dir / "solution_0.vtk"));
  fs::remove_all(dir);
}

TEST(Experiment, RerunReproducesEveryArtifactByteForByte) {
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* name : {"det_a", "det_b"}) {
    const fs::path dir = scratch(name);
    ExperimentConfig c = uniform_example1(dir, 3);
    c.problem = "example2";
    c.params = example2_parameters();
    c.family = MeshFamily::LShape;
    c.mode = RefinementMode::Adaptive;
    c.write_vtk = true;
    c.write_svg = true;
    const ExperimentResult r = run_experiment(c);
    std::map<std::string, std::string> files;
    for (const auto& f : r.files) files[fs::path(f).filename().string()] = slurp(f);
    runs.push_back(files);
    fs::remove_all(dir);
  }
  ASSERT_EQ(runs[0].size(), 3u * 3u + 1u);
  EXPECT_EQ(runs[0], runs[1]);
}

TEST(Experiment, UncreatableOutputDirectoryIsIoError) {
  const fs::path blocker = scratch("blocker");
  std::ofstream(blocker) << "file";
  try {
    (void)run_experiment(uniform_example1(blocker / "sub", 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
  fs::remove(blocker);
}

TEST(Experiment, CsvWritersFormatNanAndHeaders) {
  AdaptTrace t;
  LevelRecord l;
  l.level = 0;
  l.dofs = 10;
  l.err = 0.5;
  l.theta = 1.5;
  l.eff = 3.0;
  l.marked = 2;
  l.picard_iters = 4;
  t.levels.push_back(l);
  std::ostringstream out;
  write_trace_csv(t, out);
  EXPECT_EQ(out.str(), std::string(kTraceHeader) + "\n0,10,0.5,1.5,3,nan,nan,2,4\n");
}

TEST(SelfCheck, ManufacturedProblemsPass) {
  for (const char* name : {"example1", "example2"}) {
    ExperimentConfig c = uniform_example1("unused", 1);
    c.problem = name;
    if (c.problem == "example2") {
      c.params = example2_parameters();
      c.family = MeshFamily::LShape;
    }
    const SelfCheckReport r = self_check(c, 200);
    EXPECT_TRUE(r.ok()) << name;
    EXPECT_EQ(r.samples, 200);
    EXPECT_GT(r.mesh_rho, 0.0);
    EXPECT_GT(r.dofs, 0);
  }
}

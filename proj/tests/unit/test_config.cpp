#include <gtest/gtest.h>

#include <sstream>

#include "vemsad/config.hpp"
#include "vemsad/error.hpp"

using namespace vemsad;

namespace {

const char* kMinimal = R"(
[problem]
name = example1
[mesh]
family = square
n = 3
[refinement]
mode = uniform
[output]
directory = out
)";

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.ini");
}

std::string error_of(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "no ConfigError";
  return {};
}

std::string without(const std::string& line) {
  std::string s = kMinimal;
  s.erase(s.find(line), line.size() + 1);
  return s;
}

}  // namespace

TEST(Config, MinimalFileTakesDefaults) {
  const ExperimentConfig c = parse(kMinimal);
  EXPECT_EQ(c.problem, "example1");
  EXPECT_EQ(c.family, MeshFamily::Square);
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.mode, RefinementMode::Uniform);
  EXPECT_EQ(c.output_dir, "out");
  EXPECT_EQ(c.orders.k1, 2);
  EXPECT_EQ(c.orders.k2, 1);
  EXPECT_EQ(c.params.M, 12.0);
  EXPECT_EQ(c.picard.tolerance, 1e-6);
  EXPECT_TRUE(c.warnings.empty());
}

TEST(Config, AllKeysAreRead) {
  const ExperimentConfig c = parse(R"(
; comment
# comment
[problem]
name = example1_frozen
mu = 1000
lambda = 1e4
theta = 0.0833
M = 5
[mesh]
family = voronoi
n = 4
seed = 7
lloyd_iterations = 10
[discretisation]
k1 = 3
k2 = 2
[refinement]
mode = adaptive
levels = 9
dof_budget = 5000
delta = 0.3
[picard]
tolerance = 1e-8
max_iterations = 70
divergence_window = 5
[estimator]
printed_pressure_sign = true
tangential_jumps = yes
[output]
directory = a/b
indicators = false
vtk = 1
svg = true
)");
  EXPECT_EQ(c.params.mu, 1000.0);
  EXPECT_EQ(c.params.lambda, 1e4);
  EXPECT_EQ(c.params.theta, 0.0833);
  EXPECT_EQ(c.params.M, 5.0);
  EXPECT_EQ(c.family, MeshFamily::Voronoi);
  EXPECT_EQ(c.voronoi.seed, 7u);
  EXPECT_EQ(c.voronoi.lloyd_iterations, 10);
  EXPECT_EQ(c.orders.k1, 3);
  EXPECT_EQ(c.mode, RefinementMode::Adaptive);
  EXPECT_EQ(c.levels, 9);
  EXPECT_EQ(c.dof_budget, 5000);
  EXPECT_EQ(c.delta, 0.3);
  EXPECT_EQ(c.picard.max_iterations, 70);
  EXPECT_EQ(c.picard.divergence_window, 5);
  EXPECT_TRUE(c.estimator.printed_pressure_sign);
  EXPECT_TRUE(c.estimator.tangential_jumps);
  EXPECT_FALSE(c.write_indicators);
  EXPECT_TRUE(c.write_vtk);
  const AdaptConfig a = c.adapt_config();
  EXPECT_EQ(a.max_levels, 9);
  EXPECT_EQ(a.marking.delta, 0.3);
  EXPECT_EQ(a.picard.tolerance, 1e-8);
}

TEST(Config, Example2TakesItsOwnParameters) {
  std::string s = kMinimal;
  s.replace(s.find("example1"), 8, "example2");
  const ExperimentConfig c = parse(s);
  const ModelParameters p = example2_parameters();
  EXPECT_EQ(c.params.mu, p.mu);
  EXPECT_EQ(c.params.lambda, p.lambda);
  EXPECT_EQ(c.params.M, p.M);
}

TEST(Config, MissingKeysAreNamed) {
  EXPECT_NE(error_of(without("family = square")).find("[mesh] family"), std::string::npos);
  EXPECT_NE(error_of(without("n = 3")).find("[mesh] n"), std::string::npos);
  EXPECT_NE(error_of(without("name = example1")).find("[problem] name"), std::string::npos);
  EXPECT_NE(error_of(without("mode = uniform")).find("[refinement] mode"), std::string::npos);
  EXPECT_NE(error_of(without("directory = out")).find("[output] directory"), std::string::npos);
}

TEST(Config, BadValuesAreNamed) {
  auto with = [](const std::string& from, const std::string& to) {
    std::string s = kMinimal;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  EXPECT_NE(error_of(with("n = 3", "n = three")).find("[mesh] n"), std::string::npos);
  EXPECT_NE(error_of(with("n = 3", "n = 0")).find("[mesh] n"), std::string::npos);
  EXPECT_NE(error_of(with("n = 3", "n = 3.5")).find("[mesh] n"), std::string::npos);
  EXPECT_NE(error_of(with("family = square", "family = hex")).find("[mesh] family"), std::string::npos);
  EXPECT_NE(error_of(with("mode = uniform", "mode = greedy")).find("[refinement] mode"), std::string::npos);
  EXPECT_NE(error_of(with("name = example1", "name = example9")).find("[problem] name"), std::string::npos);
  EXPECT_NE(error_of(std::string(kMinimal) + "[refinement]\n").find("duplicate"), std::string::npos);
  const std::string delta = std::string(kMinimal) + "[picard]\ntolerance = -1\n";
  EXPECT_NE(error_of(delta).find("[picard]"), std::string::npos);
}

TEST(Config, UnknownKeysAndSectionsAreRejected) {
  EXPECT_NE(error_of(std::string(kMinimal) + "[mesh2]\nx = 1\n").find("[mesh2]"), std::string::npos);
  std::string typo = kMinimal;
  typo.replace(typo.find("n = 3"), 5, "n = 3\nlevles = 4");
  EXPECT_NE(error_of(typo).find("levles"), std::string::npos);
}

TEST(Config, SyntaxErrorsReportTheLine) {
  std::string s = kMinimal;
  s.replace(s.find("[mesh]"), 6, "[mesh");
  const std::string msg = error_of(s);
  EXPECT_NE(msg.find("test.ini:4"), std::string::npos) << msg;
}

TEST(Config, UnbalancedOrdersWarn) {
  const ExperimentConfig c = parse(std::string(kMinimal) + "[discretisation]\nk1 = 2\nk2 = 2\n");
  ASSERT_EQ(c.warnings.size(), 1u);
  EXPECT_NE(c.warnings[0].find("k1 = k2 + 1"), std::string::npos);
}

TEST(Config, MissingFileIsIoError) {
  try {
    (void)load_config("/nonexistent/config.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

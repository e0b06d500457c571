#include <gtest/gtest.h>

#include "oracle_compare.hpp"

using namespace vemsad;

TEST(Oracle, DiffusionBlockMatchesIndependentAssemblyOnTwoByTwoGrid) {
  const auto prob = oracle::oracle_problem();
  const auto cmp = oracle::compare_diffusion_block(generate_mesh(MeshFamily::Square, 2, unit_square_classifier), *prob);
  ASSERT_GT(cmp.scale, 0.0);
  EXPECT_EQ(cmp.entries, 4u * (11 + 3));
  EXPECT_LE(cmp.flux_diff, 1e-10 * std::max(1.0, cmp.scale));
  EXPECT_LE(cmp.phi_diff, 1e-10 * std::max(1.0, cmp.scale));
  EXPECT_LE(cmp.picard_diff, 1e-10 * std::max(1.0, cmp.scale));
}

TEST(Oracle, DiffusionBlockMatchesOnPolygonsAndHangingNodes) {
  const auto prob = oracle::oracle_problem();
  const PolyMesh vor = generate_mesh(MeshFamily::Voronoi, 3, unit_square_classifier);
  const std::vector<int> marked{0, 4};
  for (const PolyMesh& mesh : {vor, refine_cells(vor, marked)}) {
    const auto cmp = oracle::compare_diffusion_block(mesh, *prob);
    EXPECT_LE(cmp.flux_diff, 1e-10 * std::max(1.0, cmp.scale));
    EXPECT_LE(cmp.phi_diff, 1e-10 * std::max(1.0, cmp.scale));
  }
}

TEST(Oracle, DetectsAPerturbedProblem) {
  // Different data must give a visibly different answer: the comparison is not vacuous.
  const auto mesh = generate_mesh(MeshFamily::Square, 2, unit_square_classifier);
  ModelParameters prm;
  prm.theta = 0.0;
  const auto other = polynomial_problem(prm, 2, 3, 18);
  const auto a = oracle::compare_diffusion_block(mesh, *oracle::oracle_problem());
  const auto b = oracle::compare_diffusion_block(mesh, *other);
  EXPECT_GT(std::abs(a.scale - b.scale), 1e-3);
}

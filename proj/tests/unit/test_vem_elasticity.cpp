#include <gtest/gtest.h>

#include <random>

#include "vemsad/error.hpp"
#include "vemsad/quadrature.hpp"
#include "vemsad/vem_elasticity.hpp"

using namespace vemsad;

namespace {

std::vector<CellGeometry> test_cells() {
  return {
      make_cell_geometry({{0, 0}, {1, 0}, {1, 1}, {0, 1}}),
      make_cell_geometry({{0.1, 0.2}, {0.9, 0.1}, {0.4, 0.8}}),
      make_cell_geometry({{0, 0}, {0.3, -0.05}, {0.55, 0.1}, {0.5, 0.4}, {0.2, 0.45}, {-0.05, 0.25}}),
      // square with a hanging node on its top edge
      make_cell_geometry({{0, 0}, {0.5, 0}, {0.5, 0.5}, {0.25, 0.5}, {0, 0.5}}),
  };
}

// Random vector polynomial of degree k as coefficients [x; y].
Eigen::VectorXd random_poly(int k, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd c(2 * num_monomials(k));
  for (auto& v : c) v = u(rng);
  return c;
}

// The same polynomial as a VectorField with analytic divergence.
VectorField as_field(const ScaledMonomials& basis, const Eigen::VectorXd& c) {
  return {[basis, c](Point2 x) { return eval_vector_poly(basis, c, x); },
          [basis, c](Point2 x) { return eval_vector_poly_jacobian(basis, c, x).trace(); }};
}

}  // namespace

TEST(ElasticityLayout, DofCounts) {
  const CellGeometry sq = make_cell_geometry({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const CellGeometry tri = make_cell_geometry({{0, 0}, {1, 0}, {0, 1}});
  EXPECT_EQ(dof_layout_elasticity(sq, 2).size(), 18);
  EXPECT_EQ(dof_layout_elasticity(sq, 2).pressure_size(), 3);
  EXPECT_EQ(dof_layout_elasticity(tri, 2).size(), 14);
  // 8 vertex + 16 edge + 5 divergence + 1 complement moment
  EXPECT_EQ(dof_layout_elasticity(sq, 3).size(), 30);
  EXPECT_EQ(dof_layout_elasticity(sq, 3).num_perp(), 1);
  try {
    dof_layout_elasticity(sq, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrderTooLow);
  }
}

class ElasticityOrders : public ::testing::TestWithParam<int> {};

TEST_P(ElasticityOrders, EnergyProjectionReproducesPolynomials) {
  const int k = GetParam();
  for (const auto& cell : test_cells()) {
    const LocalElasticity op = local_elasticity(cell, k);
    const Eigen::MatrixXd id = op.pi_eps * op.dofs_of_basis;
    EXPECT_LT((id - Eigen::MatrixXd::Identity(id.rows(), id.cols())).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST_P(ElasticityOrders, InterpolationOfPolynomialsMatchesBasisDofs) {
  const int k = GetParam();
  std::mt19937 rng(11);
  for (const auto& cell : test_cells()) {
    const LocalElasticity op = local_elasticity(cell, k);
    const Eigen::VectorXd c = random_poly(k, rng);
    const Eigen::VectorXd d = interpolate_elasticity(op.layout, cell, as_field(op.basis, c));
    EXPECT_LT((d - op.dofs_of_basis * c).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST_P(ElasticityOrders, StabilisationEnergyMatchesQuadraticFormAndVanishesOnPolynomials) {
  const int k = GetParam();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto& cell : test_cells()) {
    const auto op = local_elasticity(cell, k);
    Eigen::VectorXd v(op.layout.size());
    for (auto& x : v) x = u(rng);
    const double quad = v.dot(op.stabilisation * v);
    EXPECT_NEAR(op.stabilisation_energy(v), quad, 1e-12 * quad);
    Eigen::VectorXd c(op.dofs_of_basis.cols());
    for (auto& x : c) x = u(rng);
    const Eigen::VectorXd p = op.dofs_of_basis * c;
    EXPECT_LT(op.stabilisation_energy(p), 1e-24 * p.squaredNorm());
  }
}

TEST_P(ElasticityOrders, ProjectionIsIdempotent) {
  const int k = GetParam();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto& cell : test_cells()) {
    const LocalElasticity op = local_elasticity(cell, k);
    const Eigen::MatrixXd p = op.pi_eps_dofs();
    Eigen::VectorXd v(op.layout.size());
    for (auto& x : v) x = u(rng);
    EXPECT_LT((p * (p * v) - p * v).cwiseAbs().maxCoeff(), 1e-12 * p.cwiseAbs().maxCoeff());
  }
}

TEST_P(ElasticityOrders, RigidMotionsAreInTheKernel) {
  const int k = GetParam();
  for (const auto& cell : test_cells()) {
    const LocalElasticity op = local_elasticity(cell, k);
    const Eigen::MatrixXd a = op.stiffness(1.7);
    const double scale = a.cwiseAbs().maxCoeff();
    const std::vector<VectorField> rbm{
        {[](Point2) { return Point2{1, 0}; }, [](Point2) { return 0.0; }},
        {[](Point2) { return Point2{0, 1}; }, [](Point2) { return 0.0; }},
        {[](Point2 x) { return Point2{-x.y, x.x}; }, [](Point2) { return 0.0; }},
    };
    for (const auto& r : rbm) {
      const Eigen::VectorXd d = interpolate_elasticity(op.layout, cell, r);
      EXPECT_LT((a * d).cwiseAbs().maxCoeff(), 1e-12 * scale);
      EXPECT_LT((op.b * d).cwiseAbs().maxCoeff(), 1e-12);
    }
    // symmetric PSD with a three dimensional kernel
    EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    EXPECT_GT(es.eigenvalues()(0), -1e-12 * scale);
    EXPECT_LT(std::abs(es.eigenvalues()(2)), 1e-12 * scale);
    EXPECT_GT(es.eigenvalues()(3), 1e-6);
  }
}

TEST_P(ElasticityOrders, ConsistencyMatchesExactEnergy) {
  const int k = GetParam();
  std::mt19937 rng(5);
  const double mu = 2.5;
  for (const auto& cell : test_cells()) {
    const LocalElasticity op = local_elasticity(cell, k);
    const Eigen::VectorXd c = random_poly(k, rng);
    const Eigen::VectorXd d = op.dofs_of_basis * c;
    // Independent energy: 2 mu int eps(v):eps(v) by quadrature.
    const QuadratureRule q = polygon_quadrature(cell, 2 * k);
    double energy = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Eigen::Matrix2d j = eval_vector_poly_jacobian(op.basis, c, q.points[i]);
      const Eigen::Matrix2d e = 0.5 * (j + j.transpose());
      energy += q.weights[i] * 2 * mu * (e.array() * e.array()).sum();
    }
    EXPECT_NEAR(d.dot(op.stiffness(mu) * d), energy, 1e-10 * std::max(1.0, energy));
    EXPECT_LT((op.stabilisation * d).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST_P(ElasticityOrders, DivergenceAndL2ProjectionOfPolynomials) {
  const int k = GetParam();
  std::mt19937 rng(9);
  for (const auto& cell : test_cells()) {
    const LocalElasticity op = local_elasticity(cell, k);
    const Eigen::VectorXd c = random_poly(k, rng);
    const Eigen::VectorXd d = op.dofs_of_basis * c;
    const Eigen::VectorXd divc = op.div * d;
    const ScaledMonomials low(op.basis.centre(), op.basis.h(), k - 1);
    const QuadratureRule q = polygon_quadrature(cell, 2 * k);
    // Independent L2 projection onto P_{k-2}^2.
    const int n2 = num_monomials(k - 2);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n2, n2);
    Eigen::VectorXd rx = Eigen::VectorXd::Zero(n2), ry = Eigen::VectorXd::Zero(n2);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Point2 x = q.points[i];
      const double exact_div = eval_vector_poly_jacobian(op.basis, c, x).trace();
      EXPECT_NEAR(low.values(x).dot(divc), exact_div, 1e-10);
      Eigen::VectorXd m(n2);
      const Point2 s = op.basis.to_local(x);
      eval_scaled_monomials(k - 2, s.x, s.y, m.data());
      const Point2 v = eval_vector_poly(op.basis, c, x);
      mass += q.weights[i] * m * m.transpose();
      rx += q.weights[i] * v.x * m;
      ry += q.weights[i] * v.y * m;
    }
    Eigen::VectorXd ref(2 * n2);
    ref << mass.ldlt().solve(rx), mass.ldlt().solve(ry);
    EXPECT_LT((op.pi0 * d - ref).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST_P(ElasticityOrders, LoadEqualsIntegralAgainstProjectedField) {
  const int k = GetParam();
  std::mt19937 rng(13);
  const auto f = [](Point2 x) { return Point2{std::sin(3 * x.x) + x.y, std::cos(2 * x.y) * x.x}; };
  for (const auto& cell : test_cells()) {
    const LocalElasticity op = local_elasticity(cell, k);
    const Eigen::VectorXd fv = local_load_elasticity(op, cell, f, 12);
    const Eigen::VectorXd c = random_poly(k, rng);
    const Eigen::VectorXd p0 = op.pi0 * (op.dofs_of_basis * c);
    // int f . Pi0 v with Pi0 v a known polynomial
    const QuadratureRule q = polygon_quadrature(cell, 12);
    double ref = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) ref += q.weights[i] * dot(f(q.points[i]), eval_vector_poly(op.basis, p0, q.points[i]));
    EXPECT_NEAR(fv.dot(op.dofs_of_basis * c), ref, 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, ElasticityOrders, ::testing::Values(2, 3, 4));

TEST(Elasticity, UnitSquareExamples) {
  const CellGeometry sq = make_cell_geometry({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const LocalElasticity op = local_elasticity(sq, 2);
  const Eigen::VectorXd d =
      interpolate_elasticity(op.layout, sq, {[](Point2 x) { return Point2{x.x, 0}; }, [](Point2) { return 1.0; }});
  EXPECT_NEAR((op.b * d)(0), -1.0, 1e-14);
  EXPECT_NEAR(op.c(0, 0), 1.0, 1e-14);
  const Eigen::VectorXd f0 = local_load_elasticity(op, sq, [](Point2) { return Point2{0, 0}; });
  EXPECT_EQ(f0.cwiseAbs().maxCoeff(), 0.0);
  // constant load against a translation: f . e_x |E|
  const Eigen::VectorXd fc = local_load_elasticity(op, sq, [](Point2) { return Point2{2.0, -1.0}; });
  const Eigen::VectorXd tx =
      interpolate_elasticity(op.layout, sq, {[](Point2) { return Point2{1, 0}; }, [](Point2) { return 0.0; }});
  EXPECT_NEAR(fc.dot(tx), 2.0, 1e-13);
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vemsad/dual.hpp"
#include "vemsad/error.hpp"
#include "vemsad/problem.hpp"

using namespace vemsad;

TEST(Dual, MatchesFiniteDifferences) {
  const auto f = [](const auto& x, const auto& y) {
    using std::cos;
    using std::exp;
    using std::sin;
    return sin(x * y) + exp(0.3 * x) / (1.0 + y * y) - cos(y) * x;
  };
  const double x = 0.37, y = -0.81, h = 1e-4;
  const auto [X, Y] = dual2_variables(x, y);
  const Dual2 v = f(X, Y);
  EXPECT_NEAR(v.v.v, f(x, y), 1e-15);
  EXPECT_NEAR(v.d[0].v, (f(x + h, y) - f(x - h, y)) / (2 * h), 1e-8);
  EXPECT_NEAR(v.d[1].v, (f(x, y + h) - f(x, y - h)) / (2 * h), 1e-8);
  const double fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h);
  EXPECT_NEAR(v.d[0].d[1], fxy, 1e-6);
  EXPECT_NEAR(v.d[1].d[0], fxy, 1e-6);
  const double fxx = (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h);
  EXPECT_NEAR(v.d[0].d[0], fxx, 1e-6);
}

TEST(Problems, Example1PointValues) {
  ModelParameters prm;
  const auto p = example1(prm);
  const ExactValues e = p->evaluate({0, 0});
  EXPECT_NEAR(e.u.x, 0.0, 1e-15);
  EXPECT_NEAR(e.u.y, 0.0, 1e-15);
  EXPECT_NEAR(e.phi, 1.0, 1e-15);
  // grad phi = (pi cos(pi x) + 2x, -pi sin(pi y) + 2y)
  EXPECT_NEAR(e.grad_phi.x, std::numbers::pi, 1e-14);
  EXPECT_NEAR(e.grad_phi.y, 0.0, 1e-14);
  // div u vanishes at the origin
  EXPECT_NEAR(e.p, 1.0, 1e-14);  // p = -lambda div u + phi
  const ExactValues f = example1(prm, true)->evaluate({0.3, 0.6});
  EXPECT_NEAR(f.mobility(0, 0), 0.1, 1e-15);
  EXPECT_EQ(f.mobility(0, 1), 0.0);
}

TEST(Problems, GoverningEquationsHold) {
  ModelParameters prm;
  prm.mu = 1.3;
  prm.lambda = 7.0;
  const std::vector<std::shared_ptr<const ManufacturedProblem>> probs{
      example1(prm), example1(prm, true), example2(example2_parameters()), polynomial_problem(prm, 3, 2, 4),
      mixed_poisson_problem(prm)};
  const std::vector<Point2> pts{{0.21, 0.33}, {0.77, 0.45}, {0.5, 0.91}};
  for (const auto& p : probs) {
    for (Point2 x : pts) {
      if (p->name() == "example2") x = {x.x * 2 - 1, x.y * 2 - 1};
      if (p->name() == "example2" && x.x > 0 && x.y < 0) continue;
      const auto r = p->equation_residuals(x);
      for (double v : r) EXPECT_LT(v, 1e-6) << p->name() << " at " << x.x << "," << x.y;
    }
  }
}

TEST(Problems, Example2Data) {
  const auto p = example2(example2_parameters());
  const ProblemData d = p->data();
  EXPECT_DOUBLE_EQ(d.ell(0.0), 2.0);
  EXPECT_DOUBLE_EQ(d.ell(1.0), 2.5);
  EXPECT_FALSE(d.frozen);
  // M^{-1} is the inverse of the exact mobility at the exact fields
  const Point2 x{-0.4, 0.6};
  const ExactValues e = p->evaluate(x);
  const Eigen::Matrix2d eps = 0.5 * (e.grad_u + e.grad_u.transpose());
  const Eigen::Matrix2d prod = d.inverse_mobility(eps, e.p, x) * e.mobility;
  EXPECT_LT((prod - Eigen::Matrix2d::Identity()).norm(), 1e-12);
  // tr sigma = 0 is a singular coefficient
  try {
    (void)d.inverse_mobility(Eigen::Matrix2d::Zero(), 0.0, x);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::CoefficientSingular);
  }
}

TEST(Problems, BoundaryDataMatchExactFields) {
  const auto p = example1(ModelParameters{});
  const ProblemData d = p->data();
  const Point2 x{0.4, 0.0}, n{0.0, -1.0};
  const ExactValues e = p->evaluate(x);
  EXPECT_NEAR(d.displacement_bc(x).x, e.u.x, 1e-15);
  EXPECT_NEAR(d.concentration_bc(x), e.phi, 1e-15);
  EXPECT_NEAR(d.normal_flux_bc(x, n), -e.zeta.y, 1e-15);
  EXPECT_NEAR(d.traction_bc(x, n).x, -e.sigma(0, 1), 1e-15);
  EXPECT_NEAR(d.source(x), e.g, 1e-15);
}

TEST(Problems, ParameterValidationAndFactory) {
  ModelParameters p;
  EXPECT_NO_THROW(p.validate());
  p.lambda = 0.5;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.theta = 1.0;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_EQ(make_problem("example2", example2_parameters())->name(), "example2");
  try {
    (void)make_problem("nope", p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
  }
}

TEST(Problems, MobilityBoundExample1) {
  const auto p = example1(ModelParameters{});
  const double b = estimate_M_bound([&](Point2 x) { return p->evaluate(x).mobility; }, {0, 0}, {1, 1}, {}, 21);
  // 0.1 exp(-1e-8 tr) sqrt(2) with a tiny trace
  EXPECT_NEAR(b, 0.1 * std::sqrt(2.0), 1e-6);
}

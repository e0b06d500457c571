#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vemsad/error.hpp"
#include "vemsad/geometry.hpp"
#include "vemsad/polybasis.hpp"
#include "vemsad/quadrature.hpp"

using namespace vemsad;

namespace {

// Green's theorem: int_E x^a y^b = int_{dE} x^{a+1} y^b / (a+1) dy, with the
// boundary integrand a polynomial of degree a+b+1 along each straight edge,
// integrated exactly by a generous Gauss rule.
double green_moment(const std::vector<Point2>& loop, int a, int b) {
  double s = 0.0;
  const LineRule& g = gauss_legendre(20);
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Point2 p = loop[i], q = loop[(i + 1) % loop.size()];
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double t = 0.5 * (1.0 + g.nodes[j]);
      const Point2 x = p + t * (q - p);
      s += 0.5 * g.weights[j] * std::pow(x.x, a + 1) * std::pow(x.y, b) / (a + 1) * (q.y - p.y);
    }
  }
  return s;
}

double integrate(const QuadratureRule& q, const std::function<double(Point2)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * f(q.points[i]);
  return s;
}

}  // namespace

TEST(Monomials, CountsAndOrdering) {
  EXPECT_EQ(num_monomials(-1), 0);
  EXPECT_EQ(num_monomials(0), 1);
  EXPECT_EQ(num_monomials(3), 10);
  const auto& idx = multi_indices(2);
  ASSERT_EQ(idx.size(), 6u);
  EXPECT_EQ(idx[1].a, 1);
  EXPECT_EQ(idx[2].b, 1);
  EXPECT_EQ(idx[3].a, 2);
  EXPECT_EQ(idx[5].b, 2);
  for (std::size_t i = 0; i < idx.size(); ++i) EXPECT_EQ(monomial_index(idx[i].a, idx[i].b), static_cast<int>(i));
}

TEST(Monomials, ValuesAndGradientsOnUnitSquare) {
  const ScaledMonomials m({0.5, 0.5}, std::sqrt(2.0), 3);
  const Eigen::VectorXd v = m.values({1.0, 0.5});
  EXPECT_DOUBLE_EQ(v(0), 1.0);
  EXPECT_NEAR(v(1), 0.3535533906, 1e-10);
  EXPECT_NEAR(v(2), 0.0, 1e-15);
  const Eigen::MatrixX2d g = m.gradients({0.3, 0.9});
  EXPECT_NEAR(g(1, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g(1, 1), 0.0, 1e-15);
  // central differences for every monomial
  const Point2 x{0.21, 0.77};
  const double eps = 1e-6;
  const Eigen::MatrixX2d gx = m.gradients(x);
  const Eigen::VectorXd dx = (m.values({x.x + eps, x.y}) - m.values({x.x - eps, x.y})) / (2 * eps);
  const Eigen::VectorXd dy = (m.values({x.x, x.y + eps}) - m.values({x.x, x.y - eps})) / (2 * eps);
  EXPECT_LT((gx.col(0) - dx).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((gx.col(1) - dy).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Monomials, DerivativeAndShiftMatrices) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  const int k = 4;
  Eigen::VectorXd c(num_monomials(k));
  for (auto& v : c) v = u(rng);
  const double xi = 0.3, eta = -0.6, eps = 1e-6;
  Eigen::VectorXd m(num_monomials(k + 1)), mp(num_monomials(k)), mm(num_monomials(k));
  eval_scaled_monomials(k, xi + eps, eta, mp.data());
  eval_scaled_monomials(k, xi - eps, eta, mm.data());
  eval_scaled_monomials(k, xi, eta, m.data());
  const double fd = c.dot(mp - mm) / (2 * eps);
  EXPECT_NEAR((derivative_matrix(k, 0) * c).dot(m.head(num_monomials(k))), fd, 1e-8);
  eval_scaled_monomials(k + 1, xi, eta, m.data());
  EXPECT_NEAR((shift_matrix(k, 1) * c).dot(m), eta * c.dot(m.head(num_monomials(k))), 1e-14);
}

TEST(Monomials, GradPerpSplitDimensions) {
  for (int d = 0; d <= 5; ++d) {
    const GradPerpSplit& s = GradPerpSplit::get(d);
    EXPECT_EQ(s.num_grad() + s.num_perp(), 2 * num_monomials(d));
    const Eigen::MatrixXd id = s.basis() * s.split();
    EXPECT_LT((id - Eigen::MatrixXd::Identity(id.rows(), id.cols())).norm(), 1e-12);
  }
}

TEST(Quadrature, LineRules) {
  const LineRule& l1 = gauss_lobatto(1);
  EXPECT_DOUBLE_EQ(l1.nodes[0], -1.0);
  EXPECT_DOUBLE_EQ(l1.weights[1], 1.0);
  const LineRule& l2 = gauss_lobatto(2);
  EXPECT_NEAR(l2.nodes[1], 0.0, 1e-15);
  EXPECT_NEAR(l2.weights[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(l2.weights[1], 4.0 / 3.0, 1e-15);
  const LineRule& l3 = gauss_lobatto(3);
  EXPECT_NEAR(l3.nodes[2], 1.0 / std::sqrt(5.0), 1e-15);
  for (int k = 1; k <= 8; ++k) {
    const LineRule& r = gauss_lobatto(k);
    for (int p = 0; p <= 2 * k - 1; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
      EXPECT_NEAR(s, p % 2 ? 0.0 : 2.0 / (p + 1), 1e-13) << "k=" << k << " p=" << p;
    }
  }
  for (int n = 1; n <= 12; ++n) {
    const LineRule& r = gauss_legendre(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
      EXPECT_NEAR(s, p % 2 ? 0.0 : 2.0 / (p + 1), 1e-13);
    }
  }
}

TEST(Quadrature, UnitSquareExamples) {
  const CellGeometry sq = make_cell_geometry({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_NEAR(integrate(polygon_quadrature(sq, 0), [](Point2) { return 1.0; }), 1.0, 1e-14);
  EXPECT_NEAR(integrate(polygon_quadrature(sq, 2), [](Point2 p) { return p.x * p.y; }), 0.25, 1e-14);
  EXPECT_NEAR(integrate(polygon_quadrature(sq, 5), [](Point2 p) { return p.x * p.x * p.x * p.y * p.y; }),
              1.0 / 12.0, 1e-14);
}

TEST(Quadrature, ExactOnPolygonsAgainstGreen) {
  std::vector<std::vector<Point2>> shapes{
      {{0, 0}, {1, 0}, {1, 1}, {0, 1}},
      {{0.1, 0.2}, {0.9, 0.1}, {0.4, 0.8}},
      {{0, 0}, {1, 0}, {1.3, 0.6}, {0.7, 1.2}, {0.1, 0.9}},
      {{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}},  // non-convex, centroid outside kernel
  };
  for (const auto& loop : shapes) {
    const CellGeometry cell = make_cell_geometry(loop);
    for (int deg = 0; deg <= 10; ++deg) {
      const QuadratureRule q = polygon_quadrature(cell, deg);
      double wsum = 0.0;
      for (double w : q.weights) wsum += w;
      EXPECT_NEAR(wsum, cell.area, 1e-13 * cell.area);
      for (int a = 0; a <= deg; ++a) {
        const int b = deg - a;
        const double ref = green_moment(loop, a, b);
        const double got = integrate(q, [&](Point2 p) { return std::pow(p.x, a) * std::pow(p.y, b); });
        EXPECT_NEAR(got, ref, 1e-12 * std::max(1.0, std::abs(ref))) << "deg " << deg << " a " << a;
      }
    }
  }
}

TEST(Quadrature, EmptyKernelRejected) {
  const CellGeometry comb = make_cell_geometry({{0, 0}, {5, 0}, {5, 3}, {4, 3}, {4, 1}, {3, 1}, {3, 3}, {2, 3},
                                                {2, 1}, {1, 1}, {1, 3}, {0, 3}});
  try {
    polygon_quadrature(comb, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CentroidOutsideKernel);
  }
}

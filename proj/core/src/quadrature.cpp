#include "vemsad/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "vemsad/error.hpp"

namespace vemsad {

namespace {

constexpr int kMaxPoints = 40;

// Legendre P_n and its derivative at x.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

LineRule build_gauss_legendre(int n) {
  LineRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre(n, x);
    (void)p;
    r.nodes[static_cast<std::size_t>(i)] = x;
    r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

LineRule build_gauss_lobatto(int k) {
  LineRule r;
  r.nodes.resize(static_cast<std::size_t>(k + 1));
  r.weights.resize(static_cast<std::size_t>(k + 1));
  r.nodes.front() = -1.0;
  r.nodes.back() = 1.0;
  // Interior nodes are the roots of P_k'; Newton with P_k'' from the Legendre ODE.
  for (int i = 1; i < k; ++i) {
    double x = -std::cos(std::numbers::pi * i / k);
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(k, x);
      const double ddp = (2.0 * x * dp - k * (k + 1) * p) / (1.0 - x * x);
      const double dx = dp / ddp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[static_cast<std::size_t>(i)] = x;
  }
  for (int i = 0; i <= k; ++i) {
    const double x = r.nodes[static_cast<std::size_t>(i)];
    const double p = (i == 0 || i == k) ? ((i == 0 && k % 2 == 1) ? -1.0 : 1.0) : legendre(k, x).first;
    r.weights[static_cast<std::size_t>(i)] = 2.0 / (k * (k + 1) * p * p);
  }
  return r;
}

}  // namespace

const LineRule& gauss_legendre(int n) {
  static const std::vector<LineRule> table = [] {
    std::vector<LineRule> t(kMaxPoints + 1);
    for (int n = 1; n <= kMaxPoints; ++n) t[static_cast<std::size_t>(n)] = build_gauss_legendre(n);
    return t;
  }();
  if (n < 1 || n > kMaxPoints) raise(ErrorCode::InvalidArgument, "Gauss-Legendre point count out of range");
  return table[static_cast<std::size_t>(n)];
}

const LineRule& gauss_lobatto(int k) {
  static const std::vector<LineRule> table = [] {
    std::vector<LineRule> t(kMaxPoints + 1);
    for (int k = 1; k <= kMaxPoints; ++k) t[static_cast<std::size_t>(k)] = build_gauss_lobatto(k);
    return t;
  }();
  if (k < 1 || k > kMaxPoints) raise(ErrorCode::InvalidArgument, "Gauss-Lobatto order out of range");
  return table[static_cast<std::size_t>(k)];
}

void lagrange_basis(std::span<const double> nodes, double t, double* out) {
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) v *= (t - nodes[j]) / (nodes[i] - nodes[j]);
    out[i] = v;
  }
}

QuadratureRule segment_quadrature(Point2 a, Point2 b, int npoints) {
  const LineRule& g = gauss_legendre(npoints);
  const double half = 0.5 * distance(a, b);
  QuadratureRule q;
  q.degree = 2 * npoints - 1;
  q.points.reserve(g.size());
  q.weights.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = 0.5 * (1.0 + g.nodes[i]);
    q.points.push_back(a + s * (b - a));
    q.weights.push_back(half * g.weights[i]);
  }
  return q;
}

std::vector<double> lobatto_edge_moments(Point2 a, Point2 b, int k, const std::function<double(Point2)>& g,
                                         int npoints) {
  const LineRule& lob = gauss_lobatto(k);
  const QuadratureRule q = segment_quadrature(a, b, npoints);
  const LineRule& gl = gauss_legendre(npoints);
  std::vector<double> out(static_cast<std::size_t>(k + 1), 0.0);
  std::vector<double> l(static_cast<std::size_t>(k + 1));
  for (std::size_t i = 0; i < q.size(); ++i) {
    lagrange_basis(lob.nodes, gl.nodes[i], l.data());
    const double gv = q.weights[i] * g(q.points[i]);
    for (std::size_t j = 0; j < l.size(); ++j) out[j] += gv * l[j];
  }
  return out;
}

QuadratureRule polygon_quadrature(const CellGeometry& cell, int degree) {
  if (degree < 0) raise(ErrorCode::InvalidArgument, "negative quadrature degree");
  const std::size_t m = cell.size();
  Point2 apex = cell.centroid;
  const double tol = 1e-12 * cell.diameter * cell.diameter;
  bool visible = true;
  for (std::size_t i = 0; i < m && visible; ++i)
    visible = cross(cell.vertex(i + 1) - cell.vertex(i), apex - cell.vertex(i)) > tol;
  if (!visible) {
    const auto [c, r] = kernel_chebyshev_disk(cell.vertices);
    if (r <= 0.0) raise(ErrorCode::CentroidOutsideKernel, "polygon has an empty kernel; no fan quadrature exists");
    apex = c;
  }

  // P(s,t) = A + s (B - A) + s t (C - B) with Jacobian s |det|; the s
  // direction carries one extra degree from the Jacobian.
  const LineRule& gs = gauss_legendre(std::max(1, (degree + 3) / 2));
  const LineRule& gt = gauss_legendre(std::max(1, (degree + 2) / 2));
  QuadratureRule q;
  q.degree = degree;
  q.points.reserve(m * gs.size() * gt.size());
  q.weights.reserve(m * gs.size() * gt.size());
  for (std::size_t e = 0; e < m; ++e) {
    const Point2 b = cell.vertex(e);
    const Point2 c = cell.vertex(e + 1);
    const double det = cross(b - apex, c - b);
    if (std::abs(det) <= tol) continue;  // degenerate sliver contributes nothing
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const double s = 0.5 * (1.0 + gs.nodes[i]);
      for (std::size_t j = 0; j < gt.size(); ++j) {
        const double t = 0.5 * (1.0 + gt.nodes[j]);
        q.points.push_back(apex + s * (b - apex) + (s * t) * (c - b));
        q.weights.push_back(0.25 * gs.weights[i] * gt.weights[j] * s * std::abs(det));
      }
    }
  }
  return q;
}

}  // namespace vemsad

#include "vemsad/polybasis.hpp"

#include <array>

#include "vemsad/error.hpp"

namespace vemsad {

namespace {

constexpr int kMaxDegree = 12;

void check_degree(int k) {
  if (k < -1 || k > kMaxDegree) raise(ErrorCode::InvalidArgument, "polynomial degree out of supported range");
}

}  // namespace

const std::vector<MultiIndex>& multi_indices(int k) {
  static const std::vector<std::vector<MultiIndex>> table = [] {
    std::vector<std::vector<MultiIndex>> t(kMaxDegree + 2);
    for (int k = 0; k <= kMaxDegree + 1; ++k)
      for (int d = 0; d <= k; ++d)
        for (int a = d; a >= 0; --a) t[static_cast<std::size_t>(k)].push_back({a, d - a});
    return t;
  }();
  static const std::vector<MultiIndex> empty;
  if (k < 0) return empty;
  check_degree(k);
  return table[static_cast<std::size_t>(k)];
}

void eval_scaled_monomials(int k, double xi, double eta, double* out) {
  if (k < 0) return;
  out[0] = 1.0;
  // Each degree block follows from the previous one: multiply by xi, and the
  // last entry (pure eta power) by eta.
  for (int d = 1; d <= k; ++d) {
    const int prev = (d - 1) * d / 2;
    const int cur = d * (d + 1) / 2;
    for (int j = 0; j < d; ++j) out[cur + j] = out[prev + j] * xi;
    out[cur + d] = out[prev + d - 1] * eta;
  }
}

ScaledMonomials::ScaledMonomials(Point2 centre, double h, int degree)
    : centre_(centre), h_(h), degree_(degree) {
  check_degree(degree);
}

Eigen::VectorXd ScaledMonomials::values(Point2 x) const {
  Eigen::VectorXd v(size());
  values(x, v.data());
  return v;
}

void ScaledMonomials::values(Point2 x, double* out) const {
  const Point2 s = to_local(x);
  eval_scaled_monomials(degree_, s.x, s.y, out);
}

Eigen::MatrixX2d ScaledMonomials::gradients(Point2 x) const {
  const Point2 s = to_local(x);
  Eigen::VectorXd low(std::max(1, num_monomials(degree_ - 1)));
  eval_scaled_monomials(degree_ - 1, s.x, s.y, low.data());
  Eigen::MatrixX2d g = Eigen::MatrixX2d::Zero(size(), 2);
  const auto& idx = multi_indices(degree_);
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = idx[static_cast<std::size_t>(i)];
    if (a > 0) g(i, 0) = a * low(monomial_index(a - 1, b)) / h_;
    if (b > 0) g(i, 1) = b * low(monomial_index(a, b - 1)) / h_;
  }
  return g;
}

const Eigen::MatrixXd& derivative_matrix(int k, int dir) {
  static const std::vector<std::array<Eigen::MatrixXd, 2>> table = [] {
    std::vector<std::array<Eigen::MatrixXd, 2>> t(kMaxDegree + 1);
    for (int k = 0; k <= kMaxDegree; ++k) {
      const int n = num_monomials(k);
      for (int d = 0; d < 2; ++d) t[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)] = Eigen::MatrixXd::Zero(n, n);
      const auto& idx = multi_indices(k);
      for (int i = 0; i < n; ++i) {
        const auto [a, b] = idx[static_cast<std::size_t>(i)];
        if (a > 0) t[static_cast<std::size_t>(k)][0](monomial_index(a - 1, b), i) = a;
        if (b > 0) t[static_cast<std::size_t>(k)][1](monomial_index(a, b - 1), i) = b;
      }
    }
    return t;
  }();
  if (k < 0 || k > kMaxDegree || dir < 0 || dir > 1) raise(ErrorCode::InvalidArgument, "derivative_matrix arguments");
  return table[static_cast<std::size_t>(k)][static_cast<std::size_t>(dir)];
}

const Eigen::MatrixXd& shift_matrix(int k, int dir) {
  static const std::vector<std::array<Eigen::MatrixXd, 2>> table = [] {
    std::vector<std::array<Eigen::MatrixXd, 2>> t(kMaxDegree);
    for (int k = 0; k < kMaxDegree; ++k) {
      const int n = num_monomials(k);
      for (int d = 0; d < 2; ++d)
        t[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)] = Eigen::MatrixXd::Zero(num_monomials(k + 1), n);
      const auto& idx = multi_indices(k);
      for (int i = 0; i < n; ++i) {
        const auto [a, b] = idx[static_cast<std::size_t>(i)];
        t[static_cast<std::size_t>(k)][0](monomial_index(a + 1, b), i) = 1.0;
        t[static_cast<std::size_t>(k)][1](monomial_index(a, b + 1), i) = 1.0;
      }
    }
    return t;
  }();
  if (k < 0 || k >= kMaxDegree || dir < 0 || dir > 1) raise(ErrorCode::InvalidArgument, "shift_matrix arguments");
  return table[static_cast<std::size_t>(k)][static_cast<std::size_t>(dir)];
}

GradPerpSplit::GradPerpSplit(int d) : d_(d) {
  const int n = num_monomials(d);
  basis_ = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  int col = 0;
  const auto& up = multi_indices(d + 1);
  for (std::size_t i = 1; i < up.size(); ++i, ++col) {
    const auto [a, b] = up[i];
    if (a > 0) basis_(monomial_index(a - 1, b), col) = a;
    if (b > 0) basis_(n + monomial_index(a, b - 1), col) = b;
  }
  for (const auto& [a, b] : multi_indices(d - 1)) {
    // m_perp m_beta = (eta m_beta, -xi m_beta)
    basis_(monomial_index(a, b + 1), col) = 1.0;
    basis_(n + monomial_index(a + 1, b), col) = -1.0;
    ++col;
  }
  split_ = basis_.fullPivLu().inverse();
}

const GradPerpSplit& GradPerpSplit::get(int d) {
  static const std::vector<GradPerpSplit> table = [] {
    std::vector<GradPerpSplit> t;
    for (int d = 0; d < kMaxDegree; ++d) t.emplace_back(d);
    return t;
  }();
  if (d < 0 || d >= kMaxDegree) raise(ErrorCode::InvalidArgument, "GradPerpSplit degree out of range");
  return table[static_cast<std::size_t>(d)];
}

}  // namespace vemsad

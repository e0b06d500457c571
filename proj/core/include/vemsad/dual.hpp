#pragma once

#include <array>
#include <cmath>

namespace vemsad {

/// Forward-mode dual number with two partial derivatives (d/dx, d/dy).
/// Nesting Dual<Dual<double>> carries second derivatives.
template <typename T>
struct Dual {
  T v{};
  std::array<T, 2> d{};

  Dual() = default;
  Dual(double c) : v(c), d{T(0.0), T(0.0)} {}  // NOLINT: implicit constants are intended
  Dual(T value, std::array<T, 2> grad) : v(value), d(grad) {}

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, {a.d[0] + b.d[0], a.d[1] + b.d[1]}}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, {a.d[0] - b.d[0], a.d[1] - b.d[1]}}; }
  friend Dual operator-(const Dual& a) { return {-a.v, {-a.d[0], -a.d[1]}}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, {a.d[0] * b.v + a.v * b.d[0], a.d[1] * b.v + a.v * b.d[1]}};
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const T inv = T(1.0) / b.v;
    const T q = a.v * inv;
    return {q, {(a.d[0] - q * b.d[0]) * inv, (a.d[1] - q * b.d[1]) * inv}};
  }
  friend Dual operator+(const Dual& a, double c) { return {a.v + c, a.d}; }
  friend Dual operator+(double c, const Dual& a) { return a + c; }
  friend Dual operator-(const Dual& a, double c) { return {a.v - c, a.d}; }
  friend Dual operator-(double c, const Dual& a) { return {c - a.v, {-a.d[0], -a.d[1]}}; }
  friend Dual operator*(const Dual& a, double c) { return {a.v * c, {a.d[0] * c, a.d[1] * c}}; }
  friend Dual operator*(double c, const Dual& a) { return a * c; }
  friend Dual operator/(const Dual& a, double c) { return a * (1.0 / c); }
  friend Dual operator/(double c, const Dual& a) { return Dual(c) / a; }

  friend Dual sin(const Dual& a) {
    using std::cos;
    using std::sin;
    const T c = cos(a.v);
    return {sin(a.v), {c * a.d[0], c * a.d[1]}};
  }
  friend Dual cos(const Dual& a) {
    using std::cos;
    using std::sin;
    const T s = -sin(a.v);
    return {cos(a.v), {s * a.d[0], s * a.d[1]}};
  }
  friend Dual exp(const Dual& a) {
    using std::exp;
    const T e = exp(a.v);
    return {e, {e * a.d[0], e * a.d[1]}};
  }
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual<double>>;

/// Independent variables x and y at a point, carrying second derivatives.
inline std::array<Dual2, 2> dual2_variables(double x, double y) {
  const Dual1 one(1.0), zero(0.0);
  return {Dual2(Dual1(x, {1.0, 0.0}), {one, zero}), Dual2(Dual1(y, {0.0, 1.0}), {zero, one})};
}

}  // namespace vemsad

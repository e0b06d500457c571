#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "vemsad/dual.hpp"
#include "vemsad/error.hpp"
#include "vemsad/problem.hpp"

namespace vemsad {

void ModelParameters::validate() const {
  std::ostringstream os;
  if (!(mu > 0.0)) os << "mu must be positive; ";
  if (!(lambda >= 1.0)) os << "lambda must be >= 1; ";
  if (!(M >= 1.0)) os << "M must be >= 1; ";
  if (!(theta >= 0.0) || theta > 1.0 / M * (1.0 + 1e-12)) os << "theta must lie in [0, 1/M]; ";
  if (!os.str().empty()) raise(ErrorCode::InvalidArgument, os.str());
}

std::array<double, 4> ManufacturedProblem::equation_residuals(Point2 x, double step) const {
  const ExactValues e = evaluate(x);
  const ProblemData d = data();
  const ModelParameters& prm = params();
  const auto at = [&](double dx, double dy) { return evaluate({x.x + dx, x.y + dy}); };
  const ExactValues xp = at(step, 0), xm = at(-step, 0), yp = at(0, step), ym = at(0, -step);
  // momentum balance with the stress differentiated numerically
  const double s = 1.0 / (2.0 * step);
  const Point2 div_sigma{(xp.sigma(0, 0) - xm.sigma(0, 0)) * s + (yp.sigma(0, 1) - ym.sigma(0, 1)) * s,
                         (xp.sigma(1, 0) - xm.sigma(1, 0)) * s + (yp.sigma(1, 1) - ym.sigma(1, 1)) * s};
  const double scale1 = std::max({1.0, norm(e.f), e.sigma.norm()});
  const double r1 = norm(e.f + div_sigma) / scale1;
  // Herrmann pressure with the displacement differentiated numerically
  const double div_u = (xp.u.x - xm.u.x) * s + (yp.u.y - ym.u.y) * s;
  const double r2 = std::abs(e.p + prm.lambda * div_u - d.ell(e.phi)) / std::max({1.0, std::abs(e.p)});
  // constitutive flux law
  const Point2 grad_phi{(xp.phi - xm.phi) * s, (yp.phi - ym.phi) * s};
  const Point2 mg{e.mobility(0, 0) * grad_phi.x + e.mobility(0, 1) * grad_phi.y,
                  e.mobility(1, 0) * grad_phi.x + e.mobility(1, 1) * grad_phi.y};
  const double r3 = norm(e.zeta - mg) / std::max(1.0, norm(e.zeta));
  // mass balance
  const double div_zeta = (xp.zeta.x - xm.zeta.x) * s + (yp.zeta.y - ym.zeta.y) * s;
  const double r4 =
      std::abs(prm.theta * e.phi - div_zeta - e.g) / std::max({1.0, std::abs(e.g), std::abs(div_zeta)});
  return {r1, r2, r3, r4};
}

namespace {

constexpr double kPi = std::numbers::pi;

// Exact data from templated definitions of u, phi, l and the scalar mobility
// m(tr sigma) (the mobility tensor is m I). Derivatives come from nested dual
// numbers, so f and g are exact up to round-off.
template <typename Def>
class DualProblem : public ManufacturedProblem, public std::enable_shared_from_this<DualProblem<Def>> {
public:
  DualProblem(std::string name, ModelParameters prm, Def def, MeshFamily family, BoundaryClassifier classifier,
              Point2 focus)
      : name_(std::move(name)),
        prm_(prm),
        def_(std::move(def)),
        family_(family),
        classifier_(std::move(classifier)),
        focus_(focus) {}

  [[nodiscard]] std::string name() const override { return name_; }
  [[nodiscard]] const ModelParameters& params() const override { return prm_; }
  [[nodiscard]] MeshFamily default_family() const override { return family_; }
  [[nodiscard]] BoundaryClassifier classifier() const override { return classifier_; }
  [[nodiscard]] Point2 focus() const override { return focus_; }

  [[nodiscard]] ExactValues evaluate(Point2 x) const override {
    const double mu = prm_.mu;
    const auto [X, Y] = dual2_variables(x.x, x.y);
    const std::array<Dual2, 2> U = def_.u(X, Y);
    const Dual2 P = def_.phi(X, Y);
    ExactValues e;
    e.u = {U[0].v.v, U[1].v.v};
    for (int c = 0; c < 2; ++c)
      for (int j = 0; j < 2; ++j) e.grad_u(c, j) = U[c].d[j].v;
    const Dual1 div_u = U[0].d[0] + U[1].d[1];
    const Dual1 phi = P.v;
    const Dual1 p = -prm_.lambda * div_u + def_.ell(phi);
    const Dual1 tr_sigma = 2.0 * mu * div_u - 2.0 * p;
    const Dual1 m = def_.mobility(tr_sigma);
    const Dual1 z0 = m * P.d[0];
    const Dual1 z1 = m * P.d[1];
    e.p = p.v;
    e.grad_p = {p.d[0], p.d[1]};
    const Eigen::Matrix2d eps = 0.5 * (e.grad_u + e.grad_u.transpose());
    e.sigma = 2.0 * mu * eps - p.v * Eigen::Matrix2d::Identity();
    // div eps(u)_i = sum_j (d_jj u_i + d_ij u_j) / 2
    Point2 div_eps;
    div_eps.x = U[0].d[0].d[0] + 0.5 * (U[0].d[1].d[1] + U[1].d[0].d[1]);
    div_eps.y = U[1].d[1].d[1] + 0.5 * (U[1].d[0].d[0] + U[0].d[0].d[1]);
    e.f = -1.0 * (2.0 * mu * div_eps - e.grad_p);
    e.phi = phi.v;
    e.grad_phi = {phi.d[0], phi.d[1]};
    e.zeta = {z0.v, z1.v};
    e.div_zeta = z0.d[0] + z1.d[1];
    e.g = prm_.theta * e.phi - e.div_zeta;
    e.mobility = m.v * Eigen::Matrix2d::Identity();
    return e;
  }

  [[nodiscard]] ProblemData data() const override {
    const auto self = this->shared_from_this();
    ProblemData d;
    d.params = prm_;
    d.frozen = def_.frozen();
    d.ell = [self](double phi) { return self->def_.ell(phi); };
    d.inverse_mobility = [self](const Eigen::Matrix2d& eps, double p, Point2 x) -> Eigen::Matrix2d {
      const double tr = 2.0 * self->prm_.mu * eps.trace() - 2.0 * p;
      if (std::abs(tr) < self->def_.singular_tolerance()) {
        std::ostringstream os;
        os << "mobility singular: |tr sigma| = " << std::abs(tr) << " at (" << x.x << ", " << x.y << ")";
        raise(ErrorCode::CoefficientSingular, os.str());
      }
      const double m = self->def_.mobility(tr);
      if (!(m > 0.0) || !std::isfinite(m)) {
        std::ostringstream os;
        os << "mobility " << m << " not positive at (" << x.x << ", " << x.y << ")";
        raise(ErrorCode::CoefficientNotSPD, os.str());
      }
      return Eigen::Matrix2d::Identity() / m;
    };
    d.body_force = [self](Point2 x) { return self->evaluate(x).f; };
    d.source = [self](Point2 x) { return self->evaluate(x).g; };
    d.displacement_bc = [self](Point2 x) {
      const auto u = self->def_.u(x.x, x.y);
      return Point2{u[0], u[1]};
    };
    d.traction_bc = [self](Point2 x, Point2 n) {
      const Eigen::Matrix2d s = self->evaluate(x).sigma;
      return Point2{s(0, 0) * n.x + s(0, 1) * n.y, s(1, 0) * n.x + s(1, 1) * n.y};
    };
    d.concentration_bc = [self](Point2 x) { return self->def_.phi(x.x, x.y); };
    d.concentration_bc_gradient = [self](Point2 x) { return self->evaluate(x).grad_phi; };
    d.normal_flux_bc = [self](Point2 x, Point2 n) { return dot(self->evaluate(x).zeta, n); };
    return d;
  }

private:
  std::string name_;
  ModelParameters prm_;
  Def def_;
  MeshFamily family_;
  BoundaryClassifier classifier_;
  Point2 focus_;
};

struct Example1Def {
  bool is_frozen = false;
  [[nodiscard]] bool frozen() const { return is_frozen; }
  [[nodiscard]] double singular_tolerance() const { return 0.0; }
  template <typename T>
  std::array<T, 2> u(const T& x, const T& y) const {
    using std::cos;
    using std::sin;
    return {0.2 * (x * x + x * cos(x) * sin(y)), 0.2 * (y * y + x * cos(y) * sin(x))};
  }
  template <typename T>
  T phi(const T& x, const T& y) const {
    using std::cos;
    using std::sin;
    return cos(kPi * y) + sin(kPi * x) + x * x + y * y;
  }
  template <typename T>
  T ell(const T& phi) const {
    return is_frozen ? 0.0 * phi : phi;
  }
  template <typename T>
  T mobility(const T& tr_sigma) const {
    using std::exp;
    return is_frozen ? T(0.1) : 0.1 * exp(-1e-8 * tr_sigma);
  }
};

struct Example2Def {
  Point2 c;
  [[nodiscard]] bool frozen() const { return false; }
  [[nodiscard]] double singular_tolerance() const { return 1e-14; }
  template <typename T>
  T r2(const T& x, const T& y) const {
    return (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y);
  }
  template <typename T>
  std::array<T, 2> u(const T& x, const T& y) const {
    const T r = r2(x, y);
    return {(x - 1.0) * (y - 1.0) / r, (x + 1.0) * (y + 1.0) / r};
  }
  template <typename T>
  T phi(const T& x, const T& y) const {
    return (x - 1.0) * (x + 1.0) * (y - 1.0) * (y + 1.0) / r2(x, y);
  }
  template <typename T>
  T ell(const T& phi) const {
    return 2.0 + phi * phi / (1.0 + phi * phi);
  }
  template <typename T>
  T mobility(const T& tr_sigma) const {
    return 1.0 + 1e-5 / tr_sigma;
  }
};

// Bivariate polynomial sum c_ab x^a y^b with a + b <= degree.
struct Poly2 {
  int degree = 0;
  std::vector<double> c;  // row-major in (a, b), a + b <= degree
  template <typename T>
  T operator()(const T& x, const T& y) const {
    T sum(0.0);
    std::size_t i = 0;
    T xa(1.0);
    for (int a = 0; a <= degree; ++a) {
      T term = xa;
      for (int b = 0; a + b <= degree; ++b) {
        sum += c[i++] * term;
        term = term * y;
      }
      xa = xa * x;
    }
    return sum;
  }
  static Poly2 random(int degree, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Poly2 p;
    p.degree = degree;
    p.c.resize(static_cast<std::size_t>((degree + 1) * (degree + 2) / 2));
    for (double& v : p.c) v = u(rng);
    return p;
  }
};

struct PolynomialDef {
  Poly2 ux, uy, ph;
  [[nodiscard]] bool frozen() const { return true; }
  [[nodiscard]] double singular_tolerance() const { return 0.0; }
  template <typename T>
  std::array<T, 2> u(const T& x, const T& y) const {
    return {ux(x, y), uy(x, y)};
  }
  template <typename T>
  T phi(const T& x, const T& y) const {
    return ph(x, y);
  }
  template <typename T>
  T ell(const T& phi) const {
    return 0.0 * phi;
  }
  template <typename T>
  T mobility(const T&) const {
    return T(1.0);
  }
};

struct MixedPoissonDef {
  [[nodiscard]] bool frozen() const { return true; }
  [[nodiscard]] double singular_tolerance() const { return 0.0; }
  template <typename T>
  std::array<T, 2> u(const T& x, const T&) const {
    return {0.0 * x, 0.0 * x};
  }
  template <typename T>
  T phi(const T& x, const T& y) const {
    return Example1Def{}.phi(x, y);
  }
  template <typename T>
  T ell(const T& phi) const {
    return 0.0 * phi;
  }
  template <typename T>
  T mobility(const T&) const {
    return T(1.0);
  }
};

}  // namespace

std::shared_ptr<const ManufacturedProblem> example1(const ModelParameters& params, bool frozen) {
  return std::make_shared<DualProblem<Example1Def>>(frozen ? "example1_frozen" : "example1", params,
                                                    Example1Def{frozen}, MeshFamily::Square,
                                                    unit_square_classifier, Point2{0.5, 0.5});
}

ModelParameters example2_parameters() {
  ModelParameters p;
  p.mu = 1.4286e3;
  p.lambda = 357.1429;
  p.theta = 1e-3;
  p.M = 2.0;
  return p;
}

std::shared_ptr<const ManufacturedProblem> example2(const ModelParameters& params, Point2 centre) {
  return std::make_shared<DualProblem<Example2Def>>("example2", params, Example2Def{centre}, MeshFamily::LShape,
                                                    l_shape_classifier, centre);
}

std::shared_ptr<const ManufacturedProblem> polynomial_problem(const ModelParameters& params, int k1, int k2,
                                                              unsigned seed) {
  std::mt19937 rng(seed);
  PolynomialDef def;
  def.ux = Poly2::random(k1, rng);
  def.uy = Poly2::random(k1, rng);
  def.ph = Poly2::random(k2, rng);
  return std::make_shared<DualProblem<PolynomialDef>>("polynomial", params, def, MeshFamily::Square,
                                                      unit_square_classifier, Point2{0.5, 0.5});
}

std::shared_ptr<const ManufacturedProblem> mixed_poisson_problem(const ModelParameters& params) {
  return std::make_shared<DualProblem<MixedPoissonDef>>("mixed_poisson", params, MixedPoissonDef{},
                                                        MeshFamily::Square, unit_square_classifier,
                                                        Point2{0.5, 0.5});
}

std::shared_ptr<const ManufacturedProblem> make_problem(const std::string& name, const ModelParameters& params) {
  if (name == "example1") return example1(params, false);
  if (name == "example1_frozen") return example1(params, true);
  if (name == "example2") return example2(params);
  raise(ErrorCode::ConfigError, "unknown problem '" + name + "' (expected example1, example1_frozen or example2)");
}

double estimate_M_bound(const std::function<Eigen::Matrix2d(Point2)>& mobility, Point2 lo, Point2 hi,
                        const std::function<bool(Point2)>& inside, int n) {
  if (n < 2) raise(ErrorCode::InvalidArgument, "sample grid needs n >= 2");
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point2 x{lo.x + (hi.x - lo.x) * i / (n - 1), lo.y + (hi.y - lo.y) * j / (n - 1)};
      if (inside && !inside(x)) continue;
      const double v = mobility(x).norm();  // Frobenius
      if (std::isfinite(v)) best = std::max(best, v);
    }
  }
  return best;
}

}  // namespace vemsad

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include <Eigen/QR>

#include "petrov/catalog.hpp"

namespace petrov::catalog {

namespace {

using spaceform::QuadricFunction;
using spaceform::QuadricVariant;

constexpr double kPi = std::numbers::pi;
const double kR2 = std::sqrt(2.0);

// ---- small vector helpers shared by the parametrized charts ----

DualVector operator+(DualVector a, const DualVector& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

DualVector operator*(const Dual& s, DualVector v) {
  for (auto& x : v) x *= s;
  return v;
}

RealVector unit(int i, int n) {
  RealVector e = RealVector::Zero(n);
  e(i - 1) = 1.0;
  return e;
}

RealMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  RealMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

RealMatrix columns(std::initializer_list<RealVector> cols) {
  RealMatrix m(cols.begin()->size(), static_cast<Eigen::Index>(cols.size()));
  Eigen::Index c = 0;
  for (const auto& v : cols) m.col(c++) = v;
  return m;
}

RealMatrix jordan_sum(std::initializer_list<std::pair<int, double>> blocks) {
  std::vector<RealMatrix> parts;
  for (const auto& [m, lambda] : blocks) parts.push_back(linalg::jordan_block(m, lambda));
  return linalg::direct_sum(parts);
}

// sin(t), with exact zeros on the lattice t = n pi so that region membership
// and the closed-form shape agree.
double lattice_sin(double t) {
  const double s = std::sin(t);
  return std::fabs(s) <= 1e-12 * std::max(1.0, std::fabs(t)) ? 0.0 : s;
}

int sine_region(double t) {
  const double s = lattice_sin(t);
  return s == 0.0 ? 0 : s > 0 ? 1 : 2;
}

const char* const kSineRegions[] = {"{n pi}", "(2n pi, (2n+1) pi)", "((2n+1) pi, (2n+2) pi)"};

double sine_region_sample(int region, Sampler& rng) {
  const double n = std::floor(rng.uniform(0.0, 3.0)) - 1.0;
  if (region == 0) return (2.0 * n + (rng.uniform() < 0.5 ? 0.0 : 1.0)) * kPi;
  const double offset = rng.uniform(0.15, kPi - 0.15);
  return (2.0 * n + (region == 1 ? 0.0 : 1.0)) * kPi + offset;
}

ExpectedType expect(int index, Label label, std::string source, std::string region = "all",
                    std::optional<int> epsilon = std::nullopt) {
  return ExpectedType{index, label, epsilon, std::move(region), std::move(source)};
}

// ---- Example 0-1: a surface in R^3_1 whose type changes with v ----

class Example01 final : public HypersurfaceExample {
 public:
  Example01() : HypersurfaceExample("0-1", SpaceForm::flat(3, 1), 2, 1, false) {}

  std::string description() const override { return "f(u,v) = u a1 + v a2 - sin(v) e3 in R^3_1"; }

  DualVector immersion(const DualVector& q) const override {
    const Dual& u = q[0];
    const Dual& v = q[1];
    return {(u + v) / kR2, (u - v) / kR2, -sin(v)};
  }

  RealVector normal(const RealVector& q) const override {
    const double c = std::cos(q(1)) / kR2;
    return (RealVector(3) << c, c, -1.0).finished();
  }

  RealMatrix frame(const RealVector& q, FrameOption) const override { return jacobian(q); }

  RealMatrix shape(const RealVector& q, FrameOption) const override {
    return from_rows({{0.0, lattice_sin(q(1))}, {0.0, 0.0}});
  }

  int region_count() const override { return 3; }
  int region_of(const RealVector& q) const override { return sine_region(q(1)); }
  std::string region_name(int r) const override { return std::string("v in ") + kSineRegions[r]; }

  ExpectedType expected_type(const RealVector& q) const override {
    const int r = region_of(q);
    if (r == 0) return expect(1, Label::I, "table-3", region_name(r));
    return expect(1, Label::II, "table-3", region_name(r), r == 1 ? -1 : 1);
  }

  RealVector anchor() const override { return (RealVector(2) << 0.0, kPi / 2).finished(); }

 protected:
  RealVector sample_in_region(int region, Sampler& rng) const override {
    const double u = rng.uniform(-2.0, 2.0);
    return (RealVector(2) << u, sine_region_sample(region, rng)).finished();
  }
};

// ---- Example 0-2: a hypersurface of R^5_2 with three types and constant minimal polynomial ----

class Example02 final : public HypersurfaceExample {
 public:
  Example02() : HypersurfaceExample("0-2", SpaceForm::flat(5, 2), 4, 1, false) {}

  std::string description() const override {
    return "f(x,y,z,w) = x a1 + y a2 + z a3 + w a4 + (y^2/2 - sin w) e5 in R^5_2";
  }

  DualVector immersion(const DualVector& q) const override {
    const Dual &x = q[0], &y = q[1], &z = q[2], &w = q[3];
    return {(x + y) / kR2, (z + w) / kR2, (x - y) / kR2, (z - w) / kR2, y * y / 2.0 - sin(w)};
  }

  RealVector normal(const RealVector& q) const override {
    const double y = q(1) / kR2;
    const double c = std::cos(q(3)) / kR2;
    return (RealVector(5) << -y, c, -y, c, -1.0).finished();
  }

  RealMatrix frame(const RealVector& q, FrameOption) const override { return jacobian(q); }

  RealMatrix shape(const RealVector& q, FrameOption) const override {
    RealMatrix s = RealMatrix::Zero(4, 4);
    s(0, 1) = 1.0;
    s(2, 3) = lattice_sin(q(3));
    return s;
  }

  int region_count() const override { return 3; }
  int region_of(const RealVector& q) const override { return sine_region(q(3)); }
  std::string region_name(int r) const override { return std::string("w in ") + kSineRegions[r]; }

  ExpectedType expected_type(const RealVector& q) const override {
    static constexpr Label labels[] = {Label::X, Label::IX_i, Label::IX_ii};
    const int r = region_of(q);
    return expect(2, labels[r], "table-2", region_name(r));
  }

  RealVector anchor() const override { return (RealVector(4) << 0.0, 0.0, 0.0, kPi / 2).finished(); }

 protected:
  RealVector sample_in_region(int region, Sampler& rng) const override {
    RealVector q(4);
    for (int k = 0; k < 3; ++k) q(k) = rng.uniform(-1.0, 1.0);
    q(3) = sine_region_sample(region, rng);
    return q;
  }
};

// ---- Examples k and l: modified Lorentzian families with J3(0) + J1(a) ----

class ExampleKL final : public HypersurfaceExample {
 public:
  ExampleKL(bool is_l, double a)
      : HypersurfaceExample(is_l ? "l" : "k", SpaceForm::flat(5, 2), 4, 1, false), l_(is_l), a_(a) {
    if (!(a > 0) || !std::isfinite(a)) throw Error(ErrorKind::contract, "parameter a must be positive");
    parameter_ = a;
  }

  std::string description() const override {
    std::ostringstream os;
    os << "f(s,u,z,v) = x(s) + u Y(s) + z Z(s) + v V + (1 - R(v))/a C(s), R(v) = sqrt(1 " << (l_ ? "-" : "+")
       << " a^2 v^2), a = " << a_ << ", in R^5_2";
    return os.str();
  }

  void check_domain(const RealVector& q) const override {
    require_dim(q);
    const double z = q(2), v = q(3);
    if (!l_ && std::fabs(z + kR2) <= 1e-9) throw Error(ErrorKind::domain, "domain clause z + sqrt(2) != 0 violated");
    if (l_) {
      if (std::fabs(z - kR2) <= 1e-9) throw Error(ErrorKind::domain, "domain clause z - sqrt(2) != 0 violated");
      if (!(std::fabs(v) < 1.0 / a_)) throw Error(ErrorKind::domain, "domain clause |v| < 1/a violated");
    }
  }

  DualVector immersion(const DualVector& q) const override {
    const Dual &s = q[0], &u = q[1], &z = q[2], &v = q[3];
    const Dual r = radius(v);
    return xs(s) + u * big_y(s) + z * big_z(s) + v * big_v() + ((1.0 - r) / a_) * big_c(s);
  }

  RealVector normal(const RealVector& q) const override {
    const double s = q(0), z = q(2), v = q(3);
    const double r = radius(Dual(v)).v;
    const double coef = l_ ? kR2 * z / (z - kR2) * r : -kR2 * z / (z + kR2) * r;
    return coef * real(big_y(Dual(s))) - a_ * v * real(big_v()) + r * real(big_c(Dual(s)));
  }

  RealMatrix frame(const RealVector& q, FrameOption) const override {
    const RealMatrix j = jacobian(q);
    const double z = q(2), v = q(3);
    const double r = radius(Dual(v)).v;
    const double zz = l_ ? z - kR2 : z + kR2;
    const RealVector fs = j.col(0), fu = j.col(1), fz = j.col(2), fv = j.col(3);
    const RealVector b1 = fu;
    const RealVector b2 = zz * zz / (2.0 * r) * fz;
    const RealVector b3 = (l_ ? 1.0 : -1.0) * zz * zz * zz / (2.0 * kR2 * r * r) * fs;
    const RealVector b4 = kR2 * a_ * z * v / (zz * r) * fu + fv;
    return columns({b1, b2, b3, b4});
  }

  RealMatrix shape(const RealVector&, FrameOption) const override { return jordan_sum({{3, 0.0}, {1, a_}}); }

  ExpectedType expected_type(const RealVector&) const override {
    return expect(2, l_ ? Label::VII_i : Label::VII_ii, "table-1");
  }

  RealVector anchor() const override { return RealVector::Zero(4); }

 protected:
  RealVector sample_in_region(int, Sampler& rng) const override {
    const double vmax = std::min(0.5, 0.8 / a_);
    return (RealVector(4) << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.5, 0.5),
            rng.uniform(-vmax, vmax))
        .finished();
  }

 private:
  static RealVector real(const DualVector& v) {
    RealVector out(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].v;
    return out;
  }

  Dual radius(const Dual& v) const { return sqrt(1.0 + (l_ ? -1.0 : 1.0) * a_ * a_ * v * v); }

  // x(s) is the closed-form integral of X from 0 to s.
  DualVector xs(const Dual& s) const {
    const Dual c = kR2 * (s * s * s / 3.0 + (l_ ? 2.0 : 6.0) * s) / 8.0;
    if (!l_) return {c + s / 2.0, kR2 / 2.0 * s, c - kR2 * s + s / 2.0, -kR2 / 4.0 * s * s, (1.0 + kR2 / 2.0) * s};
    return {c - kR2 * s, kR2 / 4.0 * s * s, c, kR2 / 2.0 * s, kR2 / 2.0 * s};
  }

  DualVector big_y(const Dual& s) const {
    if (!l_) {
      const Dual c = kR2 * (s * s + 6.0) / 8.0;
      return {c - 0.5, Dual(kR2 / 2.0), c - kR2 - 0.5, -kR2 / 2.0 * s, Dual(1.0 - kR2 / 2.0)};
    }
    const Dual c = kR2 * (s * s + 2.0) / 8.0;
    return {kR2 - c, -kR2 / 2.0 * s, -c, Dual(-kR2 / 2.0), Dual(kR2 / 2.0)};
  }

  DualVector big_z(const Dual& s) const {
    if (!l_) return {s / 2.0, Dual(0.0), s / 2.0, Dual(-1.0), Dual(0.0)};
    return {s / 2.0, Dual(1.0), s / 2.0, Dual(0.0), Dual(0.0)};
  }

  DualVector big_v() const {
    if (!l_) return {Dual(0.5), Dual(-1.0), Dual(0.5), Dual(0.0), Dual(0.0)};
    return {Dual(0.5), Dual(0.0), Dual(0.5), Dual(-1.0), Dual(0.0)};
  }

  DualVector big_c(const Dual& s) const {
    const Dual q = s * s / 4.0;
    if (!l_) return {q + 1.0, Dual(1.0), q - 1.0, -s, Dual(kR2)};
    return {q - 1.0, s, q + 1.0, Dual(1.0), Dual(0.0)};
  }

  bool l_;
  double a_;
};

// ---- Example m: J4(0) in R^5_2 ----

class ExampleM final : public HypersurfaceExample {
 public:
  ExampleM() : HypersurfaceExample("m", SpaceForm::flat(5, 2), 4, 1, false) {}

  std::string description() const override {
    return "f(s,w,z,u) = s X + w W(u) + z Z - (z^2/2) C(u) + y(u) in R^5_2";
  }

  DualVector immersion(const DualVector& q) const override {
    const Dual &s = q[0], &w = q[1], &z = q[2], &u = q[3];
    return s * big_x() + w * big_w(u) + z * big_z() + (-(z * z) / 2.0) * big_c(u) + small_y(u);
  }

  RealVector normal(const RealVector& q) const override {
    const double w = q(1), z = q(2);
    const Dual u(q(3));
    const DualVector n = (-w + z * z * z / 2.0) * big_x() + Dual(-z) * big_w(u) + big_c(u);
    RealVector out(5);
    for (int i = 0; i < 5; ++i) out(i) = n[static_cast<size_t>(i)].v;
    return out;
  }

  RealMatrix frame(const RealVector& q, FrameOption) const override {
    const RealMatrix j = jacobian(q);
    const double z = q(2);
    const RealVector fs = j.col(0), fw = j.col(1), fz = j.col(2), fu = j.col(3);
    const double z2 = 1.5 * z * z;
    return columns({fs, fw, z2 * fw + fz, (2.25 * z * z * z * z + z) * fw + z2 * fz + fu});
  }

  RealMatrix shape(const RealVector&, FrameOption) const override { return linalg::jordan_block(4, 0.0); }

  ExpectedType expected_type(const RealVector&) const override { return expect(2, Label::VI, "table-1"); }

  RealVector anchor() const override { return RealVector::Zero(4); }

 protected:
  RealVector sample_in_region(int, Sampler& rng) const override {
    RealVector q(4);
    for (int k = 0; k < 4; ++k) q(k) = rng.uniform(-1.0, 1.0);
    return q;
  }

 private:
  static DualVector big_x() { return {Dual(0.0), Dual(-1.0), Dual(0.0), Dual(0.0), Dual(1.0)}; }
  static DualVector big_z() { return {Dual(1.0), Dual(0.0), Dual(1.0), Dual(0.0), Dual(0.0)}; }
  static DualVector big_w(const Dual& u) {
    const Dual uu = u * u;
    return {(uu + 1.0) / 2.0, Dual(0.0), (uu - 1.0) / 2.0, u, Dual(0.0)};
  }
  static DualVector big_c(const Dual& u) { return {-u, Dual(1.0), -u, Dual(-1.0), Dual(-1.0)}; }
  static DualVector small_y(const Dual& u) {
    const Dual h = u * u / 2.0;
    return {h, -u, h, u, Dual(0.0)};
  }
};

// ---- level-set examples a-j ----

struct LevelSetSpec {
  std::string id;
  SpaceForm ambient;
  QuadricFunction f;
  RealVector anchor;
  Label label;
  int nu = 1;
  double radius = 0.3;
  bool chart_frame = false;                                  // frame = chart partials
  std::function<RealMatrix(const RealVector&)> frame;        // empty: completion frame
  std::optional<RealMatrix> shape;                           // empty: derived from P
  std::function<RealMatrix()> special;                       // basis at the anchor point
  std::function<void(const RealVector&)> predicate;          // domain clauses on x
  std::string text;
};

class LevelSetExample final : public HypersurfaceExample {
 public:
  explicit LevelSetExample(LevelSetSpec spec)
      : HypersurfaceExample(spec.id, spec.ambient, spec.ambient.dim - 1, spec.nu, true), spec_(std::move(spec)) {
    choose_chart();
  }

  std::string description() const override { return spec_.text; }
  bool has_special_frame() const override { return static_cast<bool>(spec_.special); }
  const QuadricFunction* quadric() const override { return &spec_.f; }

  void check_domain(const RealVector& q) const override {
    require_dim(q);
    const RealVector x = solve(q);
    if (spec_.predicate) spec_.predicate(x);
  }

  DualVector immersion(const DualVector& q) const override {
    RealVector qv(param_dim_);
    for (int k = 0; k < param_dim_; ++k) qv(k) = q[static_cast<size_t>(k)].v;
    const RealVector x = solve(qv);
    // One Newton step in dual arithmetic carries the implicit derivatives.
    DualVector xd(static_cast<size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) xd[static_cast<size_t>(i)] = Dual(x(i));
    for (size_t k = 0; k < free_.size(); ++k) xd[static_cast<size_t>(free_[k])] = q[k];
    const std::vector<Dual> res = constraints(xd);
    const RealMatrix jd = dependent_jacobian(x);
    const Eigen::PartialPivLU<RealMatrix> lu(jd);
    const auto m = static_cast<Eigen::Index>(res.size());
    RealVector rv(m);
    for (Eigen::Index r = 0; r < m; ++r) rv(r) = res[static_cast<size_t>(r)].v;
    const RealVector step_v = lu.solve(rv);
    for (Eigen::Index r = 0; r < m; ++r) xd[static_cast<size_t>(dep_[r])].v -= step_v(r);
    for (int k = 0; k < Dual::kDirections; ++k) {
      for (Eigen::Index r = 0; r < m; ++r) rv(r) = res[static_cast<size_t>(r)].d[k];
      const RealVector step_d = lu.solve(rv);
      for (Eigen::Index r = 0; r < m; ++r) xd[static_cast<size_t>(dep_[r])].d[k] -= step_d(r);
    }
    return xd;
  }

  RealVector normal(const RealVector& q) const override { return spaceform::quadric_unit_normal(spec_.f, point(q)); }

  RealMatrix frame(const RealVector& q, FrameOption option) const override {
    const RealVector x = point(q);
    if (option == FrameOption::special) {
      if (!spec_.special) throw Error(ErrorKind::contract, "example " + id_ + " has no special frame");
      if ((x - spec_.anchor).cwiseAbs().maxCoeff() > 1e-9)
        throw Error(ErrorKind::contract, "the special frame of example " + id_ + " exists only at the anchor point");
      return spec_.special();
    }
    if (spec_.chart_frame) return jacobian(q);
    if (spec_.frame) return spec_.frame(x);
    return completion_frame(x);
  }

  RealMatrix shape(const RealVector& q, FrameOption option) const override {
    if (spec_.shape) return *spec_.shape;
    const RealVector x = point(q);
    const RealMatrix b = frame(q, option);
    if (spec_.f.variant == QuadricVariant::sphere) return spaceform::sphere_shape_operator(spec_.f, x, b).matrix;
    return spaceform::flat_shape_operator(spec_.f, x, b).matrix;
  }

  RealVector chart_point(const RealVector& v) const override {
    if (v.size() == param_dim_) return v;
    if (v.size() != spec_.f.ambient_dim())
      throw Error(ErrorKind::shape, "example " + id_ + " expects " + std::to_string(param_dim_) +
                                        " chart coordinates or an ambient point of length " +
                                        std::to_string(spec_.f.ambient_dim()));
    for (double r : constraints(std::vector<double>(v.data(), v.data() + v.size())))
      if (std::fabs(r) > 1e-9 * std::max(1.0, v.squaredNorm()))
        throw Error(ErrorKind::domain, "point is not on the hypersurface of example " + id_);
    RealVector q(param_dim_);
    for (int k = 0; k < param_dim_; ++k) q(k) = v(free_[static_cast<size_t>(k)]);
    check_domain(q);
    if ((solve(q) - v).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, v.cwiseAbs().maxCoeff()))
      throw Error(ErrorKind::domain, "point lies on a different sheet than the chart of example " + id_);
    return q;
  }

  ExpectedType expected_type(const RealVector&) const override { return expect(2, spec_.label, "table-1"); }

  RealVector anchor() const override {
    RealVector q(param_dim_);
    for (int k = 0; k < param_dim_; ++k) q(k) = spec_.anchor(free_[static_cast<size_t>(k)]);
    return q;
  }

 protected:
  RealVector sample_in_region(int, Sampler& rng) const override {
    RealVector q = anchor();
    for (int k = 0; k < param_dim_; ++k) q(k) += rng.uniform(-spec_.radius, spec_.radius);
    return q;
  }

 private:
  template <class T>
  std::vector<T> constraints(const std::vector<T>& x) const {
    const auto& f = spec_.f;
    const int n = f.ambient_dim();
    auto sign = [&](int i) { return i < f.index ? -1.0 : 1.0; };
    T value(0.0);
    for (int i = 0; i < n; ++i) {
      T row(0.0);
      for (int j = 0; j < n; ++j)
        if (f.P(i, j) != 0.0) row += f.P(i, j) * x[static_cast<size_t>(j)];
      if (f.p(i) != 0.0) row += 2.0 * f.p(i);
      value += sign(i) * row * x[static_cast<size_t>(i)];
    }
    std::vector<T> out{value - f.level};
    if (f.variant == QuadricVariant::sphere) {
      T norm(0.0);
      for (int i = 0; i < n; ++i) norm += sign(i) * x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
      out.push_back(norm - 1.0);
    }
    return out;
  }

  RealMatrix full_jacobian(const RealVector& x) const {
    const auto& f = spec_.f;
    const RealMatrix g = spaceform::ambient_gram(f.ambient_dim(), f.index);
    const int rows = f.variant == QuadricVariant::sphere ? 2 : 1;
    RealMatrix j(rows, x.size());
    j.row(0) = (2.0 * g * (f.P * x + f.p)).transpose();
    if (rows == 2) j.row(1) = (2.0 * g * x).transpose();
    return j;
  }

  RealMatrix dependent_jacobian(const RealVector& x) const {
    const RealMatrix j = full_jacobian(x);
    RealMatrix d(j.rows(), static_cast<Eigen::Index>(dep_.size()));
    for (size_t k = 0; k < dep_.size(); ++k) d.col(static_cast<Eigen::Index>(k)) = j.col(dep_[k]);
    return d;
  }

  // Dependent coordinates: the column subset with the largest minor at the anchor.
  void choose_chart() {
    const RealMatrix j = full_jacobian(spec_.anchor);
    const int n = static_cast<int>(j.cols());
    double best = 0.0;
    if (j.rows() == 1) {
      for (int a = 0; a < n; ++a)
        if (std::fabs(j(0, a)) > best + 1e-12) {
          best = std::fabs(j(0, a));
          dep_ = {a};
        }
    } else {
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          const double det = std::fabs(j(0, a) * j(1, b) - j(0, b) * j(1, a));
          if (det > best + 1e-12) {
            best = det;
            dep_ = {a, b};
          }
        }
    }
    if (best == 0.0) throw Error(ErrorKind::internal, "level set of example " + id_ + " is singular at its anchor");
    free_.clear();
    for (int i = 0; i < n; ++i)
      if (std::find(dep_.begin(), dep_.end(), i) == dep_.end()) free_.push_back(i);
  }

  RealVector solve(const RealVector& q) const {
    if (!q.allFinite()) throw Error(ErrorKind::domain, "chart coordinates must be finite");
    RealVector x = spec_.anchor;
    for (size_t k = 0; k < free_.size(); ++k) x(free_[k]) = q(static_cast<Eigen::Index>(k));
    for (int it = 0; it < 60; ++it) {
      const auto res = constraints(std::vector<double>(x.data(), x.data() + x.size()));
      RealVector r(static_cast<Eigen::Index>(res.size()));
      for (size_t i = 0; i < res.size(); ++i) r(static_cast<Eigen::Index>(i)) = res[i];
      if (!r.allFinite()) break;
      if (r.cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, x.squaredNorm())) return x;
      const RealMatrix jd = dependent_jacobian(x);
      if (std::fabs(jd.determinant()) <= 1e-10 * std::max(1.0, jd.cwiseAbs().maxCoeff()))
        throw Error(ErrorKind::domain, "chart of example " + id_ + " is singular at this point");
      const RealVector step = jd.partialPivLu().solve(r);
      for (size_t k = 0; k < dep_.size(); ++k) x(dep_[k]) -= step(static_cast<Eigen::Index>(k));
    }
    // Newton settles at rounding level; accept a loose final residual.
    const auto res = constraints(std::vector<double>(x.data(), x.data() + x.size()));
    for (double v : res)
      if (!(std::fabs(v) <= 1e-11 * std::max(1.0, x.squaredNorm())))
        throw Error(ErrorKind::domain, "chart coordinates leave the level-set chart of example " + id_);
    return x;
  }

  // Orthogonal complement of {x, grad f} (or {grad f}) spanned by projected
  // coordinate vectors, chosen by column-pivoted QR.
  RealMatrix completion_frame(const RealVector& x) const {
    const auto& f = spec_.f;
    const int n = f.ambient_dim();
    const RealMatrix g = spaceform::ambient_gram(n, f.index);
    const RealVector grad = spaceform::quadric_gradient(f, x);
    RealMatrix normals(n, f.variant == QuadricVariant::sphere ? 2 : 1);
    normals.col(0) = grad;
    if (normals.cols() == 2) normals.col(1) = x;
    const RealMatrix gn = g * normals;
    const RealMatrix proj =
        RealMatrix::Identity(n, n) - normals * (normals.transpose() * gn).lu().solve(gn.transpose());
    Eigen::ColPivHouseholderQR<RealMatrix> qr(proj);
    std::vector<int> picked;
    for (int k = 0; k < param_dim_; ++k) picked.push_back(qr.colsPermutation().indices()(k));
    std::sort(picked.begin(), picked.end());
    RealMatrix b(n, param_dim_);
    for (int k = 0; k < param_dim_; ++k) b.col(k) = proj.col(picked[static_cast<size_t>(k)]);
    return b;
  }

  LevelSetSpec spec_;
  std::vector<int> free_;
  std::vector<int> dep_;
};

LevelSetSpec level_spec(std::string id, SpaceForm ambient, QuadricFunction f, RealVector anchor, Label label,
                        int nu = 1) {
  LevelSetSpec s{std::move(id), ambient, std::move(f), std::move(anchor), label, nu, 0.3, false, {}, {}, {}, {}, {}};
  return s;
}

RealMatrix ea(int n) { return linalg::anti_diagonal(n); }

QuadricFunction flat_quadric(RealMatrix p_mat, RealVector p, double c) {
  return QuadricFunction::make(QuadricVariant::flat, 2, std::move(p_mat), std::move(p), c);
}

QuadricFunction sphere_quadric(int s, RealMatrix p_mat, double c) {
  return QuadricFunction::make(QuadricVariant::sphere, s, std::move(p_mat), RealVector::Zero(6), c);
}

RealMatrix block2(const RealMatrix& a, const RealMatrix& b, const RealMatrix& c, const RealMatrix& d) {
  RealMatrix m(a.rows() + c.rows(), a.cols() + b.cols());
  m << a, b, c, d;
  return m;
}

void require_nonzero(double v, const char* clause) {
  if (std::fabs(v) <= 1e-9) throw Error(ErrorKind::domain, std::string("domain clause ") + clause + " violated");
}

LevelSetSpec spec_a() {
  LevelSetSpec s = level_spec("a", SpaceForm::flat(5, 2), flat_quadric(-RealMatrix::Identity(5, 5), RealVector::Zero(5), -1.0),
                 unit(3, 5), Label::XI);
  s.chart_frame = true;
  s.shape = RealMatrix::Identity(4, 4);
  s.text = "f(x) = <-x,x> = -1 in R^5_2 (the pseudo-sphere S^4_2)";
  return s;
}

LevelSetSpec spec_b() {
  const RealMatrix p = from_rows({{-1, 0, 0, 0, 1}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {-1, 0, 0, 0, 1}});
  LevelSetSpec s = level_spec("b", SpaceForm::flat(5, 2), flat_quadric(p, unit(3, 5), 1.0), unit(1, 5), Label::X);
  s.frame = [](const RealVector& x) {
    const RealVector e1 = unit(1, 5), e2 = unit(2, 5), e3 = unit(3, 5), e4 = unit(4, 5), e5 = unit(5, 5);
    return columns({e1 + e5, e1 + (-x(0) + x(4)) * e3, e2, e4});
  };
  s.shape = linalg::direct_sum({linalg::jordan_block(2, 0.0), RealMatrix::Zero(2, 2)});
  s.text = "f(x) = <Px,x> + 2<e3,x> = 1 in R^5_2 with P^2 = O";
  return s;
}

LevelSetSpec spec_c() {
  const RealMatrix p = from_rows({{0, 1, 0, 0, 1}, {1, 0, -1, 0, 0}, {0, 1, 0, 0, 1}, {0, 0, 0, 0, 0}, {-1, 0, 1, 0, 0}});
  LevelSetSpec s = level_spec("c", SpaceForm::flat(5, 2), flat_quadric(p, unit(4, 5), 1.0), unit(4, 5) / 2.0, Label::IX_ii);
  s.frame = [](const RealVector& x) {
    const RealVector e1 = unit(1, 5), e2 = unit(2, 5), e3 = unit(3, 5), e4 = unit(4, 5), e5 = unit(5, 5);
    const double x1 = x(0), x2 = x(1), x3 = x(2), x5 = x(4);
    const RealVector th1 = -e1 - e3, th2 = e2 + (x1 - x3) * e4;
    const RealVector et1 = -e2 + e5, et2 = e1 + (x2 + x5) * e4;
    const RealVector t1 = th1 + et1, t2 = th2 + et2, n1 = th1 - et1, n2 = th2 - et2;
    const double S = x1 + x2 - x3 + x5, T = x1 - x2 - x3 - x5;
    const RealVector t2b = t2 + 0.5 * S * T * n1;
    // Null-normalized completion: coefficients (S^2-2)/(4 sqrt2) and -(T^2-2)/(4 sqrt2).
    return columns({t1 / kR2, t2b / kR2 - (S * S - 2.0) / (4.0 * kR2) * t1, n1 / kR2,
                    n2 / kR2 + (T * T - 2.0) / (4.0 * kR2) * n1});
  };
  s.shape = jordan_sum({{2, 0.0}, {2, 0.0}});
  s.text = "f(x) = <Px,x> + 2<e4,x> = 1 in R^5_2 with P^2 = O";
  return s;
}

LevelSetSpec spec_d() {
  const RealMatrix p =
      from_rows({{1, 0, 0, 0, 1}, {0, 1, -1, 0, 0}, {0, 1, -1, 0, 0}, {0, 0, 0, 0, 0}, {-1, 0, 0, 0, -1}});
  LevelSetSpec s = level_spec("d", SpaceForm::flat(5, 2), flat_quadric(p, unit(4, 5), 1.0), unit(4, 5) / 2.0, Label::IX_i);
  s.frame = [](const RealVector& x) {
    const RealVector e1 = unit(1, 5), e2 = unit(2, 5), e3 = unit(3, 5), e4 = unit(4, 5), e5 = unit(5, 5);
    const double u = x(0) + x(4), w = x(1) - x(2);
    const RealVector th1 = -e1 + e5, th2 = e1 + u * e4;
    const RealVector et1 = -e2 - e3, et2 = e2 + w * e4;
    const RealVector th2b = th2 - u * w * et1;
    return columns({th1, th2b - 0.5 * (u * u - 1.0) * th1, et1, et2 - 0.5 * (w * w - 1.0) * et1});
  };
  s.shape = jordan_sum({{2, 0.0}, {2, 0.0}});
  s.text = "f(x) = <Px,x> + 2<e4,x> = 1 in R^5_2 with P^2 = O";
  return s;
}

LevelSetSpec spec_e() {
  LevelSetSpec s = level_spec("e", SpaceForm::sphere(5, 2), sphere_quadric(2, linalg::direct_sum({ea(2), ea(4)}), 0.0),
                 unit(6, 6), Label::XI);
  s.radius = 0.15;
  s.text = "f(x) = <Px,x> = 0 on S^5_2, P = Ea_2 + Ea_4";
  return s;
}

LevelSetSpec spec_f() {
  RealVector anchor = RealVector::Zero(6);
  anchor(0) = -1.0 / kR2;
  anchor(2) = 1.0 / kR2;
  anchor(4) = kR2;
  LevelSetSpec s = level_spec("f", SpaceForm::sphere(5, 3), sphere_quadric(3, linalg::direct_sum({ea(3), ea(3)}), 3.0), anchor,
                 Label::XI, -1);
  s.radius = 0.15;
  s.text = "f(x) = <Px,x> = 3 on S^5_3, P = Ea_3 + Ea_3";
  return s;
}

// Tangent vectors a_1..a_4 of example g.
std::array<RealVector, 4> frame_g(const RealVector& x) {
  const double x1 = x(0), x2 = x(1), x3 = x(2), x4 = x(3), x5 = x(4), x6 = x(5);
  const double d = x1 + x4, f = -x3 + x6;
  auto e = [](int i) { return unit(i, 6); };
  return {-x2 / d * e(1) + e(2) + x2 / d * e(4), (-x3 / d + x4 / f) * e(1) + e(3) + (x3 / d + x1 / f) * e(4),
          x5 / d * e(1) - x5 / d * e(4) + e(5), (x6 / d - x4 / f) * e(1) + (-x6 / d - x1 / f) * e(4) + e(6)};
}

LevelSetSpec spec_g() {
  const RealMatrix p = from_rows({{0, 0, 1, 0, 0, -1},
                                  {0, 0, 0, 0, 0, 0},
                                  {1, 0, 0, 1, 0, 0},
                                  {0, 0, -1, 0, 0, 1},
                                  {0, 0, 0, 0, 0, 0},
                                  {1, 0, 0, 1, 0, 0}});
  LevelSetSpec s = level_spec("g", SpaceForm::sphere(5, 3), sphere_quadric(3, p, 1.0), (unit(4, 6) + unit(6, 6)) / kR2, Label::X,
                 -1);
  s.radius = 0.15;
  s.predicate = [](const RealVector& x) {
    require_nonzero(x(0) + x(3), "x1 + x4 != 0");
    require_nonzero(-x(2) + x(5), "-x3 + x6 != 0");
  };
  s.frame = [](const RealVector& x) {
    const auto a = frame_g(x);
    const double ratio = (-x(2) + x(5)) / (x(0) + x(3));
    return columns({a[1] + a[3], -ratio * a[1], a[0], a[2]});
  };
  s.shape = linalg::direct_sum({linalg::jordan_block(2, 1.0), RealMatrix::Identity(2, 2)});
  s.text = "f(x) = <Px,x> = 1 on S^5_3 with mu_P(t) = t^2";
  return s;
}

// Tangent vectors a_1..a_4 of examples h (alt = false) and i (alt = true).
std::array<RealVector, 4> frame_hi(const RealVector& x, bool alt) {
  const double x1 = x(0), x2 = x(1), x3 = x(2), x4 = x(3), x5 = x(4), x6 = x(5);
  const double d = x2 + x5, d2 = d * d;
  const double p = alt ? x1 + x4 : x3 + x4;
  const double q = alt ? x3 + x6 : x1 + x6;
  const double pa3 = alt ? p : q;  // a_3 pairs with x1+x4 (i) or x1+x6 (h)
  const double pa4 = alt ? q : p;
  auto e = [](int i) { return unit(i, 6); };
  return {e(1) + (-x1 / d - x5 * p / d2) * e(2) + (x1 / d - x2 * p / d2) * e(5),
          (-x3 / d - x5 * q / d2) * e(2) + e(3) + (x3 / d - x2 * q / d2) * e(5),
          (x4 / d - x5 * pa3 / d2) * e(2) + e(4) + (-x4 / d - x2 * pa3 / d2) * e(5),
          (x6 / d - x5 * pa4 / d2) * e(2) + (-x6 / d - x2 * pa4 / d2) * e(5) + e(6)};
}

LevelSetSpec spec_h() {
  const RealMatrix id = RealMatrix::Identity(3, 3);
  LevelSetSpec s = level_spec("h", SpaceForm::sphere(5, 3), sphere_quadric(3, block2(ea(3), id, -id, -ea(3)), -1.0), unit(5, 6),
                 Label::IX_ii, -1);
  s.radius = 0.2;
  s.predicate = [](const RealVector& x) { require_nonzero(x(1) + x(4), "x2 + x5 != 0"); };
  s.frame = [](const RealVector& x) {
    const auto a = frame_hi(x, false);
    return columns({-a[0] + a[3], a[1], -a[1] + a[2], a[0]});
  };
  s.special = [] {
    const auto a = frame_hi(unit(5, 6), false);
    const double r = 1.0 / kR2, h = 1.0 / (2.0 * kR2);
    return columns({r * (-a[0] - a[1] + a[2] + a[3]), h * (a[0] + a[1] + a[2] + a[3]), r * (-a[0] + a[1] - a[2] + a[3]),
                    h * (-a[0] + a[1] + a[2] - a[3])});
  };
  s.shape = jordan_sum({{2, -1.0}, {2, -1.0}});
  s.text = "f(x) = <Px,x> = -1 on S^5_3, P = [[Ea_3, E_3], [-E_3, -Ea_3]]";
  return s;
}

LevelSetSpec spec_i() {
  const RealMatrix id = RealMatrix::Identity(3, 3);
  LevelSetSpec s = level_spec("i", SpaceForm::sphere(5, 3), sphere_quadric(3, block2(id, id, -id, -id), -1.0), unit(5, 6),
                 Label::IX_i, -1);
  s.radius = 0.2;
  s.predicate = [](const RealVector& x) { require_nonzero(x(1) + x(4), "x2 + x5 != 0"); };
  s.frame = [](const RealVector& x) {
    const auto a = frame_hi(x, true);
    return columns({-a[0] + a[2], a[0], -a[1] + a[3], a[1]});
  };
  s.special = [] {
    const auto a = frame_hi(unit(5, 6), true);
    return columns({-a[0] + a[2], (a[0] + a[2]) / 2.0, -a[1] + a[3], (a[1] + a[3]) / 2.0});
  };
  s.shape = jordan_sum({{2, -1.0}, {2, -1.0}});
  s.text = "f(x) = <Px,x> = -1 on S^5_3, P = [[E_3, E_3], [-E_3, -E_3]]";
  return s;
}

LevelSetSpec spec_j() {
  const RealMatrix id = RealMatrix::Identity(3, 3);
  LevelSetSpec s = level_spec("j", SpaceForm::sphere(5, 3), sphere_quadric(3, block2(id, -ea(3), ea(3), id), 1.0), unit(4, 6),
                 Label::II, -1);
  s.radius = 0.15;
  s.text = "f(x) = <Px,x> = 1 on S^5_3, P = [[E_3, -Ea_3], [Ea_3, E_3]]";
  return s;
}

}  // namespace

const std::vector<std::string>& example_ids() {
  static const std::vector<std::string> ids{"0-1", "0-2", "a", "b", "c", "d", "e", "f",
                                            "g",   "h",   "i", "j", "k", "l", "m"};
  return ids;
}

std::shared_ptr<const HypersurfaceExample> make_example(const std::string& id, std::optional<double> parameter) {
  if (parameter && id != "k" && id != "l")
    throw Error(ErrorKind::contract, "example " + id + " takes no shape parameter");
  if (id == "0-1") return std::make_shared<Example01>();
  if (id == "0-2") return std::make_shared<Example02>();
  if (id == "k" || id == "l") return std::make_shared<ExampleKL>(id == "l", parameter.value_or(2.0));
  if (id == "m") return std::make_shared<ExampleM>();
  static const std::pair<const char*, LevelSetSpec (*)()> level_sets[] = {
      {"a", spec_a}, {"b", spec_b}, {"c", spec_c}, {"d", spec_d}, {"e", spec_e},
      {"f", spec_f}, {"g", spec_g}, {"h", spec_h}, {"i", spec_i}, {"j", spec_j}};
  for (const auto& [name, build] : level_sets)
    if (id == name) return std::make_shared<LevelSetExample>(build());
  throw Error(ErrorKind::contract, "unknown catalog id '" + id + "'");
}

}  // namespace petrov::catalog

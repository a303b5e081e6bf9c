#include "petrov/spaceform.hpp"

#include <cmath>
#include <regex>
#include <sstream>

#include <Eigen/SVD>

namespace petrov::spaceform {

namespace {

void require_length(const RealVector& v, int n, const char* what) {
  if (v.size() != n)
    throw Error(ErrorKind::shape, std::string(what) + " has length " + std::to_string(v.size()) + ", expected " +
                                      std::to_string(n));
}

double scale_of(const RealVector& x) { return std::max(1.0, x.squaredNorm()); }

// Matrix of the ambient map m restricted to span(basis), in that basis.
RealMatrix restrict_to_basis(const RealMatrix& m, const RealMatrix& basis, const RealMatrix& g, double tol) {
  const RealMatrix gram = basis.transpose() * g * basis;
  Eigen::JacobiSVD<RealMatrix> svd(gram);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= tol * std::max(1.0, sv(0)))
    throw Error(ErrorKind::contract, "tangent basis has a degenerate Gram matrix");
  return gram.lu().solve(basis.transpose() * g * m * basis);
}

void require_tangent(const RealMatrix& basis, const RealVector& normal, const RealMatrix& g, double tol,
                     const char* what) {
  const RealVector pairing = basis.transpose() * g * normal;
  const double scale = std::max(1.0, basis.cwiseAbs().maxCoeff()) * std::max(1.0, normal.cwiseAbs().maxCoeff());
  if (pairing.size() > 0 && pairing.cwiseAbs().maxCoeff() > tol * scale * 10.0)
    throw Error(ErrorKind::contract, std::string("tangent basis is not orthogonal to ") + what);
}

void require_on_level(const QuadricFunction& f, const RealVector& x, double tol) {
  const double v = f.value(x);
  if (std::fabs(v - f.level) > tol * std::max(1.0, std::fabs(f.level)) * scale_of(x)) {
    std::ostringstream os;
    os << "point is not on the level set: f(x) = " << v << ", level " << f.level;
    throw Error(ErrorKind::domain, os.str());
  }
}

}  // namespace

SpaceForm SpaceForm::make(int dim, int index, int curvature) {
  if (dim < 1) throw Error(ErrorKind::contract, "space form dimension must be positive");
  if (curvature < -1 || curvature > 1) throw Error(ErrorKind::contract, "curvature must be -1, 0 or 1");
  if (index < 0 || index > dim) throw Error(ErrorKind::contract, "index must lie in [0, dim]");
  return SpaceForm{dim, index, curvature};
}

RealMatrix SpaceForm::ambient_gram() const { return spaceform::ambient_gram(ambient_dim(), ambient_index()); }

std::string SpaceForm::name() const {
  const char* letter = curvature == 0 ? "R" : curvature > 0 ? "S" : "H";
  return std::string(letter) + "^" + std::to_string(dim) + "_" + std::to_string(index);
}

SpaceForm SpaceForm::anti_isometric() const {
  if (curvature == 0) return make(dim, dim - index, 0);
  // The quadric <x,x> = -kappa lives in R^{dim+1}; flipping the ambient sign
  // swaps the curvature sign and the index becomes dim - index.
  return make(dim, dim - index, -curvature);
}

SpaceForm parse_space_form(const std::string& text) {
  static const std::regex re(R"(([RSH])\^?(\d+)_(\d+))");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw Error(ErrorKind::parse, "malformed space form '" + text + "'");
  const int curvature = m[1] == "R" ? 0 : m[1] == "S" ? 1 : -1;
  return SpaceForm::make(std::stoi(m[2]), std::stoi(m[3]), curvature);
}

RealMatrix ambient_gram(int n, int s) {
  if (s < 0 || s > n) throw Error(ErrorKind::contract, "index must lie in [0, n]");
  RealMatrix g = RealMatrix::Identity(n, n);
  for (int i = 0; i < s; ++i) g(i, i) = -1.0;
  return g;
}

double ambient_inner(const RealVector& u, const RealVector& v, int s) {
  if (u.size() != v.size())
    throw Error(ErrorKind::shape, "inner product of vectors of lengths " + std::to_string(u.size()) + " and " +
                                      std::to_string(v.size()));
  if (s < 0 || s > u.size()) throw Error(ErrorKind::contract, "index exceeds the vector length");
  return -u.head(s).dot(v.head(s)) + u.tail(u.size() - s).dot(v.tail(v.size() - s));
}

std::pair<RealMatrix, RealMatrix> anti_isometric_pair(const RealMatrix& a, const RealMatrix& g) { return {a, -g}; }

const char* to_string(QuadricVariant v) { return v == QuadricVariant::flat ? "flat" : "sphere"; }

QuadricFunction QuadricFunction::make(QuadricVariant variant, int index, RealMatrix P, RealVector p, double level) {
  if (P.rows() != P.cols() || P.rows() == 0) throw Error(ErrorKind::shape, "quadric matrix must be square");
  const int n = static_cast<int>(P.rows());
  if (p.size() == 0) p = RealVector::Zero(n);
  require_length(p, n, "linear term");
  if (variant == QuadricVariant::sphere && p.cwiseAbs().maxCoeff() != 0.0)
    throw Error(ErrorKind::contract, "the sphere variant has no linear term");
  const RealMatrix g = ambient_gram(n, index);
  const RealMatrix gp = g * P;
  if ((gp - gp.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, P.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::contract, "quadric matrix is not self-adjoint for the ambient inner product");
  if (!std::isfinite(level)) throw Error(ErrorKind::contract, "level must be finite");
  return QuadricFunction{variant, index, std::move(P), std::move(p), level};
}

double QuadricFunction::value(const RealVector& x) const {
  require_length(x, ambient_dim(), "point");
  const RealVector px = P * x;
  return ambient_inner(px, x, index) + 2.0 * ambient_inner(p, x, index);
}

linalg::Polynomial QuadricFunction::minimal_polynomial() const {
  return linalg::minimal_poly(linalg::exact_if_integral(P));
}

RealVector quadric_gradient(const QuadricFunction& f, const RealVector& x, double tol) {
  require_length(x, f.ambient_dim(), "point");
  const RealVector px = f.P * x;
  if (f.variant == QuadricVariant::flat) return 2.0 * px + 2.0 * f.p;
  const double xx = ambient_inner(x, x, f.index);
  if (std::fabs(xx - 1.0) > tol * scale_of(x)) {
    std::ostringstream os;
    os << "point is off the sphere: <x,x> = " << xx;
    throw Error(ErrorKind::domain, os.str());
  }
  return 2.0 * px - 2.0 * ambient_inner(px, x, f.index) * x;
}

Admissibility admissibility_check(const QuadricFunction& f, double tol) {
  Admissibility out;
  const int n = f.ambient_dim();
  const double scale = std::max(1.0, f.P.cwiseAbs().maxCoeff());
  if (f.variant == QuadricVariant::flat) {
    const double rho = f.P(0, 0);
    const bool scalar = (f.P - rho * RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= tol * scale;
    if (scalar) {
      if (std::fabs(rho) <= tol * scale) {
        out.clause = "rho!=0";
        out.diagnostic = "P is zero";
        return out;
      }
      out.admissible = true;
      out.diagnostic = "P = rho E";
      return out;
    }
    const double sq = (f.P * f.P).cwiseAbs().maxCoeff();
    if (sq > tol * scale * scale) {
      out.clause = "P^2=O";
      out.diagnostic = "P is not a multiple of E and P^2 has entries up to " + std::to_string(sq);
      return out;
    }
    const double pp_vec = (f.P * f.p).cwiseAbs().maxCoeff();
    if (pp_vec > tol * scale * std::max(1.0, f.p.cwiseAbs().maxCoeff())) {
      out.clause = "Pp=0";
      out.diagnostic = "Pp has entries up to " + std::to_string(pp_vec);
      return out;
    }
    if (std::fabs(ambient_inner(f.p, f.p, f.index)) <= tol * std::max(1.0, f.p.squaredNorm())) {
      out.clause = "<p,p>!=0";
      out.diagnostic = "p is a null vector";
      return out;
    }
    out.admissible = true;
    out.diagnostic = "P^2 = O, Pp = 0, <p,p> != 0";
    return out;
  }
  try {
    const auto mu = f.minimal_polynomial();
    if (mu.degree() != 2) {
      out.clause = "deg(mu_P)=2";
      out.diagnostic = "minimal polynomial " + mu.to_string() + " has degree " + std::to_string(mu.degree());
      return out;
    }
    out.admissible = true;
    out.diagnostic = "minimal polynomial " + mu.to_string();
  } catch (const Error& e) {
    out.clause = "deg(mu_P)=2";
    out.diagnostic = std::string("minimal polynomial unavailable: ") + e.what();
  }
  return out;
}

RealVector project_to_level(const QuadricFunction& f, const RealVector& x0, double tol) {
  require_length(x0, f.ambient_dim(), "point");
  const RealMatrix g = ambient_gram(f.ambient_dim(), f.index);
  const bool sphere = f.variant == QuadricVariant::sphere;
  RealVector x = x0;
  for (int it = 0; it < 100; ++it) {
    const int rows = sphere ? 2 : 1;
    RealMatrix jac(rows, x.size());
    RealVector res(rows);
    res(0) = f.value(x) - f.level;
    jac.row(0) = (2.0 * g * (f.P * x + f.p)).transpose();
    if (sphere) {
      res(1) = ambient_inner(x, x, f.index) - 1.0;
      jac.row(1) = (2.0 * g * x).transpose();
    }
    if (!res.allFinite()) break;
    if (res.cwiseAbs().maxCoeff() <= tol * std::max(1.0, std::fabs(f.level)) * scale_of(x)) return x;
    x -= jac.completeOrthogonalDecomposition().solve(res);
  }
  throw Error(ErrorKind::domain, "projection onto the level set did not converge");
}

RealVector quadric_unit_normal(const QuadricFunction& f, const RealVector& x, double tol) {
  const RealVector grad = quadric_gradient(f, x, tol);
  const double gg = ambient_inner(grad, grad, f.index);
  if (std::fabs(gg) <= tol * std::max(1.0, grad.squaredNorm()))
    throw Error(ErrorKind::degenerate_level, "gradient is a null vector; the level is not regular");
  return grad / std::sqrt(std::fabs(gg));
}

ShapeAtPoint sphere_shape_operator(const QuadricFunction& f, const RealVector& x, const RealMatrix& tangent_basis,
                                   double tol) {
  if (f.variant != QuadricVariant::sphere) throw Error(ErrorKind::contract, "quadric is not of sphere variant");
  const int n = f.ambient_dim();
  if (tangent_basis.rows() != n) throw Error(ErrorKind::shape, "tangent basis rows must match the ambient dimension");
  const RealVector grad = quadric_gradient(f, x, tol);
  require_on_level(f, x, tol);
  const RealMatrix g = ambient_gram(n, f.index);
  require_tangent(tangent_basis, x, g, tol, "the position vector");
  require_tangent(tangent_basis, grad, g, tol, "the gradient");

  const double gg = ambient_inner(grad, grad, f.index);
  if (std::fabs(gg) <= tol * std::max(1.0, grad.squaredNorm()))
    throw Error(ErrorKind::degenerate_level, "gradient is a null vector; the level is not regular");
  const int delta = gg > 0 ? 1 : -1;
  const double mu_c = f.minimal_polynomial().evaluate(Complex(f.level, 0.0)).real();
  if (mu_c * delta >= 0) {
    std::ostringstream os;
    os << "mu_P(c) = " << mu_c << " with delta = " << delta << " leaves no regular level";
    throw Error(ErrorKind::degenerate_level, os.str());
  }
  const RealMatrix ambient = (f.level * RealMatrix::Identity(n, n) - f.P) / std::sqrt(-delta * mu_c);
  return {restrict_to_basis(ambient, tangent_basis, g, tol), delta};
}

ShapeAtPoint flat_shape_operator(const QuadricFunction& f, const RealVector& x, const RealMatrix& tangent_basis,
                                 double tol) {
  if (f.variant != QuadricVariant::flat) throw Error(ErrorKind::contract, "quadric is not of flat variant");
  const int n = f.ambient_dim();
  if (tangent_basis.rows() != n) throw Error(ErrorKind::shape, "tangent basis rows must match the ambient dimension");
  require_on_level(f, x, tol);
  const RealVector grad = quadric_gradient(f, x, tol);
  const RealMatrix g = ambient_gram(n, f.index);
  require_tangent(tangent_basis, grad, g, tol, "the gradient");
  const double gg = ambient_inner(grad, grad, f.index);
  if (std::fabs(gg) <= tol * std::max(1.0, grad.squaredNorm()))
    throw Error(ErrorKind::degenerate_level, "gradient is a null vector; the level is not regular");
  const RealMatrix ambient = -2.0 * f.P / std::sqrt(std::fabs(gg));
  return {restrict_to_basis(ambient, tangent_basis, g, tol), gg > 0 ? 1 : -1};
}

int CurvatureSpectrum::dim() const {
  int d = 0;
  for (const auto& r : real) d += r.multiplicity;
  for (const auto& c : complex) d += 2 * c.multiplicity;
  return d;
}

CurvatureSpectrum curvature_spectrum(const RealMatrix& shape, const linalg::Tolerance& tol) {
  if (shape.rows() != shape.cols()) throw Error(ErrorKind::shape, "shape matrix must be square");
  CurvatureSpectrum spec;
  for (const auto& sc : linalg::structural_clusters(shape, tol)) {
    const auto& c = sc.cluster;
    if (c.is_real())
      spec.real.push_back({c.value.real(), c.multiplicity});
    else
      spec.complex.push_back({c.value.real(), c.value.imag(), c.multiplicity});
  }
  return spec;
}

double cartan_residual(const CurvatureSpectrum& spectrum, int delta, std::size_t i) {
  if (i >= spectrum.real.size()) throw Error(ErrorKind::contract, "curvature index out of range");
  if (spectrum.real.size() + spectrum.complex.size() < 2)
    throw Error(ErrorKind::domain, "Cartan's identity needs at least two distinct curvatures");
  const double ki = spectrum.real[i].k;
  double sum = 0.0;
  for (std::size_t j = 0; j < spectrum.real.size(); ++j) {
    if (j == i) continue;
    const double kj = spectrum.real[j].k;
    if (kj == ki) throw Error(ErrorKind::domain, "repeated curvature in the denominator");
    sum += spectrum.real[j].multiplicity * (delta + ki * kj) / (kj - ki);
  }
  return sum;
}

double modulus_relation(double kappa, int nu, double alpha, double beta) {
  return kappa + nu * (alpha * alpha + beta * beta);
}

double type3_forced_curvature(double alpha, double beta) {
  if (alpha == 0.0) throw Error(ErrorKind::domain, "alpha = 0 forces beta = 0; no forced curvature exists");
  return (alpha * alpha + beta * beta) / alpha;
}

}  // namespace petrov::spaceform

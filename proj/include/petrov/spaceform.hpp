#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "petrov/linalg.hpp"

namespace petrov::spaceform {

/// Pseudo-Riemannian space form N^{dim}_{index}(curvature).
///
/// curvature 0 is flat R^dim_s, curvature 1 the pseudo-sphere S^dim_s inside
/// R^{dim+1}_s, curvature -1 the pseudo-hyperbolic space H^dim_s inside
/// R^{dim+1}_{s+1}.
struct SpaceForm {
  int dim = 0;
  int index = 0;
  int curvature = 0;

  static SpaceForm make(int dim, int index, int curvature);
  static SpaceForm flat(int dim, int index) { return make(dim, index, 0); }
  static SpaceForm sphere(int dim, int index) { return make(dim, index, 1); }
  static SpaceForm hyperbolic(int dim, int index) { return make(dim, index, -1); }

  int ambient_dim() const { return curvature == 0 ? dim : dim + 1; }
  int ambient_index() const { return curvature == -1 ? index + 1 : index; }
  RealMatrix ambient_gram() const;
  /// "R^5_2", "S^5_3", "H^5_2".
  std::string name() const;
  /// Image under the metric sign flip: H^m_s <-> S^m_{m-s}, R^m_s -> R^m_{m-s}.
  SpaceForm anti_isometric() const;

  friend bool operator==(const SpaceForm&, const SpaceForm&) = default;
};

/// Parses the names produced by SpaceForm::name().
SpaceForm parse_space_form(const std::string& text);

/// diag(-1 x s, +1 x (n - s)).
RealMatrix ambient_gram(int n, int s);

/// u^T ((-E_s) + E_{n-s}) v.
double ambient_inner(const RealVector& u, const RealVector& v, int s);

/// (A, G) -> (A, -G). A hypersurface of H^{n+1}_s seen through the metric
/// sign flip keeps its shape operator while the induced metric changes sign.
std::pair<RealMatrix, RealMatrix> anti_isometric_pair(const RealMatrix& a, const RealMatrix& g);

enum class QuadricVariant { flat, sphere };

const char* to_string(QuadricVariant v);

/// f(x) = <Px,x> + 2<p,x> on R^n_s (flat) or f(x) = <Px,x> on S^{n-1}_s
/// (sphere), together with the level value c that cuts out the hypersurface.
struct QuadricFunction {
  QuadricVariant variant = QuadricVariant::flat;
  int index = 0;  // s of the ambient R^n_s
  RealMatrix P;
  RealVector p;  // zero vector for the sphere variant
  double level = 0.0;

  /// Validates shapes and self-adjointness of P (ErrorKind::shape / contract).
  static QuadricFunction make(QuadricVariant variant, int index, RealMatrix P, RealVector p, double level);

  int ambient_dim() const { return static_cast<int>(P.rows()); }
  double value(const RealVector& x) const;
  /// Minimal polynomial of P, exact when P has integer entries.
  linalg::Polynomial minimal_polynomial() const;
};

/// Flat: 2Px + 2p. Sphere: 2Px - 2<Px,x>x, which requires <x,x> = 1 within tol.
RealVector quadric_gradient(const QuadricFunction& f, const RealVector& x, double tol = 1e-9);

struct Admissibility {
  bool admissible = false;
  std::string clause;      // failed clause, empty when admissible
  std::string diagnostic;  // human-readable detail
};

/// Flat: P = rho E with rho != 0, or P^2 = O, Pp = 0 and <p,p> != 0.
/// Sphere: the minimal polynomial of P has degree 2.
Admissibility admissibility_check(const QuadricFunction& f, double tol = 1e-9);

/// Newton projection of x0 onto f = level (and onto <x,x> = 1 for the sphere
/// variant). Throws ErrorKind::domain when it does not converge.
RealVector project_to_level(const QuadricFunction& f, const RealVector& x0, double tol = 1e-12);

/// grad f / sqrt|<grad f, grad f>|. Throws degenerate_level on a null gradient.
RealVector quadric_unit_normal(const QuadricFunction& f, const RealVector& x, double tol = 1e-9);

struct ShapeAtPoint {
  RealMatrix matrix;  // shape operator in the supplied basis
  int delta = 0;      // sign <grad f, grad f>
};

/// (cE - P) / sqrt(-delta mu_P(c)) restricted to the span of tangent_basis.
ShapeAtPoint sphere_shape_operator(const QuadricFunction& f, const RealVector& x, const RealMatrix& tangent_basis,
                                   double tol = 1e-9);

/// -2P / |grad f| restricted to the span of tangent_basis.
ShapeAtPoint flat_shape_operator(const QuadricFunction& f, const RealVector& x, const RealMatrix& tangent_basis,
                                 double tol = 1e-9);

struct RealCurvature {
  double k = 0.0;
  int multiplicity = 0;
};

struct ComplexCurvature {
  double alpha = 0.0;
  double beta = 0.0;  // > 0; the conjugate is implied
  int multiplicity = 0;
};

/// Distinct principal curvatures with algebraic multiplicities. A complex
/// pair counts once with its own multiplicity, so dim() adds 2 per unit.
struct CurvatureSpectrum {
  std::vector<RealCurvature> real;
  std::vector<ComplexCurvature> complex;
  int dim() const;
};

/// Spectrum of a shape matrix via the structural eigenvalue grouping.
CurvatureSpectrum curvature_spectrum(const RealMatrix& shape, const linalg::Tolerance& tol = {});

/// sum_{j != i} m_j (delta + k_i k_j) / (k_j - k_i) over the real curvatures.
double cartan_residual(const CurvatureSpectrum& spectrum, int delta, std::size_t i);

/// kappa + nu (alpha^2 + beta^2).
double modulus_relation(double kappa, int nu, double alpha, double beta);

/// (alpha^2 + beta^2) / alpha; alpha = 0 is a domain error.
double type3_forced_curvature(double alpha, double beta);

}  // namespace petrov::spaceform

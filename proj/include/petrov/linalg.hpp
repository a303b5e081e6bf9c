#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "petrov/error.hpp"

namespace petrov {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;

}  // namespace petrov

namespace petrov::linalg {

enum class NumericMode { exact, floating };

/// Tolerance context shared by every float-mode decision.
///
/// `algebraic` bounds residuals of identities that hold exactly in theory
/// (symmetry, self-adjointness, annihilation by a polynomial). `rank` is the
/// relative singular-value cutoff used for every rank or kernel decision.
struct Tolerance {
  double algebraic = 1e-9;
  double rank = 1e-6;
};

/// A real number that is either an exact rational or a double.
class Scalar {
 public:
  Scalar() : value_(0.0) {}
  Scalar(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational v) : value_(std::move(v)) {}  // NOLINT

  NumericMode mode() const {
    return std::holds_alternative<Rational>(value_) ? NumericMode::exact
                                                    : NumericMode::floating;
  }
  double to_double() const;
  const Rational& exact() const;

  /// "p/q" or "p" for exact values, shortest round-trip decimal otherwise.
  std::string to_string() const;

  /// Parses "p/q", "p", or a decimal string into an exact value.
  static Scalar parse_exact(const std::string& text);

 private:
  std::variant<double, Rational> value_;
};

/// Dense rational matrix used on the exact path.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  static ExactMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const Rational& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  ExactMatrix transpose() const;
  RealMatrix to_real() const;

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b);
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

/// Exact copy when every entry is an integer, float copy otherwise.
class Matrix;
Matrix exact_if_integral(const RealMatrix& m);

/// Exact rank by Gaussian elimination over Q.
int exact_rank(ExactMatrix m);

/// Matrix value in one numeric mode. Exact mode is selected only when every
/// entry is rational.
class Matrix {
 public:
  Matrix() : data_(RealMatrix()) {}
  Matrix(RealMatrix m) : data_(std::move(m)) {}   // NOLINT
  Matrix(ExactMatrix m) : data_(std::move(m)) {}  // NOLINT

  NumericMode mode() const {
    return std::holds_alternative<ExactMatrix>(data_) ? NumericMode::exact
                                                      : NumericMode::floating;
  }
  int rows() const;
  int cols() const;
  bool is_square() const { return rows() == cols(); }

  /// Float view; exact entries are rounded.
  RealMatrix real() const;
  /// Throws ErrorKind::contract in float mode.
  const ExactMatrix& exact() const;
  Scalar at(int r, int c) const;

 private:
  std::variant<RealMatrix, ExactMatrix> data_;
};

struct Inertia {
  int pos = 0;
  int neg = 0;
  int null = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Counts of positive, negative and zero eigenvalues of a symmetric matrix.
/// Float mode treats |eigenvalue| <= tol * max|eigenvalue| as zero.
Inertia signature(const Matrix& gram, double tol = 1e-9);

/// Non-degenerate symmetric bilinear form together with its inertia.
class BilinearSpace {
 public:
  /// Validates symmetry and non-degeneracy (ErrorKind::shape / contract).
  static BilinearSpace make(Matrix gram, double tol = 1e-9);

  int dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  const Inertia& signature() const { return signature_; }
  /// Number of negative directions.
  int index() const { return signature_.neg; }

 private:
  BilinearSpace(Matrix gram, Inertia inertia) : gram_(std::move(gram)), signature_(inertia) {}
  Matrix gram_;
  Inertia signature_;
};

/// ||gram*A - A^T*gram||_max <= tol (exact comparison in exact mode).
bool is_self_adjoint(const Matrix& a, const BilinearSpace& space, double tol = 1e-9);

/// Polynomial with coefficients in ascending degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coeffs);

  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  NumericMode mode() const;
  std::vector<double> real_coeffs() const;

  Complex evaluate(Complex t) const;
  RealMatrix evaluate(const RealMatrix& a) const;
  std::string to_string() const;

 private:
  std::vector<Scalar> coeffs_;
};

/// Exact polynomial remainder of `num` modulo `den` (both exact mode).
Polynomial exact_remainder(const Polynomial& num, const Polynomial& den);

Polynomial exact_char_poly(const ExactMatrix& a);
Polynomial exact_minimal_poly(const ExactMatrix& a);

/// Monic characteristic polynomial det(tI - A).
///
/// Exact mode uses the Faddeev-LeVerrier recurrence over Q. Float mode
/// expands the product of clustered eigenvalues so that repeated roots come
/// out repeated.
Polynomial char_poly(const Matrix& a, const Tolerance& tol = {});

/// Monic annihilating polynomial of least degree.
Polynomial minimal_poly(const Matrix& a, const Tolerance& tol = {});

/// One eigenvalue (or conjugate pair, stored with imag > 0) and its
/// algebraic multiplicity.
struct EigenCluster {
  Complex value;
  int multiplicity = 0;
  bool is_real() const { return value.imag() == 0.0; }
};

/// Single-linkage clustering of the spectrum with radius `tol`.
///
/// Clusters are ordered: real values ascending, then complex pairs by real
/// part then imaginary part. Throws ErrorKind::cluster_ambiguity when two
/// clusters lie within 2*tol of each other.
std::vector<EigenCluster> eigen_clusters(const Matrix& a, double tol);

/// Staircase kernel sequence of (A - lambda I): dims[k] = dim ker (A - lambda)^k
/// for k = 0..steps, plus an orthonormal basis of the last kernel.
struct KernelStaircase {
  std::vector<int> dims;
  ComplexMatrix basis;
};

KernelStaircase kernel_staircase(const RealMatrix& a, Complex lambda, int max_steps,
                                 const Tolerance& tol);

struct StructuralCluster {
  EigenCluster cluster;
  KernelStaircase staircase;
};

/// Eigenvalue grouping for Jordan-structure decisions.
///
/// A perturbed defective eigenvalue splits into a ring of radius roughly
/// (eps*||A||)^(1/m), so no fixed radius works for every block size. The
/// candidate radii are the pairwise eigenvalue distances, smallest first; the
/// first grouping whose kernel staircases reach every multiplicity and whose
/// generalized eigenspaces span the whole space is returned.
std::vector<StructuralCluster> structural_clusters(const RealMatrix& a, const Tolerance& tol);

/// Exact counterpart for a rational eigenvalue.
std::vector<int> exact_kernel_dims(const ExactMatrix& a, const Rational& lambda, int max_steps);

/// Numerical rank with cutoff rel_tol * scale.
int numerical_rank(const ComplexMatrix& m, double rel_tol, double scale);

/// Best rational approximation with denominator <= max_den, if within tol.
bool rational_approximation(double x, long max_den, double tol, Rational& out);

/// Jordan block J_m(lambda) with ones on the superdiagonal.
RealMatrix jordan_block(int m, double lambda);
/// Anti-diagonal matrix of ones of order n.
RealMatrix anti_diagonal(int n);
/// Block-diagonal direct sum.
RealMatrix direct_sum(const std::vector<RealMatrix>& blocks);

}  // namespace petrov::linalg

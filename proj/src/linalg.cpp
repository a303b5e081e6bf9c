#include "petrov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace petrov::linalg {

// ---- Matrix -----------------------------------------------------------------

int Matrix::rows() const {
  return std::visit([](const auto& m) { return static_cast<int>(m.rows()); }, data_);
}

int Matrix::cols() const {
  return std::visit([](const auto& m) { return static_cast<int>(m.cols()); }, data_);
}

RealMatrix Matrix::real() const {
  if (const auto* m = std::get_if<RealMatrix>(&data_)) return *m;
  return std::get<ExactMatrix>(data_).to_real();
}

const ExactMatrix& Matrix::exact() const {
  if (const auto* m = std::get_if<ExactMatrix>(&data_)) return *m;
  throw Error(ErrorKind::contract, "matrix is not in exact mode");
}

Scalar Matrix::at(int r, int c) const {
  if (r < 0 || c < 0 || r >= rows() || c >= cols()) throw Error(ErrorKind::shape, "matrix index out of range");
  if (const auto* m = std::get_if<RealMatrix>(&data_)) return Scalar((*m)(r, c));
  return Scalar(std::get<ExactMatrix>(data_)(r, c));
}

// ---- signature ----------------------------------------------------------------

namespace {

void require_square(const Matrix& m, const char* what) {
  if (!m.is_square())
    throw Error(ErrorKind::shape, std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                                      std::to_string(m.cols()) + ", expected square");
}

// Symmetric elimination over Q. A zero diagonal with a nonzero off-diagonal
// entry s_ij is fixed by the congruence e_i <- e_i + e_j, which puts 2 s_ij on
// the diagonal.
Inertia exact_inertia(ExactMatrix s) {
  Inertia out;
  const int n = s.rows();
  std::vector<bool> done(n, false);
  for (int step = 0; step < n; ++step) {
    int pivot = -1;
    for (int i = 0; i < n && pivot < 0; ++i)
      if (!done[i] && s(i, i) != 0) pivot = i;
    if (pivot < 0) {
      int pi = -1, pj = -1;
      for (int i = 0; i < n && pi < 0; ++i)
        for (int j = 0; j < n; ++j)
          if (!done[i] && !done[j] && i != j && s(i, j) != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi < 0) break;
      for (int k = 0; k < n; ++k) s(pi, k) += s(pj, k);
      for (int k = 0; k < n; ++k) s(k, pi) += s(k, pj);
      pivot = pi;
    }
    const Rational d = s(pivot, pivot);
    if (d > 0)
      ++out.pos;
    else
      ++out.neg;
    done[pivot] = true;
    for (int i = 0; i < n; ++i) {
      if (done[i] || s(i, pivot) == 0) continue;
      const Rational f = s(i, pivot) / d;
      for (int j = 0; j < n; ++j)
        if (!done[j]) s(i, j) -= f * s(pivot, j);
    }
    for (int j = 0; j < n; ++j)
      if (!done[j]) s(pivot, j) = 0;
    for (int i = 0; i < n; ++i)
      if (!done[i]) s(i, pivot) = 0;
  }
  out.null = n - out.pos - out.neg;
  return out;
}

bool symmetric_within(const Matrix& g, double tol) {
  if (g.mode() == NumericMode::exact) return g.exact() == g.exact().transpose();
  const RealMatrix m = g.real();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace

Inertia signature(const Matrix& gram, double tol) {
  require_square(gram, "signature");
  if (!symmetric_within(gram, tol)) throw Error(ErrorKind::shape, "signature: matrix is not symmetric");
  if (gram.rows() == 0) return {};
  if (gram.mode() == NumericMode::exact) return exact_inertia(gram.exact());
  const RealMatrix m = gram.real();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const RealVector ev = es.eigenvalues();
  const double cutoff = tol * std::max(ev.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  Inertia out;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff)
      ++out.pos;
    else if (ev(i) < -cutoff)
      ++out.neg;
    else
      ++out.null;
  }
  return out;
}

BilinearSpace BilinearSpace::make(Matrix gram, double tol) {
  const Inertia inertia = linalg::signature(gram, tol);
  if (inertia.null != 0)
    throw Error(ErrorKind::contract, "bilinear form is degenerate (" + std::to_string(inertia.null) + " null directions)");
  return BilinearSpace(std::move(gram), inertia);
}

bool is_self_adjoint(const Matrix& a, const BilinearSpace& space, double tol) {
  require_square(a, "is_self_adjoint");
  if (a.rows() != space.dim())
    throw Error(ErrorKind::shape, "is_self_adjoint: operator dimension " + std::to_string(a.rows()) +
                                      " differs from space dimension " + std::to_string(space.dim()));
  if (a.mode() == NumericMode::exact && space.gram().mode() == NumericMode::exact) {
    const ExactMatrix& x = a.exact();
    const ExactMatrix& g = space.gram().exact();
    return g * x == x.transpose() * g;
  }
  const RealMatrix x = a.real();
  const RealMatrix g = space.gram().real();
  return (g * x - x.transpose() * g).cwiseAbs().maxCoeff() <= tol;
}

// ---- Polynomial ---------------------------------------------------------------

Polynomial::Polynomial(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.emplace_back(0.0);
  const bool exact = std::all_of(coeffs_.begin(), coeffs_.end(),
                                 [](const Scalar& s) { return s.mode() == NumericMode::exact; });
  if (!exact)
    for (auto& s : coeffs_) s = Scalar(s.to_double());
}

NumericMode Polynomial::mode() const { return coeffs_.front().mode(); }

std::vector<double> Polynomial::real_coeffs() const {
  std::vector<double> out;
  out.reserve(coeffs_.size());
  for (const auto& s : coeffs_) out.push_back(s.to_double());
  return out;
}

Complex Polynomial::evaluate(Complex t) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + it->to_double();
  return acc;
}

RealMatrix Polynomial::evaluate(const RealMatrix& a) const {
  const auto n = a.rows();
  RealMatrix acc = RealMatrix::Zero(n, n);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * a + it->to_double() * RealMatrix::Identity(n, n);
  return acc;
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Scalar& c = coeffs_[k];
    const bool zero = c.mode() == NumericMode::exact ? c.exact() == 0 : c.to_double() == 0.0;
    if (zero) continue;
    std::string text = c.to_string();
    bool negative = !text.empty() && text[0] == '-';
    if (negative) text.erase(0, 1);
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    const bool unit = text == "1";
    if (k == 0 || !unit) os << text;
    if (k >= 1) os << "t";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

// ---- eigenvalues ----------------------------------------------------------------

namespace {

ComplexVector raw_eigenvalues(const RealMatrix& a) {
  if (a.rows() == 0) return ComplexVector();
  Eigen::EigenSolver<RealMatrix> es(a, false);
  if (es.info() == Eigen::Success) return es.eigenvalues();
  // Exactly structured inputs (nilpotent blocks, permutation-like patterns)
  // can stall the real QR sweep. A shift moves the iteration off that
  // fixed point without changing the eigenvectors.
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (double shift : {0.318309886, -0.707106781, 1.414213562}) {
    const RealMatrix b = a + shift * scale * RealMatrix::Identity(a.rows(), a.cols());
    Eigen::EigenSolver<RealMatrix> retry(b, false);
    if (retry.info() == Eigen::Success)
      return (retry.eigenvalues().array() - Complex(shift * scale, 0.0)).matrix();
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(a.cast<Complex>(), false);
  if (ces.info() == Eigen::Success) return ces.eigenvalues();
  throw Error(ErrorKind::conditioning, "eigenvalue iteration did not converge");
}

struct RawCluster {
  std::vector<Complex> members;
  Complex mean() const {
    Complex s = 0.0;
    for (auto z : members) s += z;
    return s / static_cast<double>(members.size());
  }
};

}  // namespace

namespace {

// Groups eigenvalues by single linkage at radius `tol`. Returns false (with
// a diagnostic) instead of throwing so the structural search can try other
// radii.
bool group_eigenvalues(const ComplexVector& ev, double tol, std::vector<EigenCluster>& out, std::string& why) {
  const int n = static_cast<int>(ev.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(ev(i) - ev(j)) <= tol) parent[find(i)] = find(j);

  std::vector<RawCluster> raw;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(raw.size());
      raw.emplace_back();
    }
    raw[slot[r]].members.push_back(ev(i));
  }

  for (size_t p = 0; p < raw.size(); ++p)
    for (size_t q = p + 1; q < raw.size(); ++q) {
      double gap = std::numeric_limits<double>::infinity();
      for (auto x : raw[p].members)
        for (auto y : raw[q].members) gap = std::min(gap, std::abs(x - y));
      if (gap <= 2.0 * tol) {
        std::ostringstream os;
        os << "eigenvalue clusters near " << raw[p].mean() << " and " << raw[q].mean() << " are " << gap
           << " apart (radius " << tol << ")";
        why = os.str();
        return false;
      }
    }

  std::vector<EigenCluster> real_out;
  std::vector<EigenCluster> upper;
  std::vector<EigenCluster> lower;
  for (const auto& c : raw) {
    const Complex m = c.mean();
    const int mult = static_cast<int>(c.members.size());
    if (std::abs(m.imag()) <= tol)
      real_out.push_back({Complex(m.real(), 0.0), mult});
    else if (m.imag() > 0)
      upper.push_back({m, mult});
    else
      lower.push_back({m, mult});
  }
  // Pair each upper cluster with its conjugate and symmetrize.
  std::vector<EigenCluster> complex_out;
  std::vector<bool> used(lower.size(), false);
  for (const auto& u : upper) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < lower.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(std::conj(lower[k].value) - u.value);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(k);
      }
    }
    if (best < 0 || lower[best].multiplicity != u.multiplicity || best_d > tol) {
      std::ostringstream os;
      os << "complex eigenvalue cluster near " << u.value << " has no matching conjugate cluster";
      why = os.str();
      return false;
    }
    used[best] = true;
    const Complex v = 0.5 * (u.value + std::conj(lower[best].value));
    complex_out.push_back({v, u.multiplicity});
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    why = "unpaired complex eigenvalue cluster";
    return false;
  }

  std::sort(real_out.begin(), real_out.end(),
            [](const EigenCluster& x, const EigenCluster& y) { return x.value.real() < y.value.real(); });
  // Real parts within the radius count as equal so that alpha +- beta i
  // pairs sharing alpha are ordered by beta.
  std::sort(complex_out.begin(), complex_out.end(), [tol](const EigenCluster& x, const EigenCluster& y) {
    if (std::fabs(x.value.real() - y.value.real()) > tol) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  real_out.insert(real_out.end(), complex_out.begin(), complex_out.end());
  out = std::move(real_out);
  return true;
}

}  // namespace

std::vector<EigenCluster> eigen_clusters(const Matrix& a, double tol) {
  require_square(a, "eigen_clusters");
  std::vector<EigenCluster> out;
  std::string why;
  if (!group_eigenvalues(raw_eigenvalues(a.real()), tol, out, why)) throw Error(ErrorKind::cluster_ambiguity, why);
  return out;
}

std::vector<StructuralCluster> structural_clusters(const RealMatrix& a, const Tolerance& tol) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::shape, "structural_clusters: matrix is not square");
  const int n = static_cast<int>(a.rows());
  if (n == 0) return {};
  const ComplexVector ev = raw_eigenvalues(a);
  const double scale = std::max(1.0, a.norm());

  // Candidate radii: a floor for exactly repeated roots, then every pairwise
  // distance, smallest first.
  std::vector<double> radii{1e-12 * scale};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) radii.push_back(std::abs(ev(i) - ev(j)) * (1.0 + 1e-9));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  std::string last_why = "no consistent eigenvalue grouping";
  for (double r : radii) {
    if (r < radii.front()) continue;
    std::vector<EigenCluster> clusters;
    std::string why;
    if (!group_eigenvalues(ev, r, clusters, why)) {
      last_why = why;
      continue;
    }
    std::vector<StructuralCluster> out;
    ComplexMatrix combined(n, 0);
    bool ok = true;
    for (const auto& c : clusters) {
      auto st = kernel_staircase(a, c.value, c.multiplicity, tol);
      if (st.dims.back() != c.multiplicity) {
        ok = false;
        break;
      }
      ComplexMatrix both(n, combined.cols() + st.basis.cols());
      both << combined, st.basis;
      combined = std::move(both);
      if (!c.is_real()) {
        ComplexMatrix with_conj(n, combined.cols() + st.basis.cols());
        with_conj << combined, st.basis.conjugate();
        combined = std::move(with_conj);
      }
      out.push_back({c, std::move(st)});
    }
    if (!ok) continue;
    // Generalized eigenspaces of distinct eigenvalues are independent; two
    // pieces of one split cluster would overlap instead.
    Eigen::JacobiSVD<ComplexMatrix> svd(combined);
    const auto& sv = svd.singularValues();
    if (combined.cols() != n || sv(n - 1) < std::sqrt(tol.rank) * sv(0)) continue;
    return out;
  }
  throw Error(ErrorKind::cluster_ambiguity, "no eigenvalue grouping is consistent with the rank structure (" +
                                                last_why + ")");
}

// ---- ranks and kernels ------------------------------------------------------------

int numerical_rank(const ComplexMatrix& m, double rel_tol, double scale) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_tol * scale;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  return r;
}

KernelStaircase kernel_staircase(const RealMatrix& a, Complex lambda, int max_steps, const Tolerance& tol) {
  const auto n = a.rows();
  const ComplexMatrix shifted = a.cast<Complex>() - lambda * ComplexMatrix::Identity(n, n);
  Eigen::JacobiSVD<ComplexMatrix> top_a(a.cast<Complex>());
  Eigen::JacobiSVD<ComplexMatrix> top_n(shifted);
  const double scale = std::max({top_a.singularValues()(0), top_n.singularValues()(0),
                                 std::numeric_limits<double>::min()});
  const double cutoff = tol.rank * scale;

  KernelStaircase out;
  out.dims.push_back(0);
  ComplexMatrix kernel(n, 0);
  for (int k = 1; k <= max_steps; ++k) {
    // x in K_k  <=>  N x lies in K_{k-1}, i.e. the projection of N x off K_{k-1} vanishes.
    const ComplexMatrix proj = ComplexMatrix::Identity(n, n) - kernel * kernel.adjoint();
    Eigen::JacobiSVD<ComplexMatrix> svd(proj * shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > cutoff) ++r;
    const int dim = static_cast<int>(n) - r;
    if (dim <= out.dims.back()) break;
    out.dims.push_back(dim);
    kernel = svd.matrixV().rightCols(dim);
  }
  out.basis = kernel;
  return out;
}

// ---- polynomials from matrices ---------------------------------------------------

namespace {

std::vector<double> poly_mul(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> r(p.size() + q.size() - 1, 0.0);
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

std::vector<double> cluster_factor(const EigenCluster& c) {
  if (c.is_real()) return {-c.value.real(), 1.0};
  return {std::norm(c.value), -2.0 * c.value.real(), 1.0};
}

Polynomial from_real(const std::vector<double>& c) {
  std::vector<Scalar> s;
  s.reserve(c.size());
  for (double v : c) s.emplace_back(v);
  return Polynomial(std::move(s));
}

std::string describe(const EigenCluster& c) {
  std::ostringstream os;
  if (c.is_real())
    os << c.value.real();
  else
    os << c.value.real() << "±" << c.value.imag() << "i";
  os << " (multiplicity " << c.multiplicity << ")";
  return os.str();
}

}  // namespace

Polynomial char_poly(const Matrix& a, const Tolerance& tol) {
  require_square(a, "char_poly");
  if (a.mode() == NumericMode::exact) return exact_char_poly(a.exact());
  const RealMatrix m = a.real();
  std::vector<double> p{1.0};
  for (const auto& sc : structural_clusters(m, tol)) {
    const auto f = cluster_factor(sc.cluster);
    for (int k = 0; k < sc.cluster.multiplicity; ++k) p = poly_mul(p, f);
  }
  return from_real(p);
}

Polynomial minimal_poly(const Matrix& a, const Tolerance& tol) {
  require_square(a, "minimal_poly");
  if (a.mode() == NumericMode::exact) return exact_minimal_poly(a.exact());
  const RealMatrix m = a.real();
  const int n = static_cast<int>(m.rows());
  std::vector<double> p{1.0};
  std::vector<StructuralCluster> clusters;
  try {
    clusters = structural_clusters(m, tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::tolerance_failure, std::string("minimal polynomial: ") + e.what());
  }
  for (const auto& sc : clusters) {
    const auto& st = sc.staircase;
    if (st.dims.back() != sc.cluster.multiplicity)
      throw Error(ErrorKind::tolerance_failure,
                  "generalized eigenspace of cluster " + describe(sc.cluster) + " has numerical dimension " +
                      std::to_string(st.dims.back()));
    const int index = static_cast<int>(st.dims.size()) - 1;
    const auto f = cluster_factor(sc.cluster);
    for (int k = 0; k < index; ++k) p = poly_mul(p, f);
  }
  // Annihilation residual relative to the size of the terms being cancelled.
  const double norm_a = std::max(1.0, m.cwiseAbs().maxCoeff() * n);
  double term_scale = 0.0;
  for (size_t k = 0; k < p.size(); ++k) term_scale += std::fabs(p[k]) * std::pow(norm_a, static_cast<double>(k));
  const Polynomial mu = from_real(p);
  const double residual = mu.evaluate(m).cwiseAbs().maxCoeff();
  if (residual > tol.algebraic * term_scale)
    throw Error(ErrorKind::tolerance_failure, "minimal polynomial " + mu.to_string() +
                                                  " leaves residual " + std::to_string(residual));
  return mu;
}

Matrix exact_if_integral(const RealMatrix& m) {
  ExactMatrix e(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      if (!std::isfinite(v) || v != std::round(v) || std::fabs(v) > 1e15) return Matrix(m);
      e(static_cast<int>(r), static_cast<int>(c)) = Rational(static_cast<long long>(v));
    }
  return Matrix(std::move(e));
}

// ---- constructors --------------------------------------------------------------------

RealMatrix jordan_block(int m, double lambda) {
  RealMatrix j = lambda * RealMatrix::Identity(m, m);
  for (int i = 0; i + 1 < m; ++i) j(i, i + 1) = 1.0;
  return j;
}

RealMatrix anti_diagonal(int n) {
  RealMatrix e = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) e(i, n - 1 - i) = 1.0;
  return e;
}

RealMatrix direct_sum(const std::vector<RealMatrix>& blocks) {
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  RealMatrix out = RealMatrix::Zero(r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

}  // namespace petrov::linalg

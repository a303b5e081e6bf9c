// Jordan structure extraction and the Jordan-chain construction that produces
// the normal-form basis.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "jordan_internal.hpp"
#include "petrov/normal_form.hpp"

namespace petrov {

using linalg::EigenCluster;
using linalg::NumericMode;

int JordanStructure::dim() const {
  int d = 0;
  for (const auto& r : real_blocks)
    for (int s : r.sizes) d += s;
  for (const auto& c : complex_blocks)
    for (int s : c.sizes) d += 2 * s;
  return d;
}

int JordanStructure::real_block_count() const {
  int k = 0;
  for (const auto& r : real_blocks) k += static_cast<int>(r.sizes.size());
  return k;
}

bool JordanStructure::matches(const JordanStructure& o, double tol) const {
  if (real_blocks.size() != o.real_blocks.size() || complex_blocks.size() != o.complex_blocks.size()) return false;
  for (size_t i = 0; i < real_blocks.size(); ++i) {
    if (std::fabs(real_blocks[i].lambda - o.real_blocks[i].lambda) > tol) return false;
    if (real_blocks[i].sizes != o.real_blocks[i].sizes) return false;
  }
  for (size_t i = 0; i < complex_blocks.size(); ++i) {
    if (std::fabs(complex_blocks[i].alpha - o.complex_blocks[i].alpha) > tol) return false;
    if (std::fabs(complex_blocks[i].beta - o.complex_blocks[i].beta) > tol) return false;
    if (complex_blocks[i].sizes != o.complex_blocks[i].sizes) return false;
  }
  return true;
}

std::string JordanStructure::to_string() const {
  std::ostringstream os;
  const char* sep = "";
  for (const auto& r : real_blocks) {
    os << sep << r.lambda << ":[";
    for (size_t k = 0; k < r.sizes.size(); ++k) os << (k ? "," : "") << r.sizes[k];
    os << "]";
    sep = " ";
  }
  for (const auto& c : complex_blocks) {
    os << sep << c.alpha << "+-" << c.beta << "i:[";
    for (size_t k = 0; k < c.sizes.size(); ++k) os << (k ? "," : "") << c.sizes[k];
    os << "]";
    sep = " ";
  }
  return os.str();
}

namespace detail {

std::vector<int> sizes_from_dims(const std::vector<int>& dims) {
  // Blocks of size >= k number dims[k] - dims[k-1].
  std::vector<int> sizes;
  const int steps = static_cast<int>(dims.size()) - 1;
  for (int k = 1; k <= steps; ++k) {
    const int at_least_k = dims[k] - dims[k - 1];
    const int at_least_next = k < steps ? dims[k + 1] - dims[k] : 0;
    for (int c = 0; c < at_least_k - at_least_next; ++c) sizes.push_back(k);
  }
  return sizes;
}

namespace {

std::string describe(const EigenCluster& c) {
  std::ostringstream os;
  if (c.is_real())
    os << c.value.real();
  else
    os << c.value.real() << "+-" << c.value.imag() << "i";
  return os.str();
}

// Exact kernel dimensions when the input is rational and the eigenvalue is
// a rational root of the characteristic polynomial.
bool exact_dims(const Matrix& a, const EigenCluster& c, const linalg::Polynomial& chi, double radius,
                std::vector<int>& dims, double& snapped) {
  if (a.mode() != NumericMode::exact || !c.is_real()) return false;
  Rational q;
  if (!linalg::rational_approximation(c.value.real(), 10000, radius, q)) return false;
  Rational value = 0;
  for (auto it = chi.coeffs().rbegin(); it != chi.coeffs().rend(); ++it) value = value * q + it->exact();
  if (value != 0) return false;
  dims = linalg::exact_kernel_dims(a.exact(), q, c.multiplicity);
  snapped = q.convert_to<double>();
  return true;
}

}  // namespace

namespace {

ComplexMatrix orthonormal(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(m.cols());
}

// Staircase kernels inherit SVD-threshold noise from nearby eigenvalues.
// Applying (A - mu)^m for every other eigenvalue mu (including the conjugate
// of a complex lambda) annihilates those leaked components exactly.
void refine_kernels(const RealMatrix& a, std::vector<ClusterBlocks>& blocks) {
  const auto n = a.rows();
  const ComplexMatrix ac = a.cast<Complex>();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (size_t i = 0; i < blocks.size(); ++i) {
    ComplexMatrix k = blocks[i].kernel;
    if (k.cols() == 0) continue;
    auto kill = [&](Complex mu, int mult) {
      for (int step = 0; step < mult; ++step) k = orthonormal((ac - mu * id) * k);
    };
    for (size_t j = 0; j < blocks.size(); ++j) {
      if (j == i) continue;
      const auto& other = blocks[j].cluster;
      kill(other.value, other.multiplicity);
      if (!other.is_real()) kill(std::conj(other.value), other.multiplicity);
    }
    if (!blocks[i].cluster.is_real()) kill(std::conj(blocks[i].cluster.value), blocks[i].cluster.multiplicity);
    blocks[i].kernel = std::move(k);
  }
}

}  // namespace

std::vector<ClusterBlocks> cluster_blocks(const Matrix& a, const Tolerance& tol) {
  const RealMatrix m = a.real();
  linalg::Polynomial chi;
  if (a.mode() == NumericMode::exact) chi = linalg::exact_char_poly(a.exact());

  std::vector<ClusterBlocks> out;
  for (auto& sc : linalg::structural_clusters(m, tol)) {
    ClusterBlocks cb;
    cb.cluster = sc.cluster;
    std::vector<int> dims = sc.staircase.dims;
    double snapped = 0.0;
    std::vector<int> exact;
    if (exact_dims(a, sc.cluster, chi, tol.rank, exact, snapped)) {
      cb.cluster.value = Complex(snapped, 0.0);
      cb.exact = true;
      dims = std::move(exact);
    }
    cb.kernel = std::move(sc.staircase.basis);
    if (dims.back() != sc.cluster.multiplicity)
      throw Error(ErrorKind::conditioning,
                  "eigenvalue " + describe(sc.cluster) + ": generalized eigenspace has dimension " +
                      std::to_string(dims.back()) + " but algebraic multiplicity " +
                      std::to_string(sc.cluster.multiplicity) +
                      "; the input is near a Jordan-structure boundary");
    cb.sizes = sizes_from_dims(dims);
    out.push_back(std::move(cb));
  }
  refine_kernels(m, out);
  return out;
}

namespace {

// Orthonormal basis of the column space, keeping `keep` directions.
RealMatrix real_span(const RealMatrix& m, int keep) {
  Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(keep);
}

ComplexMatrix complex_span(const ComplexMatrix& m, int keep) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(keep);
}

int count_above(const RealVector& sv, double cutoff) {
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  return r;
}

template <typename Mat, typename Vec>
Vec power_apply(const Mat& n, int k, const Vec& x) {
  Vec y = x;
  for (int i = 0; i < k; ++i) y = n * y;
  return y;
}

}  // namespace

std::vector<Chain> real_chains(const RealMatrix& a, const RealMatrix& g, double lambda, std::vector<int> sizes,
                               const ComplexMatrix& kernel, const Tolerance& tol) {
  const auto n = a.rows();
  const int d = std::accumulate(sizes.begin(), sizes.end(), 0);
  const RealMatrix nil = a - lambda * RealMatrix::Identity(n, n);

  // Real orthonormal basis of the generalized eigenspace.
  RealMatrix u;
  if (kernel.cols() == d) {
    RealMatrix both(n, 2 * d);
    both << kernel.real(), kernel.imag();
    u = real_span(both, d);
  } else {
    RealMatrix power = RealMatrix::Identity(n, n);
    for (int k = 0; k < d; ++k) power = nil * power;
    Eigen::JacobiSVD<RealMatrix> svd(power, Eigen::ComputeFullV);
    u = svd.matrixV().rightCols(d);
  }

  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  std::vector<Chain> chains;
  for (size_t b = 0; b < sizes.size(); ++b) {
    const int m = sizes[b];
    const RealMatrix top = power_apply(nil, m - 1, u);
    RealMatrix f = u.transpose() * g * top;
    f = 0.5 * (f + f.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(f);
    int pick = 0;
    for (int i = 1; i < es.eigenvalues().size(); ++i)
      if (std::fabs(es.eigenvalues()(i)) > std::fabs(es.eigenvalues()(pick))) pick = i;
    if (std::fabs(es.eigenvalues()(pick)) <= tol.rank * g.norm() * top.norm())
      throw Error(ErrorKind::conditioning, "Jordan chain of length " + std::to_string(m) + " at eigenvalue " +
                                               std::to_string(lambda) + " has a degenerate pairing");
    RealVector x = u * es.eigenvectors().col(pick);

    auto pairing = [&](const RealVector& v, int j) -> double {
      return v.dot(g * power_apply(nil, j, v));
    };
    const double c = pairing(x, m - 1);
    for (int j = m - 2; j >= 0; --j) {
      const double fj = pairing(x, j);
      x -= (fj / (2.0 * c)) * power_apply(nil, m - 1 - j, x);
    }
    const double c_final = pairing(x, m - 1);
    x /= std::sqrt(std::fabs(c_final));

    Chain chain;
    chain.epsilon = c_final > 0 ? 1 : -1;
    chain.size = m;
    chain.vectors = RealMatrix(n, m);
    for (int k = 1; k <= m; ++k) chain.vectors.col(k - 1) = power_apply(nil, m - k, x);

    // G-orthogonal complement inside the remaining invariant subspace.
    const int rest = static_cast<int>(u.cols()) - m;
    if (rest > 0) {
      const RealMatrix& w = chain.vectors;
      const RealMatrix gram_inv = chain.epsilon * linalg::anti_diagonal(m);
      const RealMatrix projected = u - w * gram_inv * (w.transpose() * g * u);
      Eigen::JacobiSVD<RealMatrix> svd(projected, Eigen::ComputeThinU);
      const int r = count_above(svd.singularValues(), tol.rank * std::max(1.0, svd.singularValues()(0)));
      if (r != rest)
        throw Error(ErrorKind::conditioning, "complement of a Jordan chain at eigenvalue " +
                                                 std::to_string(lambda) + " lost rank");
      u = svd.matrixU().leftCols(rest);
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

std::vector<Chain> complex_chains(const RealMatrix& a, const RealMatrix& g, Complex lambda, std::vector<int> sizes,
                                  const ComplexMatrix& kernel, const Tolerance& tol) {
  const auto n = a.rows();
  const int d = std::accumulate(sizes.begin(), sizes.end(), 0);
  const ComplexMatrix nil = a.cast<Complex>() - lambda * ComplexMatrix::Identity(n, n);
  const ComplexMatrix gc = g.cast<Complex>();
  ComplexMatrix u = complex_span(kernel, d);

  // The bilinear (not sesquilinear) pairing x^T G y.
  auto pairing = [&](const ComplexVector& v, int j) -> Complex {
    return (v.transpose() * gc * power_apply(nil, j, v))(0, 0);
  };

  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  std::vector<Chain> chains;
  for (size_t b = 0; b < sizes.size(); ++b) {
    const int m = sizes[b];
    const ComplexMatrix top = power_apply(nil, m - 1, u);
    const ComplexMatrix f = u.transpose() * gc * top;
    // Polarization over a basis of the row space finds a vector with a
    // nonzero quadratic value whenever F is nonzero.
    Eigen::JacobiSVD<ComplexMatrix> svd(f, Eigen::ComputeFullV);
    const int r = std::max(1, count_above(svd.singularValues(), tol.rank * svd.singularValues()(0)));
    std::vector<ComplexVector> candidates;
    for (int k = 0; k < r; ++k) candidates.push_back(svd.matrixV().col(k));
    for (int k = 0; k < r; ++k)
      for (int l = k + 1; l < r; ++l) {
        candidates.push_back(svd.matrixV().col(k) + svd.matrixV().col(l));
        candidates.push_back(svd.matrixV().col(k) + Complex(0, 1) * svd.matrixV().col(l));
      }
    ComplexVector best;
    double best_val = -1.0;
    for (const auto& cand : candidates) {
      const double val = std::abs((cand.transpose() * f * cand)(0, 0)) / cand.squaredNorm();
      if (val > best_val) {
        best_val = val;
        best = cand;
      }
    }
    if (best_val <= tol.rank * g.norm() * top.norm())
      throw Error(ErrorKind::conditioning, "complex Jordan chain of length " + std::to_string(m) +
                                               " has a degenerate pairing");
    ComplexVector x = u * best;
    const Complex c = pairing(x, m - 1);
    for (int j = m - 2; j >= 0; --j) {
      const Complex fj = pairing(x, j);
      x -= (fj / (2.0 * c)) * power_apply(nil, m - 1 - j, x);
    }
    x /= std::sqrt(pairing(x, m - 1));

    ComplexMatrix q(n, m);
    for (int k = 1; k <= m; ++k) q.col(k - 1) = power_apply(nil, m - k, x);

    // q_k = u_k + i v_k; the real pair (sqrt2 v_k, sqrt2 u_k) carries C(j)
    // with Gram diag(-1, 1) on the anti-diagonal.
    Chain chain;
    chain.size = m;
    chain.epsilon = 1;
    chain.vectors = RealMatrix(n, 2 * m);
    for (int k = 0; k < m; ++k) {
      chain.vectors.col(2 * k) = std::sqrt(2.0) * q.col(k).imag();
      chain.vectors.col(2 * k + 1) = std::sqrt(2.0) * q.col(k).real();
    }

    const int rest = static_cast<int>(u.cols()) - m;
    if (rest > 0) {
      const ComplexMatrix gram_inv = linalg::anti_diagonal(m).cast<Complex>();
      const ComplexMatrix projected = u - q * gram_inv * (q.transpose() * gc * u);
      Eigen::JacobiSVD<ComplexMatrix> psvd(projected, Eigen::ComputeThinU);
      const int pr = count_above(psvd.singularValues(), tol.rank * std::max(1.0, psvd.singularValues()(0)));
      if (pr != rest) throw Error(ErrorKind::conditioning, "complement of a complex Jordan chain lost rank");
      u = psvd.matrixU().leftCols(rest);
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace detail

JordanStructure jordan_structure(const Matrix& a, const Tolerance& tol) {
  if (!a.is_square()) throw Error(ErrorKind::shape, "jordan_structure: matrix is not square");
  JordanStructure js;
  for (auto& cb : detail::cluster_blocks(a, tol)) {
    std::sort(cb.sizes.begin(), cb.sizes.end());
    if (cb.cluster.is_real())
      js.real_blocks.push_back({cb.cluster.value.real(), cb.sizes});
    else
      js.complex_blocks.push_back({cb.cluster.value.real(), cb.cluster.value.imag(), cb.sizes});
  }
  return js;
}

}  // namespace petrov

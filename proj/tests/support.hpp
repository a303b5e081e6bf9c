#pragma once

// Hand-rolled generators and independent oracles shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "petrov/normal_form.hpp"

namespace testsupport {

using petrov::ComplexEigenBlocks;
using petrov::JordanStructure;
using petrov::RealEigenBlocks;
using petrov::RealMatrix;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int sign() { return integer(0, 1) ? 1 : -1; }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<size_t>(integer(0, static_cast<int>(items.size()) - 1))];
  }

 private:
  std::mt19937_64 gen_;
};

/// Random Jordan structure of total dimension `dim`. Eigenvalues come from a
/// well separated grid so every structure is unambiguous.
inline JordanStructure random_structure(Rng& rng, int dim, bool allow_complex = true) {
  static const std::vector<double> reals = {-2.0, -1.0, -0.5, 0.0, 1.0, 1.5, 3.0};
  static const std::vector<std::pair<double, double>> pairs = {{0.0, 1.0}, {1.0, 0.5}, {-1.0, 2.0}, {2.0, 1.0}};
  JordanStructure s;
  std::vector<double> used_real;
  std::vector<size_t> used_pair;
  int left = dim;
  while (left > 0) {
    const bool complex = allow_complex && left >= 2 && used_pair.size() < pairs.size() && rng.integer(0, 3) == 0;
    if (complex) {
      size_t k = 0;
      do k = static_cast<size_t>(rng.integer(0, static_cast<int>(pairs.size()) - 1));
      while (std::find(used_pair.begin(), used_pair.end(), k) != used_pair.end());
      used_pair.push_back(k);
      ComplexEigenBlocks c{pairs[k].first, pairs[k].second, {}};
      int budget = rng.integer(1, left / 2);
      left -= 2 * budget;
      while (budget > 0) {
        const int m = rng.integer(1, budget);
        c.sizes.push_back(m);
        budget -= m;
      }
      std::sort(c.sizes.begin(), c.sizes.end());
      s.complex_blocks.push_back(c);
      continue;
    }
    double lambda = 0.0;
    do lambda = rng.pick(reals);
    while (std::find(used_real.begin(), used_real.end(), lambda) != used_real.end());
    used_real.push_back(lambda);
    RealEigenBlocks r{lambda, {}};
    int budget = rng.integer(1, left);
    left -= budget;
    while (budget > 0) {
      const int m = rng.integer(1, budget);
      r.sizes.push_back(m);
      budget -= m;
    }
    std::sort(r.sizes.begin(), r.sizes.end());
    s.real_blocks.push_back(r);
  }
  std::sort(s.real_blocks.begin(), s.real_blocks.end(),
            [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  std::sort(s.complex_blocks.begin(), s.complex_blocks.end(), [](const auto& a, const auto& b) {
    return a.alpha != b.alpha ? a.alpha < b.alpha : a.beta < b.beta;
  });
  return s;
}

inline std::vector<int> random_signs(Rng& rng, const JordanStructure& s) {
  std::vector<int> signs(static_cast<size_t>(s.real_block_count()));
  for (auto& e : signs) e = rng.sign();
  return petrov::canonical_signs(s, signs);
}

inline double condition_number(const RealMatrix& t) {
  Eigen::JacobiSVD<RealMatrix> svd(t);
  const auto& sv = svd.singularValues();
  return sv(0) / sv(sv.size() - 1);
}

/// Invertible matrix with entries in [-2, 2] and condition number <= max_cond.
inline RealMatrix random_transform(Rng& rng, int n, double max_cond = 100.0) {
  for (;;) {
    RealMatrix t(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(i, j) = rng.uniform(-2.0, 2.0);
    if (condition_number(t) <= max_cond) return t;
  }
}

/// (A, G) whose normal form is (a_norm, g_norm) through the basis change T:
/// A = T a_norm T^-1, G = T^-T g_norm T^-1.
inline std::pair<RealMatrix, RealMatrix> conjugate_pair(const RealMatrix& a_norm, const RealMatrix& g_norm,
                                                        const RealMatrix& t) {
  const RealMatrix ti = t.inverse();
  RealMatrix a = t * a_norm * ti;
  RealMatrix g = ti.transpose() * g_norm * ti;
  g = (0.5 * (g + g.transpose())).eval();
  return {a, g};
}

/// Negative eigenvalue count of a symmetric matrix by a direct eigensolve.
inline int negative_count(const RealMatrix& g) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  int neg = 0;
  for (int k = 0; k < es.eigenvalues().size(); ++k) neg += es.eigenvalues()(k) < -1e-9 * scale ? 1 : 0;
  return neg;
}

/// Eigenvalues sorted by (real, imag).
inline std::vector<std::complex<double>> sorted_eigenvalues(const RealMatrix& a) {
  Eigen::EigenSolver<RealMatrix> es(a, false);
  std::vector<std::complex<double>> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end(), [](auto x, auto y) {
    return std::abs(x.real() - y.real()) > 1e-6 ? x.real() < y.real() : x.imag() < y.imag();
  });
  return v;
}

inline RealMatrix mat(int rows, int cols, std::initializer_list<double> values) {
  RealMatrix m(rows, cols);
  auto it = values.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

inline RealMatrix ea(int n) {
  RealMatrix m = RealMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, n - 1 - k) = 1.0;
  return m;
}

inline RealMatrix jordan(int n, double lambda) {
  RealMatrix m = lambda * RealMatrix::Identity(n, n);
  for (int k = 0; k + 1 < n; ++k) m(k, k + 1) = 1.0;
  return m;
}

inline RealMatrix sum(std::initializer_list<RealMatrix> blocks) {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.rows());
  RealMatrix m = RealMatrix::Zero(n, n);
  int at = 0;
  for (const auto& b : blocks) {
    m.block(at, at, b.rows(), b.cols()) = b;
    at += static_cast<int>(b.rows());
  }
  return m;
}

inline double max_abs_diff(const RealMatrix& a, const RealMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testsupport

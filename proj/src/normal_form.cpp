#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "jordan_internal.hpp"
#include "petrov/normal_form.hpp"

namespace petrov {

SelfAdjointPair SelfAdjointPair::make(Matrix a, Matrix g, double tol) {
  if (!a.is_square()) throw Error(ErrorKind::shape, "operator matrix is not square");
  if (!g.is_square()) throw Error(ErrorKind::shape, "Gram matrix is not square");
  if (a.rows() != g.rows())
    throw Error(ErrorKind::shape, "operator is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                      " but Gram matrix is " + std::to_string(g.rows()) + "x" +
                                      std::to_string(g.cols()));
  auto space = linalg::BilinearSpace::make(std::move(g), tol);
  if (!linalg::is_self_adjoint(a, space, tol * std::max(1.0, a.real().cwiseAbs().maxCoeff())))
    throw Error(ErrorKind::contract, "operator is not self-adjoint with respect to the Gram matrix");
  return SelfAdjointPair(std::move(a), std::move(space));
}

std::vector<int> canonical_signs(const JordanStructure& structure, std::vector<int> signs) {
  if (static_cast<int>(signs.size()) != structure.real_block_count())
    throw Error(ErrorKind::contract, "expected " + std::to_string(structure.real_block_count()) +
                                         " signs, got " + std::to_string(signs.size()));
  for (int s : signs)
    if (s != 1 && s != -1) throw Error(ErrorKind::contract, "signs must be +1 or -1");
  size_t pos = 0;
  for (const auto& group : structure.real_blocks) {
    if (!std::is_sorted(group.sizes.begin(), group.sizes.end()))
      throw Error(ErrorKind::contract, "block sizes must be ascending");
    size_t k = 0;
    while (k < group.sizes.size()) {
      size_t e = k;
      while (e < group.sizes.size() && group.sizes[e] == group.sizes[k]) ++e;
      std::sort(signs.begin() + pos + k, signs.begin() + pos + e, std::greater<>());
      k = e;
    }
    pos += group.sizes.size();
  }
  return signs;
}

void assemble_normal_matrices(const JordanStructure& structure, const std::vector<int>& raw_signs,
                              RealMatrix& a_norm, RealMatrix& g_norm) {
  const std::vector<int> signs = canonical_signs(structure, raw_signs);
  const int n = structure.dim();
  a_norm = RealMatrix::Zero(n, n);
  g_norm = RealMatrix::Zero(n, n);
  int at = 0;
  size_t s = 0;
  for (const auto& group : structure.real_blocks)
    for (int m : group.sizes) {
      a_norm.block(at, at, m, m) = linalg::jordan_block(m, group.lambda);
      g_norm.block(at, at, m, m) = signs[s++] * linalg::anti_diagonal(m);
      at += m;
    }
  for (const auto& group : structure.complex_blocks) {
    if (!(group.beta > 0)) throw Error(ErrorKind::contract, "complex blocks need beta > 0");
    for (int m : group.sizes) {
      for (int k = 0; k < m; ++k) {
        const int r = at + 2 * k;
        a_norm(r, r) = group.alpha;
        a_norm(r, r + 1) = -group.beta;
        a_norm(r + 1, r) = group.beta;
        a_norm(r + 1, r + 1) = group.alpha;
        if (k + 1 < m) {
          a_norm(r, r + 2) = 1.0;
          a_norm(r + 1, r + 3) = 1.0;
        }
        const int c = at + 2 * (m - 1 - k);
        g_norm(r, c) = -1.0;
        g_norm(r + 1, c + 1) = 1.0;
      }
      at += 2 * m;
    }
  }
}

SelfAdjointPair assemble_normal_pair(const JordanStructure& structure, const std::vector<int>& signs) {
  RealMatrix a, g;
  assemble_normal_matrices(structure, signs, a, g);
  return SelfAdjointPair::make(Matrix(a), Matrix(g), 0.0);
}

int negative_index(const JordanStructure& structure, const std::vector<int>& signs) {
  if (static_cast<int>(signs.size()) != structure.real_block_count())
    throw Error(ErrorKind::contract, "sign count does not match the real block count");
  int twice = 0;
  size_t s = 0;
  for (const auto& group : structure.real_blocks)
    for (int m : group.sizes) {
      // A J_m block with sign eps has (m + ((-1)^m - 1)/2 * eps) / 2 negative directions.
      const int odd_term = (m % 2 == 0) ? 0 : -1;
      twice += m + odd_term * signs[s++];
    }
  int count = twice / 2;
  for (const auto& group : structure.complex_blocks)
    for (int m : group.sizes) count += m;
  return count;
}

int negative_index(const PetrovNormalForm& form) { return negative_index(form.structure, form.signs); }

PetrovNormalForm petrov_normal_form(const SelfAdjointPair& pair, const Tolerance& tol) {
  const RealMatrix a = pair.a().real();
  const RealMatrix g = pair.g().real();
  const auto n = a.rows();

  PetrovNormalForm form;
  std::vector<RealMatrix> columns;
  for (const auto& cb : detail::cluster_blocks(pair.a(), tol)) {
    if (cb.cluster.is_real()) {
      const double lambda = cb.cluster.value.real();
      auto chains = detail::real_chains(a, g, lambda, cb.sizes, cb.kernel, tol);
      std::stable_sort(chains.begin(), chains.end(), [](const detail::Chain& x, const detail::Chain& y) {
        if (x.size != y.size) return x.size < y.size;
        return x.epsilon > y.epsilon;
      });
      RealEigenBlocks group{lambda, {}};
      for (auto& ch : chains) {
        group.sizes.push_back(ch.size);
        form.signs.push_back(ch.epsilon);
        columns.push_back(std::move(ch.vectors));
      }
      form.structure.real_blocks.push_back(std::move(group));
    } else {
      auto chains = detail::complex_chains(a, g, cb.cluster.value, cb.sizes, cb.kernel, tol);
      std::stable_sort(chains.begin(), chains.end(),
                       [](const detail::Chain& x, const detail::Chain& y) { return x.size < y.size; });
      ComplexEigenBlocks group{cb.cluster.value.real(), cb.cluster.value.imag(), {}};
      for (auto& ch : chains) {
        group.sizes.push_back(ch.size);
        columns.push_back(std::move(ch.vectors));
      }
      form.structure.complex_blocks.push_back(std::move(group));
    }
  }

  form.transform = RealMatrix(n, n);
  Eigen::Index at = 0;
  for (const auto& c : columns) {
    form.transform.middleCols(at, c.cols()) = c;
    at += c.cols();
  }
  if (at != n) throw Error(ErrorKind::internal, "normal-form basis has the wrong size");

  Eigen::JacobiSVD<RealMatrix> svd(form.transform);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  // A length-m chain built from a basis with condition c can reach c^m, so
  // this only rejects numerically singular bases; accuracy is judged by the
  // residual check below.
  const double limit = 1.0 / tol.algebraic;
  if (!(cond <= limit)) {
    std::ostringstream os;
    os << "Jordan chain matrix has condition number " << cond << " (limit " << limit << ")";
    throw Error(ErrorKind::conditioning, os.str());
  }

  assemble_normal_matrices(form.structure, form.signs, form.a_norm, form.g_norm);
  const RealMatrix a_computed = form.transform.lu().solve(a * form.transform);
  const RealMatrix g_computed = form.transform.transpose() * g * form.transform;
  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), g.cwiseAbs().maxCoeff()});
  const double res_a = (a_computed - form.a_norm).cwiseAbs().maxCoeff();
  const double res_g = (g_computed - form.g_norm).cwiseAbs().maxCoeff();
  if (res_a > tol.rank * scale || res_g > tol.rank * scale) {
    std::ostringstream os;
    os << "normal-form residuals " << res_a << " (operator) and " << res_g
       << " (Gram) exceed the tolerance; the Jordan chains are numerically defective";
    throw Error(ErrorKind::conditioning, os.str());
  }
  return form;
}

}  // namespace petrov

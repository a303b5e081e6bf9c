#pragma once

#include <vector>

#include "petrov/normal_form.hpp"

namespace petrov::detail {

/// One eigenvalue cluster with its Jordan block sizes.
struct ClusterBlocks {
  linalg::EigenCluster cluster;
  std::vector<int> sizes;
  ComplexMatrix kernel;  // generalized eigenspace basis (float path only)
  bool exact = false;
};

/// A Jordan chain written as real basis vectors. Real chains have `size`
/// columns; complex chains have 2*size columns in (imag, real) pairs.
struct Chain {
  int size = 0;
  int epsilon = 1;
  RealMatrix vectors;
};

std::vector<int> sizes_from_dims(const std::vector<int>& dims);
std::vector<ClusterBlocks> cluster_blocks(const Matrix& a, const Tolerance& tol);
std::vector<Chain> real_chains(const RealMatrix& a, const RealMatrix& g, double lambda, std::vector<int> sizes,
                               const ComplexMatrix& kernel, const Tolerance& tol);
std::vector<Chain> complex_chains(const RealMatrix& a, const RealMatrix& g, Complex lambda, std::vector<int> sizes,
                                  const ComplexMatrix& kernel, const Tolerance& tol);

}  // namespace petrov::detail

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "petrov/linalg.hpp"

namespace petrov {

using linalg::Matrix;
using linalg::Tolerance;

/// Block sizes attached to one real eigenvalue, ascending.
struct RealEigenBlocks {
  double lambda = 0.0;
  std::vector<int> sizes;
};

/// Block sizes attached to one conjugate pair alpha +- beta i (beta > 0).
struct ComplexEigenBlocks {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<int> sizes;
};

struct JordanStructure {
  std::vector<RealEigenBlocks> real_blocks;
  std::vector<ComplexEigenBlocks> complex_blocks;

  int dim() const;
  int real_block_count() const;
  /// Same eigenvalues (within tol) carrying the same size lists.
  bool matches(const JordanStructure& other, double tol) const;
  std::string to_string() const;
};

/// Operator A together with a non-degenerate form G such that G A = A^T G.
class SelfAdjointPair {
 public:
  /// Throws ErrorKind::shape on dimension mismatch, ErrorKind::contract when
  /// G is degenerate or A is not G-self-adjoint.
  static SelfAdjointPair make(Matrix a, Matrix g, double tol = 1e-9);

  const Matrix& a() const { return a_; }
  const linalg::BilinearSpace& space() const { return space_; }
  const Matrix& g() const { return space_.gram(); }
  int dim() const { return space_.dim(); }

 private:
  SelfAdjointPair(Matrix a, linalg::BilinearSpace s) : a_(std::move(a)), space_(std::move(s)) {}
  Matrix a_;
  linalg::BilinearSpace space_;
};

/// Canonical simultaneous form of a self-adjoint pair.
///
/// Blocks are laid out real eigenvalues ascending (sizes ascending, then
/// sign descending within one size), followed by complex pairs ordered by
/// real then imaginary part. `signs` holds one entry per real block in that
/// order.
struct PetrovNormalForm {
  JordanStructure structure;
  std::vector<int> signs;
  RealMatrix transform;
  RealMatrix a_norm;
  RealMatrix g_norm;
};

/// Jordan block sizes per eigenvalue, from the rank sequence of (A - lambda)^k.
JordanStructure jordan_structure(const Matrix& a, const Tolerance& tol = {});

PetrovNormalForm petrov_normal_form(const SelfAdjointPair& pair, const Tolerance& tol = {});

/// Negative directions of the normal-form Gram, counted block by block.
int negative_index(const PetrovNormalForm& form);
int negative_index(const JordanStructure& structure, const std::vector<int>& signs);

/// Sorts signs within each run of equal block sizes so they are descending.
std::vector<int> canonical_signs(const JordanStructure& structure, std::vector<int> signs);

/// Builds the normal-form pair for a structure and sign list.
SelfAdjointPair assemble_normal_pair(const JordanStructure& structure, const std::vector<int>& signs);
/// Matrices of assemble_normal_pair, without the pair validation.
void assemble_normal_matrices(const JordanStructure& structure, const std::vector<int>& signs,
                              RealMatrix& a_norm, RealMatrix& g_norm);

// ---- types ------------------------------------------------------------------

enum class Label { I, II, III, IV, V, VI, VII_i, VII_ii, VIII, IX_i, IX_ii, X, XI };

const char* to_string(Label label);
/// Parses "I".."XI", "VII-i", ... (ErrorKind::parse on failure).
Label label_from_string(const std::string& text);

/// One block of the part of the form that carries the index.
struct DistinguishedBlock {
  bool real = true;
  double lambda = 0.0;  // real eigenvalue, or alpha for a complex pair
  double beta = 0.0;
  int size = 1;
  int epsilon = 1;  // sign of the Gram block; +1 for complex blocks
};

struct AlgebraicType {
  int index = 0;
  Label label = Label::I;
  std::optional<int> epsilon;
  std::vector<DistinguishedBlock> blocks;
  /// Eigenvalues of the remaining spacelike 1x1 blocks.
  std::vector<double> others;

  std::string name() const;  // e.g. "IX-ii(eps=-1)"
};

struct GeometricType {
  int index = 0;
  Label label = Label::I;
  /// +1 when the canonical orientation is the input one, -1 when it is (-A, G).
  int orientation = 1;
  AlgebraicType canonical;
};

AlgebraicType classify_algebraic(const PetrovNormalForm& form);
GeometricType classify_geometric(const SelfAdjointPair& pair, const Tolerance& tol = {});
/// Geometric type of a form already computed for A and for -A.
GeometricType merge_orientations(const AlgebraicType& plus, const AlgebraicType& minus);

/// Every admissible (label, epsilon) combination for the given index.
std::vector<std::pair<Label, std::optional<int>>> algebraic_forms(int index);
std::vector<Label> geometric_forms(int index);

}  // namespace petrov

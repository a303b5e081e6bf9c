#include "doctest.h"

#include "petrov/catalog.hpp"
#include "petrov/normal_form.hpp"
#include "support.hpp"

using namespace petrov;
using testsupport::ea;
using testsupport::jordan;
using testsupport::mat;
using testsupport::max_abs_diff;
using testsupport::sum;

namespace {

SelfAdjointPair pair_of(const RealMatrix& a, const RealMatrix& g) { return SelfAdjointPair::make(Matrix(a), Matrix(g)); }

AlgebraicType algebraic(const RealMatrix& a, const RealMatrix& g) {
  return classify_algebraic(petrov_normal_form(pair_of(a, g)));
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::internal;
}

JordanStructure real_structure(std::vector<RealEigenBlocks> blocks) { return JordanStructure{std::move(blocks), {}}; }

}  // namespace

TEST_CASE("jordan structure from rank sequences") {
  const auto m = catalog::make_example("m");
  const auto sm = jordan_structure(Matrix(m->evaluate(m->anchor()).shape));
  REQUIRE(sm.real_blocks.size() == 1);
  CHECK(sm.real_blocks[0].lambda == doctest::Approx(0.0));
  CHECK(sm.real_blocks[0].sizes == std::vector<int>{4});

  const auto g = catalog::make_example("g");
  const auto sg = jordan_structure(Matrix(g->evaluate(g->anchor()).shape));
  REQUIRE(sg.real_blocks.size() == 1);
  CHECK(sg.real_blocks[0].lambda == doctest::Approx(1.0));
  CHECK(sg.real_blocks[0].sizes == std::vector<int>{1, 1, 2});

  const auto id = jordan_structure(linalg::exact_if_integral(RealMatrix::Identity(4, 4)));
  REQUIRE(id.real_blocks.size() == 1);
  CHECK(id.real_blocks[0].sizes == std::vector<int>{1, 1, 1, 1});
  CHECK(id.dim() == 4);
}

TEST_CASE("jordan structure is similarity invariant") {
  const RealMatrix a = sum({jordan(2, -1), jordan(1, -1), jordan(3, 2)});
  const RealMatrix t = mat(6, 6, {1, 2, 0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0, 1,
                                  1, 0, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1});
  REQUIRE(std::abs(t.determinant()) > 0.5);
  const auto s1 = jordan_structure(Matrix(a));
  const auto s2 = jordan_structure(Matrix(RealMatrix(t.inverse() * a * t)));
  CHECK(s1.matches(s2, 1e-6));
  CHECK(s1.to_string() == s2.to_string());
}

TEST_CASE("normal form of an already normal pair") {
  const auto f = petrov_normal_form(pair_of(jordan(2, 0), ea(2)));
  REQUIRE(f.structure.real_blocks.size() == 1);
  CHECK(f.structure.real_blocks[0].sizes == std::vector<int>{2});
  CHECK(f.signs == std::vector<int>{1});
  CHECK(max_abs_diff(f.a_norm, jordan(2, 0)) < 1e-12);
  CHECK(max_abs_diff(f.g_norm, ea(2)) < 1e-12);
}

TEST_CASE("normal form reads the sign of a null pairing") {
  const auto f = petrov_normal_form(pair_of(jordan(2, 0), -ea(2)));
  CHECK(f.signs == std::vector<int>{-1});
  CHECK(max_abs_diff(f.g_norm, -ea(2)) < 1e-12);
}

TEST_CASE("normal form invariants hold for a transformed pair") {
  const RealMatrix a0 = sum({jordan(2, 1), jordan(1, -1), jordan(1, 2)});
  const RealMatrix g0 = sum({-ea(2), RealMatrix::Identity(1, 1), -RealMatrix::Identity(1, 1)});
  const RealMatrix t = mat(4, 4, {1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 2});
  const auto [a, g] = testsupport::conjugate_pair(a0, g0, t);
  const auto f = petrov_normal_form(pair_of(a, g));
  CHECK(max_abs_diff(f.a_norm, f.transform.inverse() * a * f.transform) < 1e-9);
  CHECK(max_abs_diff(f.g_norm, f.transform.transpose() * g * f.transform) < 1e-9);
  CHECK(max_abs_diff(f.g_norm * f.a_norm, f.a_norm.transpose() * f.g_norm) < 1e-9);
  // Ordering: eigenvalue -1, then 1, then 2.
  REQUIRE(f.structure.real_blocks.size() == 3);
  CHECK(f.structure.real_blocks[0].lambda == doctest::Approx(-1.0));
  CHECK(f.structure.real_blocks[1].lambda == doctest::Approx(1.0));
  CHECK(f.signs == std::vector<int>{1, -1, -1});
}

TEST_CASE("equal block sizes carry descending signs") {
  const RealMatrix a = sum({jordan(2, 0), jordan(2, 0)});
  const RealMatrix g = sum({-ea(2), ea(2)});
  const auto f = petrov_normal_form(pair_of(a, g));
  CHECK(f.signs == std::vector<int>{1, -1});
  CHECK(canonical_signs(f.structure, {-1, 1}) == std::vector<int>{1, -1});
}

TEST_CASE("negative index block counts") {
  CHECK(negative_index(real_structure({{0.0, {3}}}), {1}) == 1);
  CHECK(negative_index(real_structure({{0.0, {3}}}), {-1}) == 2);
  CHECK(negative_index(real_structure({{0.0, {4}}}), {1}) == 2);
  CHECK(negative_index(real_structure({{0.0, {4}}}), {-1}) == 2);
  CHECK(negative_index(JordanStructure{{}, {{0.5, 1.0, {2}}}}, {}) == 2);
}

TEST_CASE("assembled normal pairs") {
  const auto p = assemble_normal_pair(real_structure({{0.0, {2}}}), {1});
  CHECK(p.a().real() == jordan(2, 0));
  CHECK(p.g().real() == ea(2));

  for (int eps : {1, -1}) {
    const auto vi = assemble_normal_pair(real_structure({{0.5, {4}}}), {eps});
    CHECK(max_abs_diff(vi.a().real(), jordan(4, 0.5)) == 0.0);
    CHECK(max_abs_diff(vi.g().real(), eps * ea(4)) == 0.0);
    const auto t = classify_algebraic(petrov_normal_form(vi));
    CHECK(t.label == Label::VI);
    CHECK(t.index == 2);
    CHECK(t.epsilon == eps);
  }

  // Sign order is normalized, not rejected.
  const auto q = assemble_normal_pair(real_structure({{0.0, {1, 1}}}), {-1, 1});
  CHECK(q.g().real()(0, 0) == 1.0);
  CHECK(q.g().real()(1, 1) == -1.0);
}

TEST_CASE("index two complex block pair") {
  const auto p = assemble_normal_pair(JordanStructure{{}, {{0.5, 2.0, {2}}}}, {});
  CHECK(p.dim() == 4);
  CHECK(testsupport::negative_count(p.g().real()) == 2);
  const auto ev = testsupport::sorted_eigenvalues(p.a().real());
  for (const auto& z : ev) {
    CHECK(z.real() == doctest::Approx(0.5));
    CHECK(std::abs(z.imag()) == doctest::Approx(2.0));
  }
  const auto t = classify_algebraic(petrov_normal_form(p));
  CHECK(t.label == Label::I);
  CHECK(t.index == 2);
  CHECK_FALSE(t.epsilon.has_value());
}

TEST_CASE("algebraic labels of index two patterns") {
  // J3 with a Gram block of signature (1, 2) plus spacelike ones.
  {
    const auto p = assemble_normal_pair(real_structure({{0.0, {3}}, {1.0, {1}}}), {-1, 1});
    CHECK(classify_algebraic(petrov_normal_form(p)).label == Label::VII_i);
  }
  {
    const auto p = assemble_normal_pair(real_structure({{-1.0, {2}}, {2.0, {2}}}), {1, 1});
    CHECK(classify_algebraic(petrov_normal_form(p)).label == Label::IX_i);
  }
  {
    const auto p = assemble_normal_pair(real_structure({{-1.0, {2}}, {2.0, {2}}}), {1, -1});
    CHECK(classify_algebraic(petrov_normal_form(p)).label == Label::IX_ii);
  }
  {
    const auto p = assemble_normal_pair(real_structure({{0.0, {2, 2}}}), {1, 1});
    CHECK(classify_algebraic(petrov_normal_form(p)).label == Label::IX_i);
  }
}

TEST_CASE("pairs outside the taxonomy") {
  const RealMatrix e3 = RealMatrix::Identity(3, 3);
  CHECK(kind_of([&] { algebraic(e3, -e3); }) == ErrorKind::out_of_scope);
  CHECK(kind_of([&] { algebraic(RealMatrix::Identity(2, 2), RealMatrix::Identity(2, 2)); }) == ErrorKind::out_of_scope);
  CHECK(kind_of([] { classify_algebraic(petrov_normal_form(assemble_normal_pair(real_structure({{0.0, {5}}}), {1}))); }) ==
        ErrorKind::taxonomy);
  CHECK(kind_of([] {
          classify_algebraic(petrov_normal_form(assemble_normal_pair(real_structure({{0.0, {3}}, {1.0, {3}}}), {1, 1})));
        }) == ErrorKind::taxonomy);
}

TEST_CASE("pair construction contracts") {
  CHECK(kind_of([] { pair_of(jordan(2, 0), RealMatrix::Identity(3, 3)); }) == ErrorKind::shape);
  CHECK(kind_of([] { pair_of(jordan(2, 0), mat(2, 2, {-1, 0, 0, 1})); }) == ErrorKind::contract);
  CHECK(kind_of([] { pair_of(jordan(2, 0), mat(2, 2, {1, 0, 0, 0})); }) == ErrorKind::contract);
}

TEST_CASE("geometric labels merge orientations") {
  const auto ii = classify_geometric(pair_of(jordan(2, 0), -ea(2)));
  CHECK(ii.label == Label::II);
  CHECK(ii.index == 1);
  CHECK(classify_geometric(pair_of(jordan(2, 0), ea(2))).label == Label::II);

  const RealMatrix d = RealVector((RealVector(4) << 1, 2, 3, 4).finished()).asDiagonal();
  const RealMatrix g = RealVector((RealVector(4) << -1, -1, 1, 1).finished()).asDiagonal();
  CHECK(classify_geometric(pair_of(d, g)).label == Label::XI);

  for (const auto& [id, want] : std::vector<std::pair<std::string, Label>>{{"c", Label::IX_ii}, {"d", Label::IX_i}}) {
    const auto ex = catalog::make_example(id);
    const auto data = ex->evaluate(ex->anchor());
    CHECK(classify_geometric(pair_of(data.shape, data.gram)).label == want);
  }
}

TEST_CASE("type tables enumerate every form") {
  CHECK(algebraic_forms(1).size() == 5);
  CHECK(algebraic_forms(2).size() == 19);
  CHECK(geometric_forms(1).size() == 4);
  CHECK(geometric_forms(2).size() == 13);
  CHECK(kind_of([] { algebraic_forms(3); }) == ErrorKind::out_of_scope);
}

TEST_CASE("label text round trip") {
  for (Label l : geometric_forms(2)) CHECK(label_from_string(to_string(l)) == l);
  CHECK(std::string(to_string(Label::VII_ii)) == "VII-ii");
  CHECK(kind_of([] { label_from_string("XII"); }) == ErrorKind::parse);
}

TEST_CASE("frames of the region-dependent example at a quarter turn") {
  const auto ex = catalog::make_example("0-2");
  const auto data = ex->evaluate((RealVector(4) << 0, 0, 0, 1.5707963267948966).finished());
  CHECK(max_abs_diff(data.shape, sum({jordan(2, 0), jordan(2, 0)})) < 1e-12);
  CHECK(max_abs_diff(data.gram, sum({-ea(2), -ea(2)})) < 1e-12);
  const auto f = petrov_normal_form(pair_of(data.shape, data.gram));
  REQUIRE(f.signs.size() == 2);
  CHECK(f.signs[0] == f.signs[1]);
  CHECK(classify_algebraic(f).label == Label::IX_i);
}

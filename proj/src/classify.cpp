#include <algorithm>
#include <sstream>

#include "petrov/normal_form.hpp"

namespace petrov {

namespace {

struct LabelName {
  Label label;
  const char* text;
};

constexpr LabelName kLabelNames[] = {
    {Label::I, "I"},         {Label::II, "II"},         {Label::III, "III"},   {Label::IV, "IV"},
    {Label::V, "V"},         {Label::VI, "VI"},         {Label::VII_i, "VII-i"}, {Label::VII_ii, "VII-ii"},
    {Label::VIII, "VIII"},   {Label::IX_i, "IX-i"},     {Label::IX_ii, "IX-ii"}, {Label::X, "X"},
    {Label::XI, "XI"},
};

// Compact code of one distinguished block, e.g. "R2", "R1-", "C1".
std::string code_of(const DistinguishedBlock& b) {
  std::string s = (b.real ? "R" : "C") + std::to_string(b.size);
  if (b.real && b.size % 2 == 1) s += b.epsilon > 0 ? "+" : "-";
  return s;
}

}  // namespace

const char* to_string(Label label) {
  for (const auto& ln : kLabelNames)
    if (ln.label == label) return ln.text;
  return "?";
}

Label label_from_string(const std::string& text) {
  for (const auto& ln : kLabelNames)
    if (text == ln.text) return ln.label;
  throw Error(ErrorKind::parse, "unknown type label '" + text + "'");
}

std::string AlgebraicType::name() const {
  std::string s = to_string(label);
  if (epsilon) s += *epsilon > 0 ? "(eps=+1)" : "(eps=-1)";
  return s;
}

AlgebraicType classify_algebraic(const PetrovNormalForm& form) {
  const int index = negative_index(form);
  if (index != 1 && index != 2)
    throw Error(ErrorKind::out_of_scope,
                "negative index " + std::to_string(index) + " has no type list (only 1 and 2 are classified)");

  AlgebraicType t;
  t.index = index;
  size_t s = 0;
  for (const auto& group : form.structure.real_blocks)
    for (int m : group.sizes) {
      const int eps = form.signs[s++];
      if (m == 1 && eps > 0) {
        t.others.push_back(group.lambda);
        continue;
      }
      t.blocks.push_back({true, group.lambda, 0.0, m, eps});
    }
  for (const auto& group : form.structure.complex_blocks)
    for (int m : group.sizes) t.blocks.push_back({false, group.alpha, group.beta, m, 1});

  std::vector<std::string> codes;
  for (const auto& b : t.blocks) codes.push_back(code_of(b));
  std::vector<std::string> key = codes;
  std::sort(key.begin(), key.end());
  auto is = [&](std::initializer_list<const char*> want) {
    std::vector<std::string> w(want.begin(), want.end());
    std::sort(w.begin(), w.end());
    return key == w;
  };
  // Sign of the first (or only) block with the given code, in form order.
  auto eps_of = [&](const std::string& code) {
    for (size_t k = 0; k < codes.size(); ++k)
      if (codes[k] == code) return t.blocks[k].epsilon;
    return 1;
  };

  bool ok = true;
  if (index == 1) {
    if (is({"R1-"}))
      t.label = Label::I;
    else if (is({"R2"})) {
      t.label = Label::II;
      t.epsilon = eps_of("R2");
    } else if (is({"R3+"}))
      t.label = Label::III;
    else if (is({"C1"}))
      t.label = Label::IV;
    else
      ok = false;
  } else {
    if (is({"C2"}))
      t.label = Label::I;
    else if (is({"C1", "C1"}))
      t.label = Label::II;
    else if (is({"C1", "R1-"}))
      t.label = Label::III;
    else if (is({"C1", "R2"})) {
      t.label = Label::IV;
      t.epsilon = eps_of("R2");
    } else if (is({"C1", "R3+"}))
      t.label = Label::V;
    else if (is({"R4"})) {
      t.label = Label::VI;
      t.epsilon = eps_of("R4");
    } else if (is({"R3-"}))
      t.label = Label::VII_i;
    else if (is({"R3+", "R1-"}))
      t.label = Label::VII_ii;
    else if (is({"R3+", "R2"})) {
      t.label = Label::VIII;
      t.epsilon = eps_of("R2");
    } else if (is({"R2", "R2"})) {
      int first = 0, second = 0;
      for (const auto& b : t.blocks) (first == 0 ? first : second) = b.epsilon;
      t.label = first == second ? Label::IX_i : Label::IX_ii;
      t.epsilon = first;
    } else if (is({"R2", "R1-"})) {
      t.label = Label::X;
      t.epsilon = eps_of("R2");
    } else if (is({"R1-", "R1-"}))
      t.label = Label::XI;
    else
      ok = false;
  }
  if (!ok) {
    std::ostringstream os;
    os << "block pattern {";
    for (size_t k = 0; k < codes.size(); ++k) os << (k ? ", " : "") << codes[k];
    os << "} of negative index " << index << " is not in the type list";
    throw Error(ErrorKind::taxonomy, os.str());
  }
  return t;
}

GeometricType merge_orientations(const AlgebraicType& plus, const AlgebraicType& minus) {
  if (plus.label != minus.label || plus.index != minus.index)
    throw Error(ErrorKind::internal, std::string("orientation flip changed the type: ") + plus.name() + " vs " +
                                         minus.name());
  GeometricType g;
  g.index = plus.index;
  g.label = plus.label;
  if (!plus.epsilon || *plus.epsilon > 0 || !minus.epsilon || *minus.epsilon < 0) {
    g.orientation = 1;
    g.canonical = plus;
  } else {
    g.orientation = -1;
    g.canonical = minus;
  }
  return g;
}

GeometricType classify_geometric(const SelfAdjointPair& pair, const Tolerance& tol) {
  const AlgebraicType plus = classify_algebraic(petrov_normal_form(pair, tol));
  const RealMatrix minus_a = -pair.a().real();
  const auto flipped = SelfAdjointPair::make(Matrix(minus_a), pair.g(), std::max(tol.algebraic, 1e-9));
  const AlgebraicType minus = classify_algebraic(petrov_normal_form(flipped, tol));
  return merge_orientations(plus, minus);
}

std::vector<std::pair<Label, std::optional<int>>> algebraic_forms(int index) {
  std::vector<std::pair<Label, std::optional<int>>> out;
  auto both = [&](Label l) {
    out.emplace_back(l, 1);
    out.emplace_back(l, -1);
  };
  if (index == 1) {
    out.emplace_back(Label::I, std::nullopt);
    both(Label::II);
    out.emplace_back(Label::III, std::nullopt);
    out.emplace_back(Label::IV, std::nullopt);
  } else if (index == 2) {
    for (Label l : {Label::I, Label::II, Label::III}) out.emplace_back(l, std::nullopt);
    both(Label::IV);
    out.emplace_back(Label::V, std::nullopt);
    both(Label::VI);
    out.emplace_back(Label::VII_i, std::nullopt);
    out.emplace_back(Label::VII_ii, std::nullopt);
    both(Label::VIII);
    both(Label::IX_i);
    both(Label::IX_ii);
    both(Label::X);
    out.emplace_back(Label::XI, std::nullopt);
  } else {
    throw Error(ErrorKind::out_of_scope, "type lists exist for index 1 and 2 only");
  }
  return out;
}

std::vector<Label> geometric_forms(int index) {
  std::vector<Label> out;
  for (const auto& [label, eps] : algebraic_forms(index))
    if (std::find(out.begin(), out.end(), label) == out.end()) out.push_back(label);
  return out;
}

}  // namespace petrov

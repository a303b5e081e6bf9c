// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "petrov/catalog.hpp"
#include "petrov/spaceform.hpp"
#include "petrov/verify.hpp"
#include "support.hpp"

using namespace petrov;
using catalog::make_example;
using testsupport::ea;
using testsupport::jordan;
using testsupport::max_abs_diff;
using testsupport::sum;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (!pass) detail << "; ";
    else detail.str("");
    pass = false;
    detail << why;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string label_text(const catalog::ObservedType& t) {
  std::string s = std::string(to_string(t.geometric.label)) + "/" + std::to_string(t.geometric.index);
  if (t.geometric.index == 1 && t.algebraic.epsilon) s += *t.algebraic.epsilon > 0 ? "+" : "-";
  return s;
}

// ---- 1 ---------------------------------------------------------------------

Outcome taxonomy_goldens() {
  Outcome o;
  const auto t0 = Clock::now();
  int matched = 0, total = 0;
  auto expect = [&](const std::string& where, const catalog::FrameData& d, const std::string& want) {
    ++total;
    std::string got;
    try {
      got = label_text(catalog::observed_type(d));
    } catch (const Error& e) {
      got = std::string("error: ") + e.what();
    }
    if (got == want) ++matched;
    else o.fail(where + " gave " + got + ", want " + want);
  };

  const auto e01 = make_example("0-1");
  const std::vector<std::pair<double, std::string>> table3 = {{0.0, "I/1"}, {kPi / 2, "II/1-"}, {3 * kPi / 2, "II/1+"}};
  for (const auto& [v, want] : table3) expect("0-1 v=" + std::to_string(v), e01->evaluate((RealVector(2) << 0.3, v).finished()), want);

  const auto e02 = make_example("0-2");
  const std::vector<std::pair<double, std::string>> table2 = {{0.0, "X/2"}, {kPi / 2, "IX-i/2"}, {3 * kPi / 2, "IX-ii/2"}};
  for (const auto& [w, want] : table2)
    expect("0-2 w=" + std::to_string(w), e02->evaluate((RealVector(4) << 0.2, -0.1, 0.3, w).finished()), want);

  // Cells of the existence grid: (id, ambient, column).
  const std::vector<std::tuple<std::string, std::string, std::string>> grid = {
      {"a", "R^5_2", "XI"},   {"b", "R^5_2", "X"},    {"c", "R^5_2", "IX-ii"}, {"d", "R^5_2", "IX-i"},
      {"e", "S^5_2", "XI"},   {"f", "S^5_3", "XI"},   {"g", "S^5_3", "X"},     {"h", "S^5_3", "IX-ii"},
      {"i", "S^5_3", "IX-i"}, {"j", "S^5_3", "II"},   {"k", "R^5_2", "VII-ii"}, {"l", "R^5_2", "VII-i"},
      {"m", "R^5_2", "VI"}};
  for (const auto& [id, ambient, column] : grid) {
    const auto ex = make_example(id);
    if (ex->ambient().name() != ambient) o.fail(id + " lives in " + ex->ambient().name() + ", want " + ambient);
    expect(id, ex->evaluate(ex->anchor()), column + "/2");
  }
  const double dt = seconds_since(t0);
  if (dt >= 10.0) o.fail("took " + std::to_string(dt) + " s");
  if (o.pass) o.detail << matched << "/" << total << " labels match (15 examples) in " << dt << " s";
  return o;
}

// ---- 2 ---------------------------------------------------------------------

Outcome shape_goldens() {
  Outcome o;
  double worst = 0.0;
  int compared = 0;
  auto cmp = [&](const std::string& what, const RealMatrix& got, const RealMatrix& want) {
    const double d = max_abs_diff(got, want);
    worst = std::max(worst, d);
    ++compared;
    if (d > 1e-9) o.fail(what + " off by " + std::to_string(d));
  };
  const RealMatrix o2 = RealMatrix::Zero(2, 2);
  const RealMatrix e2 = RealMatrix::Identity(2, 2);
  const std::vector<std::pair<std::string, RealMatrix>> shapes = {
      {"b", sum({jordan(2, 0), o2})},
      {"c", sum({jordan(2, 0), jordan(2, 0)})},
      {"d", sum({jordan(2, 0), jordan(2, 0)})},
      {"g", sum({jordan(2, 1), e2})},
      {"h", sum({jordan(2, -1), jordan(2, -1)})},
      {"i", sum({jordan(2, -1), jordan(2, -1)})},
      {"m", jordan(4, 0)}};
  for (const auto& [id, want] : shapes) {
    const auto ex = make_example(id);
    auto points = ex->sample_domain(10, 1);
    points.insert(points.begin(), ex->anchor());
    for (const auto& q : points) cmp(id + " shape", ex->evaluate(q).shape, want);
  }
  cmp("c gram", make_example("c")->evaluate(make_example("c")->anchor()).gram, sum({ea(2), -ea(2)}));
  cmp("d gram", make_example("d")->evaluate(make_example("d")->anchor()).gram, sum({ea(2), ea(2)}));
  const RealVector e5 = RealVector::Unit(6, 4);
  for (const auto& [id, gram] : std::vector<std::pair<std::string, RealMatrix>>{{"h", sum({ea(2), -ea(2)})},
                                                                               {"i", sum({ea(2), ea(2)})}}) {
    const auto ex = make_example(id);
    const auto d = ex->evaluate(ex->chart_point(e5), catalog::FrameOption::special);
    cmp(id + " special shape", d.shape, sum({jordan(2, -1), jordan(2, -1)}));
    cmp(id + " special gram", d.gram, gram);
  }
  for (double a : {0.5, 2.0}) {
    for (const char* id : {"k", "l"}) {
      const auto ex = make_example(id, a);
      const bool is_l = std::string(id) == "l";
      for (const auto& q : ex->sample_domain(10, 2)) {
        const auto d = ex->evaluate(q);
        cmp(std::string(id) + " shape", d.shape, sum({jordan(3, 0), jordan(1, a)}));
        if (q(2) == 0.0) continue;
      }
      for (double v : {0.0, 0.2}) {
        const auto d = ex->evaluate((RealVector(4) << 0.1, 0.3, 0.0, v).finished());
        const double want = is_l ? 1.0 / (1.0 - a * a * v * v) : -1.0 / (1.0 + a * a * v * v);
        cmp(std::string(id) + " <b4,b4>", d.gram.block(3, 3, 1, 1), RealMatrix::Constant(1, 1, want));
      }
    }
  }
  if (o.pass) o.detail << compared << " matrices, worst entry deviation " << worst;
  return o;
}

// ---- 3 ---------------------------------------------------------------------

Outcome spectra_goldens() {
  Outcome o;
  const double r = 1.0 / std::sqrt(2.0);
  auto check_real = [&](const std::string& id, std::vector<double> want) {
    const auto ex = make_example(id);
    for (const auto& q : ex->sample_domain(20, 3)) {
      const auto ev = testsupport::sorted_eigenvalues(ex->evaluate(q).shape);
      for (size_t k = 0; k < want.size(); ++k)
        if (std::abs(ev[k] - std::complex<double>(want[k], 0)) > 1e-9) {
          o.fail(id + " eigenvalue " + std::to_string(ev[k].real()) + "+" + std::to_string(ev[k].imag()) + "i");
          return;
        }
      const auto spec = spaceform::curvature_spectrum(ex->evaluate(q).shape);
      if (spec.dim() != 4 || !spec.complex.empty()) o.fail(id + " spectrum has the wrong shape");
    }
  };
  check_real("e", {-1, -1, 1, 1});
  check_real("f", {r, r, r, std::sqrt(2.0)});

  const auto j = make_example("j");
  double worst = 0.0;
  for (const auto& q : j->sample_domain(20, 3)) {
    const auto ev = testsupport::sorted_eigenvalues(j->evaluate(q).shape);
    int plus = 0, minus = 0;
    for (const auto& z : ev) {
      worst = std::max(worst, std::abs(std::abs(z) - 1.0));
      if (std::abs(z - std::complex<double>(0, 1)) < 1e-9) ++plus;
      if (std::abs(z - std::complex<double>(0, -1)) < 1e-9) ++minus;
    }
    if (plus != 2 || minus != 2) o.fail("j spectrum is not {i, i, -i, -i}");
    const auto spec = spaceform::curvature_spectrum(j->evaluate(q).shape);
    if (spec.complex.size() != 1 || spec.complex[0].multiplicity != 2) o.fail("j spectrum grouping");
  }
  if (worst > 1e-12) o.fail("|lambda| - 1 reaches " + std::to_string(worst));
  const double rel = spaceform::modulus_relation(1, -1, 0, 1);
  if (rel != 0.0) o.fail("modulus relation gives " + std::to_string(rel));
  if (o.pass) o.detail << "e, f, j spectra match; max ||lambda|-1| = " << worst << "; modulus relation = " << rel;
  return o;
}

// ---- 4 ---------------------------------------------------------------------

Outcome cartan_identity() {
  Outcome o;
  double worst = 0.0;
  for (const char* id : {"e", "f"}) {
    const auto ex = make_example(id);
    const int delta = ex->ambient().curvature * ex->nu();
    for (const auto& q : ex->sample_domain(20, 4)) {
      const auto spec = spaceform::curvature_spectrum(ex->evaluate(q).shape);
      for (size_t i = 0; i < spec.real.size(); ++i) worst = std::max(worst, std::abs(spaceform::cartan_residual(spec, delta, i)));
    }
  }
  if (worst > 1e-12) o.fail("residual reaches " + std::to_string(worst));
  else o.detail << "max |residual| = " << worst << " over e (delta=1) and f (delta=-1)";
  return o;
}

// ---- 5 ---------------------------------------------------------------------

Outcome index_count() {
  Outcome o;
  testsupport::Rng rng(5);
  int agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = testsupport::random_structure(rng, rng.integer(2, 6));
    const auto signs = testsupport::random_signs(rng, s);
    const auto f = petrov_normal_form(assemble_normal_pair(s, signs));
    const int by_blocks = negative_index(f);
    const int by_signature = linalg::signature(Matrix(f.g_norm)).neg;
    const int by_eigensolve = testsupport::negative_count(f.g_norm);
    if (by_blocks == by_signature && by_blocks == by_eigensolve) ++agree;
    else if (o.pass) o.fail("trial " + std::to_string(trial) + ": " + s.to_string());
  }
  if (o.pass) o.detail << agree << "/1000 normal forms agree";
  return o;
}

// ---- 6 ---------------------------------------------------------------------

Outcome round_trip() {
  Outcome o;
  const auto t0 = Clock::now();
  testsupport::Rng rng(6);
  int wrong = 0;
  double worst_cond = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.integer(2, 6);
    const auto s = testsupport::random_structure(rng, n);
    const auto signs = testsupport::random_signs(rng, s);
    RealMatrix a0, g0;
    assemble_normal_matrices(s, signs, a0, g0);
    const RealMatrix t = testsupport::random_transform(rng, n, 100.0);
    worst_cond = std::max(worst_cond, testsupport::condition_number(t));
    const auto [a, g] = testsupport::conjugate_pair(a0, g0, t);
    std::string why;
    try {
      const auto f = petrov_normal_form(SelfAdjointPair::make(Matrix(a), Matrix(g), 1e-7));
      if (!f.structure.matches(s, 1e-6)) why = "structure " + f.structure.to_string();
      else if (f.signs != signs) why = "signs";
    } catch (const Error& e) {
      why = std::string("error: ") + e.what();
    }
    if (!why.empty()) {
      if (wrong < 3) o.fail("trial " + std::to_string(trial) + " " + s.to_string() + ": " + why);
      ++wrong;
    }
  }
  const double dt = seconds_since(t0);
  if (wrong > 0) o.fail(std::to_string(wrong) + " misclassified");
  if (dt >= 60.0) o.fail("took " + std::to_string(dt) + " s");
  if (o.pass) o.detail << "1000/1000 recovered, max cond(T) = " << worst_cond << ", " << dt << " s";
  return o;
}

// ---- 7 ---------------------------------------------------------------------

Outcome fd_verification() {
  Outcome o;
  verify::RunOptions opt;
  opt.samples = 20;
  const auto r = verify::run(opt);
  int failed = 0;
  double worst_gauss = 0, worst_codazzi = 0, worst_fd = 0;
  int counted = 0, iso = 0, iso_failed = 0;
  for (const auto& rep : r.reports) {
    if (rep.check.rfind("iso_", 0) == 0) {
      ++iso;
      iso_failed += rep.pass ? 0 : 1;
      continue;
    }
    ++counted;
    if (!rep.pass) {
      if (failed < 3) o.fail(rep.example + " " + rep.check + " sample " + std::to_string(rep.sample) + ": " +
                             std::to_string(rep.residual) + (rep.note.empty() ? "" : " (" + rep.note + ")"));
      ++failed;
    }
    if (rep.check == "gauss") worst_gauss = std::max(worst_gauss, rep.residual);
    if (rep.check == "codazzi") worst_codazzi = std::max(worst_codazzi, rep.residual);
    if (rep.check == "shape_fd") worst_fd = std::max(worst_fd, rep.residual);
  }
  if (o.pass)
    o.detail << counted << " checks pass; worst shape_fd " << worst_fd << ", gauss " << worst_gauss << ", codazzi "
             << worst_codazzi << " (level-set function checks: " << iso - iso_failed << "/" << iso << " pass)";
  return o;
}

// ---- 8 ---------------------------------------------------------------------

Outcome isoparametricity() {
  Outcome o;
  double worst = 0.0;
  int regions = 0;
  for (const auto& id : catalog::example_ids()) {
    const auto ex = make_example(id);
    const int nr = ex->region_count();
    std::vector<std::vector<linalg::EigenCluster>> ref(static_cast<size_t>(nr));
    std::vector<int> seen(static_cast<size_t>(nr), 0);
    for (const auto& q : ex->sample_domain(100 * nr, 8)) {
      const auto r = static_cast<size_t>(ex->region_of(q));
      const auto c = linalg::eigen_clusters(Matrix(ex->evaluate(q).shape), 1e-6);
      if (seen[r]++ == 0) {
        ref[r] = c;
        continue;
      }
      if (c.size() != ref[r].size()) {
        o.fail(id + " region " + std::to_string(r) + " changes its cluster count");
        continue;
      }
      for (size_t k = 0; k < c.size(); ++k) {
        worst = std::max(worst, std::abs(c[k].value - ref[r][k].value));
        if (c[k].multiplicity != ref[r][k].multiplicity) o.fail(id + " multiplicity changes");
      }
    }
    for (int s : seen)
      if (s < 100) o.fail(id + " has a region with only " + std::to_string(s) + " samples");
    regions += nr;
  }
  if (worst > 1e-8) o.fail("cluster spread reaches " + std::to_string(worst));
  if (o.pass) o.detail << regions << " regions x 100 samples, max spread " << worst;
  return o;
}

// ---- 9 ---------------------------------------------------------------------

Outcome negative_controls() {
  Outcome o;
  int tried = 0, flipped = 0, by_label = 0, by_fd = 0, by_cartan = 0;
  for (const char* id : {"b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m"}) {
    const auto ex = make_example(id);
    const RealVector q = ex->sample_domain(1, 9).front();
    const auto d = ex->evaluate(q);
    const auto base = catalog::observed_type(d);
    const int n = static_cast<int>(d.shape.rows());
    const int delta = ex->ambient().curvature * ex->nu();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        RealMatrix p = RealMatrix::Zero(n, n);
        p(i, j) = 1e-2;
        ++tried;
        bool hit = false;
        // Criterion 1: the label no longer reproduces.
        try {
          catalog::FrameData bent = d;
          bent.shape += p;
          if (label_text(catalog::observed_type(bent)) != label_text(base)) hit = true;
        } catch (const Error&) {
          hit = true;
        }
        by_label += hit ? 1 : 0;
        // Criterion 4: Cartan's identity on the two real-spectrum sphere examples.
        if (std::string(id) == "e" || std::string(id) == "f") {
          try {
            const auto spec = spaceform::curvature_spectrum(d.shape + p);
            double res = 0;
            for (size_t k = 0; k < spec.real.size(); ++k) res = std::max(res, std::abs(spaceform::cartan_residual(spec, delta, k)));
            if (res > 1e-12 || !spec.complex.empty()) {
              hit = true;
              ++by_cartan;
            }
          } catch (const Error&) {
            hit = true;
            ++by_cartan;
          }
        }
        // Criterion 7: the finite-difference checks.
        const bool fd_fail = !verify::shape_fd_check(*ex, q, 1e-4, {}, p).pass ||
                             !verify::gauss_residual(*ex, q, 1e-3, {}, p).pass;
        by_fd += fd_fail ? 1 : 0;
        hit = hit || fd_fail;
        if (hit) ++flipped;
        else o.fail(std::string(id) + " entry (" + std::to_string(i) + "," + std::to_string(j) + ") went unnoticed");
      }
  }
  if (o.pass)
    o.detail << flipped << "/" << tried << " perturbations caught (label " << by_label << ", cartan " << by_cartan
             << ", finite differences " << by_fd << ")";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"taxonomy goldens", taxonomy_goldens},
      {"shape and Gram goldens", shape_goldens},
      {"principal curvature spectra", spectra_goldens},
      {"Cartan identity", cartan_identity},
      {"negative index equals signature", index_count},
      {"normal form round trip", round_trip},
      {"finite-difference verification", fd_verification},
      {"isoparametricity", isoparametricity},
      {"negative controls", negative_controls},
  };
  int failed = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.fail(std::string("uncaught: ") + e.what());
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %zu %-34s %s  (%.2f s) %s\n", k + 1, criteria[k].first.c_str(), o.pass ? "PASS" : "FAIL",
                seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}

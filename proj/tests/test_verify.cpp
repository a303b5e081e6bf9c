#include "doctest.h"

#include "petrov/catalog.hpp"
#include "petrov/report.hpp"
#include "petrov/verify.hpp"
#include "support.hpp"

using namespace petrov;
using namespace petrov::verify;
using catalog::make_example;

namespace {

constexpr double kPi = 3.14159265358979323846;

RealMatrix single_entry(int n, int i, int j, double value) {
  RealMatrix p = RealMatrix::Zero(n, n);
  p(i, j) = value;
  return p;
}

}  // namespace

TEST_CASE("shape finite differences on polynomial and trigonometric data") {
  const auto m = make_example("m");
  const RealVector qm = (RealVector(4) << 0.3, -0.4, 0.2, 0.1).finished();
  CHECK(shape_fd_check(*m, qm, 1e-4).residual <= 1e-5);
  const auto e01 = make_example("0-1");
  CHECK(shape_fd_check(*e01, (RealVector(2) << 0.2, kPi / 4).finished(), 1e-4).residual <= 1e-5);
  const auto b = make_example("b");
  const auto r = shape_fd_check(*b, b->anchor(), 1e-4);
  CHECK(r.pass);
  CHECK(r.residual <= r.threshold);
  CHECK(r.h == 1e-4);
}

TEST_CASE("gauss residual converges at second order") {
  const auto k = make_example("k");
  const RealVector q = (RealVector(4) << 0.3, -0.4, 0.2, 0.1).finished();
  const double r1 = gauss_residual_value(*k, q, 1e-3);
  const double r2 = gauss_residual_value(*k, q, 5e-4);
  CHECK(r1 <= 1e-3);
  CHECK(r1 / r2 >= 3.0);
  CHECK(r1 / r2 <= 5.0);

  const auto rep = gauss_residual(*k, q, 1e-3);
  CHECK(rep.pass);
  REQUIRE(rep.ratio.has_value());
  CHECK(*rep.ratio >= 3.0);
}

TEST_CASE("gauss residual on the split-spectrum sphere example") {
  const auto e = make_example("e");
  CHECK(gauss_residual(*e, e->anchor(), 1e-3).residual <= 1e-4);
}

TEST_CASE("codazzi residual") {
  const auto k = make_example("k");
  CHECK(codazzi_residual(*k, (RealVector(4) << 0.1, 0.2, -0.3, 0.1).finished(), 1e-3).residual <= 1e-4);
  const auto e02 = make_example("0-2");
  CHECK(codazzi_residual(*e02, (RealVector(4) << 0.1, 0.2, -0.3, kPi / 4).finished(), 1e-3).residual <= 1e-4);
  // Totally umbilic sphere with A = I: both sides of the identity vanish.
  const auto a = make_example("a");
  CHECK(codazzi_residual_value(*a, a->anchor(), 1e-3) <= 1e-6);
}

TEST_CASE("curvature data symmetries") {
  for (const char* id : {"m", "f", "0-2"}) {
    const auto ex = make_example(id);
    const auto q = ex->sample_domain(1, 3).front();
    const auto c = curvature_data(*ex, q, 1e-3);
    const int n = c.dim;
    CHECK((c.metric - c.metric.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    for (int l = 0; l < n; ++l) CHECK((c.christoffel[l] - c.christoffel[l].transpose()).cwiseAbs().maxCoeff() < 1e-9);
    double worst = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            worst = std::max(worst, std::abs(c.r(i, j, k, l) + c.r(j, i, k, l)));
            worst = std::max(worst, std::abs(c.r(i, j, k, l) + c.r(i, j, l, k)));
          }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("perturbed shape matrices fail the checks") {
  for (const char* id : {"b", "g", "m", "0-1"}) {
    const auto ex = make_example(id);
    const auto q = ex->sample_domain(1, 4).front();
    const int n = ex->param_dim();
    const RealMatrix p = single_entry(n, 0, n - 1, 1e-2);
    CHECK_FALSE(shape_fd_check(*ex, q, 1e-4, {}, p).pass);
    CHECK(gauss_residual(*ex, q, 1e-3).pass);
    CHECK_FALSE(gauss_residual(*ex, q, 1e-3, {}, single_entry(n, 0, 0, 1e-2)).pass);
  }
}

TEST_CASE("isoparametric function checks") {
  const auto b = make_example("b");
  const auto& f = *b->quadric();
  const auto pts = sample_level_points(f, {f.level, f.level + 0.5}, 50, 1);
  CHECK(pts.size() == 100);
  const auto r = isoparametric_function_check(f, pts, {}, "b");
  CHECK(r.gradient.residual <= 1e-8);
  CHECK(r.pass());

  // <x,x> on flat space: the gradient length is 4c exactly.
  const auto norm = spaceform::QuadricFunction::make(spaceform::QuadricVariant::flat, 1, RealMatrix::Identity(3, 3),
                                                     RealVector::Zero(3), 1.0);
  const auto rn = isoparametric_function_check(norm, sample_level_points(norm, {1.0, 2.0}, 20, 2));
  CHECK(rn.gradient.residual < 1e-10);
  CHECK(rn.pass());

  // Not admissible: the gradient length varies along a level.
  const auto bad = spaceform::QuadricFunction::make(spaceform::QuadricVariant::flat, 0,
                                                    RealVector((RealVector(3) << 1, 2, 3).finished()).asDiagonal(),
                                                    RealVector::Zero(3), 1.0);
  CHECK_FALSE(spaceform::admissibility_check(bad).admissible);
  CHECK_FALSE(isoparametric_function_check(bad, sample_level_points(bad, {1.0}, 20, 3)).pass());
}

TEST_CASE("harness run is deterministic and ordered") {
  RunOptions opt;
  opt.ids = {"m", "0-1"};
  opt.samples = 3;
  opt.seed = 5;
  const auto a = run(opt);
  opt.threads = 1;
  const auto b = run(opt);
  REQUIRE(a.reports.size() == b.reports.size());
  CHECK(a.reports.size() == 18);
  for (size_t k = 0; k < a.reports.size(); ++k) {
    CHECK(a.reports[k].example == b.reports[k].example);
    CHECK(a.reports[k].check == b.reports[k].check);
    CHECK(a.reports[k].residual == b.reports[k].residual);
  }
  CHECK(a.reports.front().example == "m");
  CHECK(a.all_pass);
}

TEST_CASE("harness thresholds are overridable") {
  RunOptions opt;
  opt.ids = {"k"};
  opt.samples = 2;
  opt.thresholds.gauss = 1e-12;
  const auto r = run(opt);
  CHECK_FALSE(r.all_pass);
}

TEST_CASE("table reports") {
  const auto t3 = report::table_report(3);
  CHECK(t3.rows.size() == 3);
  CHECK(t3.pass());
  CHECK(t3.rows[1].stated[0] == "type II of index 1 (ε=-1)");
  const auto t2 = report::table_report(2);
  CHECK(t2.pass());
  CHECK(t2.rows[0].observed[0] == "type X of index 2");
  const auto t1 = report::table_report(1, 2);
  CHECK(t1.pass());
  REQUIRE(t1.rows.size() == 3);
  CHECK(t1.rows[0].observed[4] == "m");
  CHECK(t1.rows[1].observed[2] == "open");
  CHECK(t1.rows[0].observed[1] == "△");
  const auto md = report::to_markdown(t1);
  CHECK(md.find("| S^5_3 (δ=-1) | open | j |") != std::string::npos);
  CHECK_THROWS_AS(report::table_report(4), Error);
}

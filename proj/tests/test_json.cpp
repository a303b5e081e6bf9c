#include "doctest.h"

#include "petrov/json_io.hpp"
#include "support.hpp"

using namespace petrov;
using namespace petrov::io;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::internal;
}

const char* kTypeVI = R"({
  "A": {"rows": 4, "cols": 4, "data": ["0","1","0","0", "0","0","1","0", "0","0","0","1", "0","0","0","0"]},
  "G": {"rows": 4, "cols": 4, "data": [["0","0","0","-1"], ["0","0","-1","0"], ["0","-1","0","0"], ["-1","0","0","0"]]}
})";

}  // namespace

TEST_CASE("matrix encodings") {
  const auto exact = matrix_from_json(parse(R"({"rows":2,"cols":2,"data":["1/2","-3","0.25","1e2"]})"));
  REQUIRE(exact.mode() == linalg::NumericMode::exact);
  CHECK(exact.at(0, 0).to_string() == "1/2");
  CHECK(exact.at(1, 0).to_string() == "1/4");
  CHECK(exact.at(1, 1).to_string() == "100");

  const auto mixed = matrix_from_json(parse(R"({"rows":1,"cols":2,"data":["1/2", 3]})"));
  CHECK(mixed.mode() == linalg::NumericMode::floating);
  CHECK(mixed.real()(0, 0) == 0.5);

  const auto back = to_json(exact);
  CHECK(back.dump() == R"({"rows":2,"cols":2,"data":["1/2","-3","1/4","100"]})");
  CHECK(matrix_from_json(to_json(testsupport::jordan(3, 2.5))).real() == testsupport::jordan(3, 2.5));
}

TEST_CASE("malformed documents are parse errors") {
  CHECK(kind_of([] { parse("{"); }) == ErrorKind::parse);
  CHECK(kind_of([] { matrix_from_json(parse(R"({"rows":2,"cols":2,"data":[1,2,3]})")); }) == ErrorKind::parse);
  CHECK(kind_of([] { matrix_from_json(parse(R"({"rows":1,"cols":1,"data":["1/0"]})")); }) == ErrorKind::parse);
  CHECK(kind_of([] { matrix_from_json(parse(R"({"rows":1,"cols":1,"data":["x"]})")); }) == ErrorKind::parse);
  CHECK(kind_of([] { matrix_from_json(parse(R"({"cols":1,"data":[1]})")); }) == ErrorKind::parse);
  CHECK(kind_of([] { classify(parse(R"({"A":{"rows":1,"cols":1,"data":[1]}})"), {}); }) == ErrorKind::parse);
}

TEST_CASE("classify documents") {
  const auto out = classify(parse(kTypeVI), {});
  CHECK(out["schema"] == "1");
  CHECK(out["mode"] == "exact");
  CHECK(out["geometric"]["label"] == "VI");
  CHECK(out["algebraic"]["label"] == "VI");
  CHECK(out["algebraic"]["epsilon"] == -1);
  CHECK(out["negative_index"] == 2);
  CHECK(out["signs"] == Json::array({-1}));
  CHECK(out["transform"]["rows"] == 4);
  CHECK(out.begin().key() == "schema");

  auto with_tol = parse(kTypeVI);
  with_tol["tol"] = 1e-7;
  CHECK(classify(with_tol, {})["tolerance"]["algebraic"] == 1e-7);
}

TEST_CASE("flipping the metric reads a hyperbolic pair in its sphere image") {
  // Index 2 after the flip: G = -diag(1,1,-1,-1).
  const char* text = R"({"A": {"rows":4,"cols":4,"data":[1,0,0,0, 0,2,0,0, 0,0,3,0, 0,0,0,4]},
                         "G": {"rows":4,"cols":4,"data":[1,0,0,0, 0,1,0,0, 0,0,-1,0, 0,0,0,-1]}})";
  const auto out = classify(parse(text), {}, true);
  CHECK(out["metric_flipped"] == true);
  CHECK(out["geometric"]["label"] == "XI");
}

TEST_CASE("catalog documents") {
  const auto list = catalog_list();
  REQUIRE(list["examples"].size() == 15);
  CHECK(list["examples"][0]["id"] == "0-1");
  CHECK(list["examples"][0]["expected"].size() == 3);

  const auto eval = catalog_eval("0-1", (RealVector(2) << 0, 1.5707963267948966).finished(),
                                 catalog::FrameOption::standard, std::nullopt, {});
  CHECK(eval["observed"]["algebraic"]["label"] == "II");
  CHECK(eval["observed"]["algebraic"]["epsilon"] == -1);
  const auto shape = eval["shape"]["data"];
  CHECK(std::abs(shape[0].get<double>()) < 1e-12);
  CHECK(shape[1].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("quadric documents") {
  const char* sphere = R"({"variant":"sphere","index":0,"P":{"rows":3,"cols":3,"data":[1,0,0,0,1,0,0,0,-1]},"c":0.2})";
  const auto out = quadric_check(parse(sphere), 20, 4, {});
  CHECK(out["admissible"] == true);
  CHECK(out["pass"] == true);
  CHECK(kind_of([] { quadric_from_json(parse(R"({"variant":"cone","index":0,"P":{"rows":1,"cols":1,"data":[1]},"c":1})")); }) ==
        ErrorKind::parse);
  CHECK(kind_of([] { quadric_from_json(parse(R"({"variant":"flat","P":{"rows":1,"cols":1,"data":[1]},"c":1})")); }) ==
        ErrorKind::parse);
}

TEST_CASE("run documents echo options and thresholds") {
  verify::RunOptions opt;
  opt.ids = {"m"};
  opt.samples = 1;
  const auto out = to_json(verify::run(opt), opt);
  CHECK(out["options"]["ids"] == Json::array({"m"}));
  CHECK(out["thresholds"]["gauss"] == 1e-3);
  CHECK(out["all_pass"] == true);
  CHECK(out["reports"].size() == 3);
}

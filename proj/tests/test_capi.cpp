// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "petrov/petrov.h"

namespace {

struct Context {
  petrov_context* ctx = nullptr;
  Context() { REQUIRE(petrov_context_create(&ctx) == PETROV_OK); }
  ~Context() { petrov_context_destroy(ctx); }
};

std::string take(petrov_string* s) {
  std::string text(petrov_string_data(s), petrov_string_size(s));
  petrov_string_destroy(s);
  return text;
}

const char* kPair = R"({"A":{"rows":2,"cols":2,"data":[0,1,0,0]},"G":{"rows":2,"cols":2,"data":[0,-1,-1,0]}})";

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(petrov_version()) == "1.0.0");
  CHECK(std::string(petrov_status_name(PETROV_ERR_PARSE)) == "parse");
  CHECK(std::string(petrov_status_name(PETROV_ERR_INVALID_ARGUMENT)) == "invalid_argument");
}

TEST_CASE("context tolerances") {
  Context c;
  double a = 0, r = 0;
  REQUIRE(petrov_context_get_tolerance(c.ctx, &a, &r) == PETROV_OK);
  CHECK(a == 1e-9);
  CHECK(r == 1e-6);
  CHECK(petrov_context_set_tolerance(c.ctx, -1, 1e-6) == PETROV_ERR_CONTRACT);
  CHECK(std::string(petrov_last_error(c.ctx)).find("positive") != std::string::npos);
  CHECK(petrov_context_set_tolerance(c.ctx, 1e-8, 1e-5) == PETROV_OK);
  CHECK(std::string(petrov_last_error(c.ctx)).empty());
  petrov_context_get_tolerance(c.ctx, &a, &r);
  CHECK(a == 1e-8);
  CHECK(r == 1e-5);
}

TEST_CASE("null arguments") {
  Context c;
  petrov_string* out = nullptr;
  CHECK(petrov_context_create(nullptr) == PETROV_ERR_INVALID_ARGUMENT);
  CHECK(petrov_classify_json(nullptr, kPair, 0, &out) == PETROV_ERR_INVALID_ARGUMENT);
  CHECK(petrov_classify_json(c.ctx, nullptr, 0, &out) == PETROV_ERR_INVALID_ARGUMENT);
  CHECK(petrov_classify_json(c.ctx, kPair, 8, &out) == PETROV_ERR_INVALID_ARGUMENT);
  CHECK(petrov_pair_dim(nullptr) == 0);
  CHECK(petrov_classification_index(nullptr) == 0);
  petrov_verify_options raw{};
  CHECK(petrov_verify_run(c.ctx, &raw, PETROV_FORMAT_JSON, &out, nullptr) == PETROV_ERR_INVALID_ARGUMENT);
  petrov_string_destroy(nullptr);
  petrov_pair_destroy(nullptr);
  petrov_classification_destroy(nullptr);
}

TEST_CASE("classify through JSON") {
  Context c;
  petrov_string* out = nullptr;
  REQUIRE(petrov_classify_json(c.ctx, kPair, 0, &out) == PETROV_OK);
  const std::string text = take(out);
  CHECK(text.find("\"label\": \"II\"") != std::string::npos);
  CHECK(text.find("\"schema\": \"1\"") != std::string::npos);
  CHECK(text.find("\"tolerance\"") != std::string::npos);

  CHECK(petrov_classify_json(c.ctx, "{", 0, &out) == PETROV_ERR_PARSE);
  CHECK(std::string(petrov_last_error(c.ctx)).find("JSON") != std::string::npos);
  const char* skew = R"({"A":{"rows":2,"cols":2,"data":[0,1,0,0]},"G":{"rows":2,"cols":2,"data":[-1,0,0,1]}})";
  CHECK(petrov_classify_json(c.ctx, skew, 0, &out) == PETROV_ERR_CONTRACT);
}

TEST_CASE("typed pair classification") {
  Context c;
  const double a[16] = {0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0};
  const double g[16] = {0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0};
  petrov_pair* pair = nullptr;
  REQUIRE(petrov_pair_create(c.ctx, 4, a, g, &pair) == PETROV_OK);
  CHECK(petrov_pair_dim(pair) == 4);
  petrov_classification* cl = nullptr;
  REQUIRE(petrov_pair_classify(c.ctx, pair, &cl) == PETROV_OK);
  CHECK(std::string(petrov_classification_label(cl)) == "VI");
  CHECK(std::string(petrov_classification_geometric_label(cl)) == "VI");
  CHECK(petrov_classification_index(cl) == 2);
  CHECK(petrov_classification_negative_index(cl) == 2);
  int eps = 0;
  CHECK(petrov_classification_epsilon(cl, &eps) == 1);
  CHECK(eps == 1);
  double t[16];
  CHECK(petrov_classification_transform(cl, t, 4) == PETROV_ERR_SHAPE);
  REQUIRE(petrov_classification_transform(cl, t, 16) == PETROV_OK);
  CHECK(std::abs(t[0] - 1.0) < 1e-12);
  petrov_classification_destroy(cl);
  petrov_pair_destroy(pair);

  const double bad_g[4] = {1, 0, 0, 0};
  const double j2[4] = {0, 1, 0, 0};
  CHECK(petrov_pair_create(c.ctx, 2, j2, bad_g, &pair) == PETROV_ERR_CONTRACT);

  const double e3[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  const double m3[9] = {-1, 0, 0, 0, -1, 0, 0, 0, -1};
  REQUIRE(petrov_pair_create(c.ctx, 3, e3, m3, &pair) == PETROV_OK);
  CHECK(petrov_pair_classify(c.ctx, pair, &cl) == PETROV_ERR_OUT_OF_SCOPE);
  petrov_pair_destroy(pair);
}

TEST_CASE("catalog through the C interface") {
  Context c;
  petrov_string* out = nullptr;
  REQUIRE(petrov_catalog_list_json(c.ctx, &out) == PETROV_OK);
  CHECK(take(out).find("\"id\": \"m\"") != std::string::npos);

  const double q[2] = {0.0, 1.5707963267948966};
  REQUIRE(petrov_catalog_eval_json(c.ctx, "0-1", q, 2, nullptr, std::nan(""), &out) == PETROV_OK);
  CHECK(take(out).find("\"nu\": 1") != std::string::npos);
  CHECK(petrov_catalog_eval_json(c.ctx, "zz", q, 2, nullptr, std::nan(""), &out) == PETROV_ERR_CONTRACT);
  CHECK(petrov_catalog_eval_json(c.ctx, "0-1", q, 1, nullptr, std::nan(""), &out) == PETROV_ERR_SHAPE);
  const double k[4] = {0, 0, -1.4142135623730951, 0};
  CHECK(petrov_catalog_eval_json(c.ctx, "k", k, 4, "standard", 2.0, &out) == PETROV_ERR_DOMAIN);
}

TEST_CASE("verification and reports through the C interface") {
  Context c;
  petrov_verify_options opt;
  petrov_verify_options_init(&opt);
  opt.ids = "m";
  opt.samples = 2;
  petrov_string* out = nullptr;
  int pass = 0;
  REQUIRE(petrov_verify_run(c.ctx, &opt, PETROV_FORMAT_MARKDOWN, &out, &pass) == PETROV_OK);
  CHECK(pass == 1);
  CHECK(take(out).find("| m | gauss |") != std::string::npos);

  opt.gauss_threshold = 1e-15;
  opt.ids = "k";
  REQUIRE(petrov_verify_run(c.ctx, &opt, PETROV_FORMAT_JSON, &out, &pass) == PETROV_OK);
  CHECK(pass == 0);
  take(out);

  REQUIRE(petrov_report_table(c.ctx, 3, 2, 0, PETROV_FORMAT_JSON, &out, &pass) == PETROV_OK);
  CHECK(pass == 1);
  take(out);
  CHECK(petrov_report_table(c.ctx, 5, 2, 0, PETROV_FORMAT_JSON, &out, &pass) == PETROV_ERR_CONTRACT);

  const char* quad = R"({"variant":"flat","index":2,"P":{"rows":5,"cols":5,"data":[-1,0,0,0,0,0,-1,0,0,0,0,0,-1,0,0,0,0,0,-1,0,0,0,0,0,-1]},"c":-1})";
  REQUIRE(petrov_quadric_check_json(c.ctx, quad, 10, 0, &out, &pass) == PETROV_OK);
  CHECK(pass == 1);
  CHECK(take(out).find("\"admissible\": true") != std::string::npos);
}

TEST_CASE("separate contexts are independent") {
  Context a, b;
  petrov_string* out = nullptr;
  CHECK(petrov_classify_json(a.ctx, "[", 0, &out) == PETROV_ERR_PARSE);
  CHECK(std::string(petrov_last_error(b.ctx)).empty());
}

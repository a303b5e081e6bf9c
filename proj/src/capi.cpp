#include "petrov/petrov.h"

#include <cmath>
#include <new>
#include <sstream>
#include <string>

#include "petrov/json_io.hpp"

struct petrov_context {
  petrov::linalg::Tolerance tol;
  std::string error;
};

struct petrov_string {
  std::string text;
};

struct petrov_pair {
  petrov::SelfAdjointPair pair;
};

struct petrov_classification {
  petrov::AlgebraicType algebraic;
  petrov::GeometricType geometric;
  int negative_index = 0;
  petrov::RealMatrix transform;
  std::string label;
  std::string geometric_label;
};

namespace {

using petrov::Error;
using petrov::ErrorKind;
using petrov::io::Json;

petrov_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::shape: return PETROV_ERR_SHAPE;
    case ErrorKind::contract: return PETROV_ERR_CONTRACT;
    case ErrorKind::conditioning: return PETROV_ERR_CONDITIONING;
    case ErrorKind::cluster_ambiguity: return PETROV_ERR_CLUSTER_AMBIGUITY;
    case ErrorKind::tolerance_failure: return PETROV_ERR_TOLERANCE;
    case ErrorKind::out_of_scope: return PETROV_ERR_OUT_OF_SCOPE;
    case ErrorKind::taxonomy: return PETROV_ERR_TAXONOMY;
    case ErrorKind::domain: return PETROV_ERR_DOMAIN;
    case ErrorKind::degenerate_level: return PETROV_ERR_DEGENERATE_LEVEL;
    case ErrorKind::parse: return PETROV_ERR_PARSE;
    case ErrorKind::internal: return PETROV_ERR_INTERNAL;
  }
  return PETROV_ERR_INTERNAL;
}

// Runs `body` with every exception turned into a status plus a message on ctx.
template <class F>
petrov_status guarded(petrov_context* ctx, F&& body) {
  if (!ctx) return PETROV_ERR_INVALID_ARGUMENT;
  ctx->error.clear();
  try {
    body();
    return PETROV_OK;
  } catch (const Error& e) {
    ctx->error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    ctx->error = "out of memory";
  } catch (const std::exception& e) {
    ctx->error = e.what();
  }
  return PETROV_ERR_INTERNAL;
}

petrov_status invalid(petrov_context* ctx, const char* what) {
  if (ctx) ctx->error = what;
  return PETROV_ERR_INVALID_ARGUMENT;
}

petrov_string* make_string(std::string text) { return new petrov_string{std::move(text)}; }

// Puts "schema" and "tolerance" first so every document echoes the context.
std::string stamp(const Json& doc, const petrov::linalg::Tolerance& tol) {
  Json out{{"schema", petrov::io::kSchema}, {"tolerance", petrov::io::to_json(tol)}};
  for (const auto& [key, value] : doc.items())
    if (key != "schema" && key != "tolerance") out[key] = value;
  return out.dump(2) + "\n";
}

std::string tolerance_line(const petrov::linalg::Tolerance& tol) {
  std::ostringstream os;
  os << "_tolerance: algebraic " << tol.algebraic << ", rank " << tol.rank << "_\n\n";
  return os.str();
}

std::vector<std::string> split_ids(const char* ids) {
  std::vector<std::string> out;
  if (!ids) return out;
  std::stringstream ss(ids);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

extern "C" {

const char* petrov_version(void) { return "1.0.0"; }

const char* petrov_status_name(petrov_status status) {
  switch (status) {
    case PETROV_OK: return "ok";
    case PETROV_ERR_SHAPE: return "shape";
    case PETROV_ERR_CONTRACT: return "contract";
    case PETROV_ERR_CONDITIONING: return "conditioning";
    case PETROV_ERR_CLUSTER_AMBIGUITY: return "cluster_ambiguity";
    case PETROV_ERR_TOLERANCE: return "tolerance_failure";
    case PETROV_ERR_OUT_OF_SCOPE: return "out_of_scope";
    case PETROV_ERR_TAXONOMY: return "taxonomy";
    case PETROV_ERR_DOMAIN: return "domain";
    case PETROV_ERR_DEGENERATE_LEVEL: return "degenerate_level";
    case PETROV_ERR_PARSE: return "parse";
    case PETROV_ERR_INTERNAL: return "internal";
    case PETROV_ERR_INVALID_ARGUMENT: return "invalid_argument";
  }
  return "unknown";
}

petrov_status petrov_context_create(petrov_context** out) {
  if (!out) return PETROV_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) petrov_context{};
  return *out ? PETROV_OK : PETROV_ERR_INTERNAL;
}

void petrov_context_destroy(petrov_context* ctx) { delete ctx; }

petrov_status petrov_context_set_tolerance(petrov_context* ctx, double algebraic, double rank) {
  if (!ctx) return PETROV_ERR_INVALID_ARGUMENT;
  if (!(algebraic > 0) || !(rank > 0) || !std::isfinite(algebraic) || !std::isfinite(rank)) {
    ctx->error = "tolerances must be positive and finite";
    return PETROV_ERR_CONTRACT;
  }
  ctx->tol = {algebraic, rank};
  ctx->error.clear();
  return PETROV_OK;
}

petrov_status petrov_context_get_tolerance(const petrov_context* ctx, double* algebraic, double* rank) {
  if (!ctx) return PETROV_ERR_INVALID_ARGUMENT;
  if (algebraic) *algebraic = ctx->tol.algebraic;
  if (rank) *rank = ctx->tol.rank;
  return PETROV_OK;
}

const char* petrov_last_error(const petrov_context* ctx) { return ctx ? ctx->error.c_str() : "null context"; }

const char* petrov_string_data(const petrov_string* s) { return s ? s->text.c_str() : ""; }
size_t petrov_string_size(const petrov_string* s) { return s ? s->text.size() : 0; }
void petrov_string_destroy(petrov_string* s) { delete s; }

petrov_status petrov_classify_json(petrov_context* ctx, const char* input, unsigned flags, petrov_string** out) {
  if (!input || !out) return invalid(ctx, "null argument");
  if (flags & ~static_cast<unsigned>(PETROV_CLASSIFY_FLIP_METRIC)) return invalid(ctx, "unknown classify flag");
  return guarded(ctx, [&] {
    const Json doc =
        petrov::io::classify(petrov::io::parse(input), ctx->tol, (flags & PETROV_CLASSIFY_FLIP_METRIC) != 0);
    // classify already echoes the effective tolerance (the input may override it).
    *out = make_string(doc.dump(2) + "\n");
  });
}

petrov_status petrov_catalog_list_json(petrov_context* ctx, petrov_string** out) {
  if (!out) return invalid(ctx, "null argument");
  return guarded(ctx, [&] { *out = make_string(stamp(petrov::io::catalog_list(), ctx->tol)); });
}

petrov_status petrov_catalog_eval_json(petrov_context* ctx, const char* id, const double* point, size_t point_len,
                                       const char* frame, double parameter, petrov_string** out) {
  if (!id || !out || (!point && point_len > 0)) return invalid(ctx, "null argument");
  return guarded(ctx, [&] {
    const petrov::RealVector q = Eigen::Map<const petrov::RealVector>(point, static_cast<Eigen::Index>(point_len));
    const auto option = frame ? petrov::catalog::frame_option_from_string(frame) : petrov::catalog::FrameOption::standard;
    const auto param = std::isnan(parameter) ? std::nullopt : std::optional<double>(parameter);
    *out = make_string(stamp(petrov::io::catalog_eval(id, q, option, param, ctx->tol), ctx->tol));
  });
}

void petrov_verify_options_init(petrov_verify_options* options) {
  if (!options) return;
  *options = petrov_verify_options{};
  options->struct_size = sizeof(petrov_verify_options);
  options->samples = 20;
  options->parameter = std::nan("");
}

petrov_status petrov_verify_run(petrov_context* ctx, const petrov_verify_options* options, petrov_format format,
                                petrov_string** out, int* all_pass) {
  if (!options || !out) return invalid(ctx, "null argument");
  if (options->struct_size != sizeof(petrov_verify_options))
    return invalid(ctx, "petrov_verify_options was not initialized with petrov_verify_options_init");
  return guarded(ctx, [&] {
    petrov::verify::RunOptions run;
    run.ids = split_ids(options->ids);
    if (options->h > 0) run.h = options->h;
    run.samples = options->samples;
    run.seed = options->seed;
    if (!std::isnan(options->parameter)) run.parameter = options->parameter;
    run.threads = options->threads;
    if (options->shape_fd_threshold > 0) run.thresholds.shape_fd = options->shape_fd_threshold;
    if (options->gauss_threshold > 0) run.thresholds.gauss = options->gauss_threshold;
    if (options->codazzi_threshold > 0) run.thresholds.codazzi = options->codazzi_threshold;
    const auto result = petrov::verify::run(run);
    if (all_pass) *all_pass = result.all_pass ? 1 : 0;
    *out = make_string(format == PETROV_FORMAT_MARKDOWN
                           ? tolerance_line(ctx->tol) + petrov::report::to_markdown(result)
                           : stamp(petrov::io::to_json(result, run), ctx->tol));
  });
}

petrov_status petrov_report_table(petrov_context* ctx, int which, int samples_per_region, uint64_t seed,
                                  petrov_format format, petrov_string** out, int* pass) {
  if (!out) return invalid(ctx, "null argument");
  return guarded(ctx, [&] {
    const auto table = petrov::report::table_report(which, samples_per_region, seed, ctx->tol);
    if (pass) *pass = table.pass() ? 1 : 0;
    *out = make_string(format == PETROV_FORMAT_MARKDOWN ? tolerance_line(ctx->tol) + petrov::report::to_markdown(table)
                                                        : stamp(petrov::io::to_json(table), ctx->tol));
  });
}

petrov_status petrov_quadric_check_json(petrov_context* ctx, const char* input, int per_level, uint64_t seed,
                                        petrov_string** out, int* pass) {
  if (!input || !out) return invalid(ctx, "null argument");
  return guarded(ctx, [&] {
    const Json doc = petrov::io::quadric_check(petrov::io::parse(input), per_level, seed, ctx->tol);
    if (pass) *pass = doc.at("pass").get<bool>() ? 1 : 0;
    *out = make_string(stamp(doc, ctx->tol));
  });
}

petrov_status petrov_pair_create(petrov_context* ctx, size_t n, const double* a, const double* g, petrov_pair** out) {
  if (!a || !g || !out) return invalid(ctx, "null argument");
  return guarded(ctx, [&] {
    using Rows = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto dim = static_cast<Eigen::Index>(n);
    const petrov::RealMatrix am = Eigen::Map<const Rows>(a, dim, dim);
    const petrov::RealMatrix gm = Eigen::Map<const Rows>(g, dim, dim);
    *out = new petrov_pair{petrov::SelfAdjointPair::make(petrov::linalg::exact_if_integral(am),
                                                         petrov::linalg::exact_if_integral(gm), ctx->tol.algebraic)};
  });
}

void petrov_pair_destroy(petrov_pair* pair) { delete pair; }

size_t petrov_pair_dim(const petrov_pair* pair) { return pair ? static_cast<size_t>(pair->pair.dim()) : 0; }

petrov_status petrov_pair_classify(petrov_context* ctx, const petrov_pair* pair, petrov_classification** out) {
  if (!pair || !out) return invalid(ctx, "null argument");
  return guarded(ctx, [&] {
    const auto form = petrov::petrov_normal_form(pair->pair, ctx->tol);
    auto* c = new petrov_classification{};
    try {
      c->algebraic = petrov::classify_algebraic(form);
      c->geometric = petrov::classify_geometric(pair->pair, ctx->tol);
    } catch (...) {
      delete c;
      throw;
    }
    c->negative_index = petrov::negative_index(form);
    c->transform = form.transform;
    c->label = petrov::to_string(c->algebraic.label);
    c->geometric_label = petrov::to_string(c->geometric.label);
    *out = c;
  });
}

void petrov_classification_destroy(petrov_classification* c) { delete c; }

const char* petrov_classification_label(const petrov_classification* c) { return c ? c->label.c_str() : ""; }

const char* petrov_classification_geometric_label(const petrov_classification* c) {
  return c ? c->geometric_label.c_str() : "";
}

int petrov_classification_index(const petrov_classification* c) { return c ? c->algebraic.index : 0; }

int petrov_classification_epsilon(const petrov_classification* c, int* epsilon) {
  if (!c || !c->algebraic.epsilon) return 0;
  if (epsilon) *epsilon = *c->algebraic.epsilon;
  return 1;
}

int petrov_classification_negative_index(const petrov_classification* c) { return c ? c->negative_index : 0; }

petrov_status petrov_classification_transform(const petrov_classification* c, double* out, size_t len) {
  if (!c || !out) return PETROV_ERR_INVALID_ARGUMENT;
  const auto n = static_cast<size_t>(c->transform.rows());
  if (len < n * n) return PETROV_ERR_SHAPE;
  for (size_t r = 0; r < n; ++r)
    for (size_t k = 0; k < n; ++k)
      out[r * n + k] = c->transform(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k));
  return PETROV_OK;
}

}  // extern "C"

// Command-line front end. Talks to the library only through the C interface.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "petrov/petrov.h"

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContextDeleter {
  void operator()(petrov_context* c) const { petrov_context_destroy(c); }
};
struct StringDeleter {
  void operator()(petrov_string* s) const { petrov_string_destroy(s); }
};
using ContextPtr = std::unique_ptr<petrov_context, ContextDeleter>;
using StringPtr = std::unique_ptr<petrov_string, StringDeleter>;

double parse_number(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + text + "' is not a number");
  }
}

// PETROV_TOL is either one number (algebraic tolerance), "algebraic,rank",
// or "algebraic=A,rank=R" in any order.
void apply_env_tolerance(petrov_context* ctx) {
  const char* env = std::getenv("PETROV_TOL");
  if (!env || !*env) return;
  double algebraic = 0, rank = 0;
  petrov_context_get_tolerance(ctx, &algebraic, &rank);
  std::stringstream ss(env);
  std::string item;
  int position = 0;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      (position++ == 0 ? algebraic : rank) = parse_number(item, "PETROV_TOL");
    } else if (item.substr(0, eq) == "algebraic") {
      algebraic = parse_number(item.substr(eq + 1), "PETROV_TOL");
    } else if (item.substr(0, eq) == "rank") {
      rank = parse_number(item.substr(eq + 1), "PETROV_TOL");
    } else {
      throw UsageError("PETROV_TOL: unknown key '" + item.substr(0, eq) + "'");
    }
  }
  if (petrov_context_set_tolerance(ctx, algebraic, rank) != PETROV_OK)
    throw UsageError(std::string("PETROV_TOL: ") + petrov_last_error(ctx));
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, "--point"));
  if (out.empty()) throw UsageError("--point needs comma-separated coordinates");
  return out;
}

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Prints the document or the error; maps the status to an exit code.
int finish(petrov_context* ctx, petrov_status status, petrov_string* raw, bool pass = true) {
  StringPtr out(raw);
  if (status != PETROV_OK) {
    std::cerr << "error (" << petrov_status_name(status) << "): " << petrov_last_error(ctx) << '\n';
    return status == PETROV_ERR_PARSE ? kExitUsage : kExitFailed;
  }
  std::cout << petrov_string_data(out.get());
  return pass ? 0 : kExitFailed;
}

petrov_format pick_format(bool json, bool markdown, petrov_format fallback) {
  if (json && markdown) throw UsageError("--json and --markdown are exclusive");
  return json ? PETROV_FORMAT_JSON : markdown ? PETROV_FORMAT_MARKDOWN : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Petrov types of self-adjoint pairs and the catalog of isoparametric hypersurfaces"};
  app.require_subcommand(1);

  std::string input = "-";
  auto* classify = app.add_subcommand("classify", "classify a pair {A, G} given as JSON");
  bool flip_metric = false;
  classify->add_option("--input,-i", input, "JSON file ('-' for stdin)");
  classify->add_flag("--anti-isometric", flip_metric,
                     "classify (A, -G): reads a hypersurface of H^{n+1}_s in its anti-isometric S^{n+1}_{n+1-s}");

  auto* catalog = app.add_subcommand("catalog", "catalog of example hypersurfaces");
  catalog->require_subcommand(1);
  catalog->add_subcommand("list", "list the examples");
  auto* eval = catalog->add_subcommand("eval", "evaluate one example at a point");
  std::string id, point, frame = "standard";
  std::optional<double> parameter;
  eval->add_option("id", id, "example id")->required();
  eval->add_option("--point", point, "chart coordinates or an ambient point, comma-separated")->required();
  eval->add_option("--frame", frame, "standard or special")->check(CLI::IsMember({"standard", "special"}));
  eval->add_option("--param", parameter, "shape parameter a of examples k and l");

  auto* verify = app.add_subcommand("verify", "numerical verification");
  verify->require_subcommand(1);
  auto* run = verify->add_subcommand("run", "finite-difference checks on the catalog");
  run->set_help_flag("--help", "print this help and exit");  // frees the name of the step option
  std::vector<std::string> ids;
  std::optional<double> h, shape_fd_threshold, gauss_threshold, codazzi_threshold;
  int samples = 20;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool json = false, markdown = false;
  run->add_option("--id", ids, "example id (repeatable or comma-separated)")->delimiter(',');
  run->add_option("--h", h, "finite-difference step for every check")->check(CLI::PositiveNumber);
  run->add_option("--samples", samples, "samples per example")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "sampling seed");
  run->add_option("--param", parameter, "shape parameter a of examples k and l");
  run->add_option("--threads", threads, "worker threads (0: all cores)");
  run->add_option("--shape-fd-threshold", shape_fd_threshold)->check(CLI::PositiveNumber);
  run->add_option("--gauss-threshold", gauss_threshold)->check(CLI::PositiveNumber);
  run->add_option("--codazzi-threshold", codazzi_threshold)->check(CLI::PositiveNumber);
  run->add_flag("--json", json, "JSON output (default)");
  run->add_flag("--markdown", markdown, "markdown summary");

  auto* quadric = verify->add_subcommand("quadric", "isoparametric check of a quadratic function given as JSON");
  int per_level = 50;
  quadric->add_option("--input,-i", input, "JSON file ('-' for stdin)");
  quadric->add_option("--per-level", per_level, "points per level")->check(CLI::PositiveNumber);
  quadric->add_option("--seed", seed, "sampling seed");

  auto* report = app.add_subcommand("report", "regenerate a classification table");
  int table = 0, per_region = 8;
  report->add_option("--table", table, "1, 2 or 3")->required()->check(CLI::IsMember({1, 2, 3}));
  report->add_option("--samples", per_region, "samples per region")->check(CLI::PositiveNumber);
  report->add_option("--seed", seed, "sampling seed");
  report->add_flag("--json", json, "JSON output");
  report->add_flag("--markdown", markdown, "markdown table (default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  petrov_context* raw_ctx = nullptr;
  if (petrov_context_create(&raw_ctx) != PETROV_OK) {
    std::cerr << "error: cannot create a library context\n";
    return kExitFailed;
  }
  ContextPtr ctx(raw_ctx);
  petrov_string* out = nullptr;

  try {
    apply_env_tolerance(ctx.get());

    if (*classify) {
      const std::string text = read_input(input);
      const unsigned flags = flip_metric ? static_cast<unsigned>(PETROV_CLASSIFY_FLIP_METRIC) : 0u;
      const auto st = petrov_classify_json(ctx.get(), text.c_str(), flags, &out);
      return finish(ctx.get(), st, out);
    }
    if (*catalog) {
      if (*eval) {
        const auto q = parse_point(point);
        const double a = parameter.value_or(std::nan(""));
        const auto st = petrov_catalog_eval_json(ctx.get(), id.c_str(), q.data(), q.size(), frame.c_str(), a, &out);
        return finish(ctx.get(), st, out);
      }
      const auto st = petrov_catalog_list_json(ctx.get(), &out);
      return finish(ctx.get(), st, out);
    }
    if (*verify) {
      int pass = 0;
      if (*quadric) {
        const std::string text = read_input(input);
        const auto st = petrov_quadric_check_json(ctx.get(), text.c_str(), per_level, seed, &out, &pass);
        return finish(ctx.get(), st, out, pass != 0);
      }
      std::string joined;
      for (const auto& s : ids) joined += (joined.empty() ? "" : ",") + s;
      petrov_verify_options opt;
      petrov_verify_options_init(&opt);
      opt.ids = joined.c_str();
      opt.h = h.value_or(0.0);
      opt.samples = samples;
      opt.seed = seed;
      opt.parameter = parameter.value_or(std::nan(""));
      opt.threads = threads;
      opt.shape_fd_threshold = shape_fd_threshold.value_or(0.0);
      opt.gauss_threshold = gauss_threshold.value_or(0.0);
      opt.codazzi_threshold = codazzi_threshold.value_or(0.0);
      const auto st = petrov_verify_run(ctx.get(), &opt, pick_format(json, markdown, PETROV_FORMAT_JSON), &out, &pass);
      return finish(ctx.get(), st, out, pass != 0);
    }
    if (*report) {
      int pass = 0;
      const auto st = petrov_report_table(ctx.get(), table, per_region, seed,
                                          pick_format(json, markdown, PETROV_FORMAT_MARKDOWN), &out, &pass);
      return finish(ctx.get(), st, out, pass != 0);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  return kExitUsage;
}

#include "petrov/json_io.hpp"

#include <cmath>
#include <regex>

namespace petrov::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

int count_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) bad(std::string("\"") + key + "\" must be a non-negative integer");
  return v.get<int>();
}

double number(const Json& v, const std::string& what) {
  if (!v.is_number()) bad(what + " must be a number");
  return v.get<double>();
}

// cpp_int reads a leading 0 as an octal prefix, so strip it first.
boost::multiprecision::cpp_int decimal_int(std::string digits) {
  const bool negative = !digits.empty() && (digits[0] == '-' || digits[0] == '+');
  const char sign = negative ? digits[0] : '+';
  if (negative) digits.erase(0, 1);
  const auto nz = digits.find_first_not_of('0');
  digits = nz == std::string::npos ? "0" : digits.substr(nz);
  boost::multiprecision::cpp_int v(digits);
  return sign == '-' ? boost::multiprecision::cpp_int(-v) : v;
}

Rational rational_from_text(const std::string& text) {
  using boost::multiprecision::cpp_int;
  static const std::regex fraction(R"(^\s*([+-]?\d+)\s*/\s*(\d+)\s*$)");
  static const std::regex decimal(R"(^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, fraction)) {
    const cpp_int den = decimal_int(m[2].str());
    if (den == 0) bad("zero denominator in \"" + text + "\"");
    return Rational(decimal_int(m[1].str()), den);
  }
  if (std::regex_match(text, m, decimal) && (m[2].length() + m[3].length()) > 0) {
    const std::string digits = m[2].str() + m[3].str();
    Rational value(decimal_int(digits));
    long long exp = m[4].matched ? std::stoll(m[4].str()) : 0;
    exp -= static_cast<long long>(m[3].length());
    if (std::llabs(exp) > 400) bad("exponent out of range in \"" + text + "\"");
    const cpp_int scale = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(std::llabs(exp)));
    if (exp >= 0) {
      value *= scale;
    } else {
      value /= scale;
    }
    return m[1].str() == "-" ? Rational(-value) : value;
  }
  bad("\"" + text + "\" is not a rational number");
}

std::vector<Json> flat_entries(const Json& data, int rows, int cols) {
  if (!data.is_array()) bad("matrix \"data\" must be an array");
  std::vector<Json> out;
  for (const auto& item : data) {
    if (item.is_array()) {
      for (const auto& x : item) out.push_back(x);
    } else {
      out.push_back(item);
    }
  }
  if (out.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols))
    bad("matrix data has " + std::to_string(out.size()) + " entries, expected " + std::to_string(rows * cols));
  return out;
}

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

linalg::Matrix matrix_from_json(const Json& j) {
  const int rows = count_field(j, "rows");
  const int cols = count_field(j, "cols");
  const auto entries = flat_entries(field(j, "data"), rows, cols);
  const bool exact = !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const Json& x) { return x.is_string(); });
  if (exact) {
    linalg::ExactMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = rational_from_text(entries[static_cast<size_t>(r * cols + c)].get<std::string>());
    return m;
  }
  RealMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const Json& x = entries[static_cast<size_t>(r * cols + c)];
      if (x.is_string()) {
        m(r, c) = rational_from_text(x.get<std::string>()).convert_to<double>();
      } else {
        m(r, c) = number(x, "matrix entry");
      }
    }
  return m;
}

RealVector vector_from_json(const Json& j) {
  if (!j.is_array()) bad("vector must be an array of numbers");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = number(j[k], "vector entry");
  return v;
}

Json to_json(const RealMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json to_json(const linalg::Matrix& m) {
  if (m.mode() == linalg::NumericMode::floating) return to_json(m.real());
  Json data = Json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) data.push_back(m.exact()(r, c).str());
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json to_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Json to_json(const linalg::Tolerance& tol) { return Json{{"algebraic", tol.algebraic}, {"rank", tol.rank}}; }

Json to_json(const AlgebraicType& t) {
  Json blocks = Json::array();
  for (const auto& b : t.blocks) {
    if (b.real) {
      blocks.push_back(Json{{"kind", "real"}, {"lambda", b.lambda}, {"size", b.size}, {"epsilon", b.epsilon}});
    } else {
      blocks.push_back(Json{{"kind", "complex"}, {"alpha", b.lambda}, {"beta", b.beta}, {"size", b.size}});
    }
  }
  Json others = Json::array();
  for (double x : t.others) others.push_back(x);
  return Json{{"label", to_string(t.label)},
              {"index", t.index},
              {"epsilon", optional_int(t.epsilon)},
              {"name", t.name()},
              {"params", Json{{"blocks", std::move(blocks)}, {"others", std::move(others)}}}};
}

Json to_json(const GeometricType& t) {
  return Json{{"label", to_string(t.label)}, {"index", t.index}, {"orientation", t.orientation}};
}

Json to_json(const JordanStructure& s) {
  Json real = Json::array(), complex = Json::array();
  for (const auto& b : s.real_blocks) real.push_back(Json{{"lambda", b.lambda}, {"sizes", b.sizes}});
  for (const auto& b : s.complex_blocks)
    complex.push_back(Json{{"alpha", b.alpha}, {"beta", b.beta}, {"sizes", b.sizes}});
  return Json{{"text", s.to_string()}, {"real", std::move(real)}, {"complex", std::move(complex)}};
}

Json classify(const Json& input, const linalg::Tolerance& base, bool flip_metric) {
  linalg::Tolerance tol = base;
  if (input.is_object() && input.contains("tol")) {
    tol.algebraic = number(input.at("tol"), "\"tol\"");
    if (!(tol.algebraic > 0)) throw Error(ErrorKind::contract, "\"tol\" must be positive");
  }
  const auto a = matrix_from_json(field(input, "A"));
  auto g = matrix_from_json(field(input, "G"));
  if (flip_metric) {
    if (g.mode() == linalg::NumericMode::exact) {
      g = linalg::ExactMatrix(g.rows(), g.cols()) - g.exact();
    } else {
      g = linalg::Matrix(RealMatrix(-g.real()));
    }
  }
  const auto pair = SelfAdjointPair::make(a, g, tol.algebraic);
  const auto form = petrov_normal_form(pair, tol);
  const auto alg = classify_algebraic(form);
  const auto geo = classify_geometric(pair, tol);
  const bool exact = a.mode() == linalg::NumericMode::exact && g.mode() == linalg::NumericMode::exact;
  return Json{{"schema", kSchema},
              {"tolerance", to_json(tol)},
              {"mode", exact ? "exact" : "floating"},
              {"metric_flipped", flip_metric},
              {"algebraic", to_json(alg)},
              {"geometric", to_json(geo)},
              {"structure", to_json(form.structure)},
              {"signs", form.signs},
              {"negative_index", negative_index(form)},
              {"transform", to_json(form.transform)}};
}

Json to_json(const catalog::FrameData& d) {
  return Json{{"domain_point", to_json(d.domain_point)},
              {"point", to_json(d.point)},
              {"frame", to_json(d.frame)},
              {"normal", to_json(d.normal)},
              {"shape", to_json(d.shape)},
              {"gram", to_json(d.gram)},
              {"nu", d.nu}};
}

Json to_json(const catalog::ExpectedType& t) {
  return Json{{"label", to_string(t.label)},
              {"index", t.index},
              {"epsilon", optional_int(t.epsilon)},
              {"region", t.region},
              {"source", t.source}};
}

Json catalog_list() {
  Json items = Json::array();
  for (const auto& id : catalog::example_ids()) {
    const auto ex = catalog::make_example(id);
    Json regions = Json::array();
    const auto points = ex->sample_domain(ex->region_count(), 0);
    for (const auto& q : points) regions.push_back(to_json(ex->expected_type(q)));
    Json item{{"id", id},
              {"ambient", ex->ambient().name()},
              {"param_dim", ex->param_dim()},
              {"nu", ex->nu()},
              {"level_set", ex->is_level_set()},
              {"special_frame", ex->has_special_frame()},
              {"description", ex->description()},
              {"expected", std::move(regions)}};
    if (!std::isnan(ex->parameter())) item["parameter"] = ex->parameter();
    items.push_back(std::move(item));
  }
  return Json{{"schema", kSchema}, {"examples", std::move(items)}};
}

Json catalog_eval(const std::string& id, const RealVector& point, catalog::FrameOption option,
                  std::optional<double> parameter, const linalg::Tolerance& tol) {
  const auto ex = catalog::make_example(id, parameter);
  const RealVector q = ex->chart_point(point);
  const auto data = ex->evaluate(q, option);
  const auto observed = catalog::observed_type(data, tol);
  Json out{{"schema", kSchema},
           {"tolerance", to_json(tol)},
           {"id", id},
           {"ambient", ex->ambient().name()},
           {"frame_option", catalog::to_string(option)}};
  if (!std::isnan(ex->parameter())) out["parameter"] = ex->parameter();
  const Json frame = to_json(data);
  for (const auto& [key, value] : frame.items()) out[key] = value;
  out["observed"] = Json{{"algebraic", to_json(observed.algebraic)}, {"geometric", to_json(observed.geometric)}};
  out["expected"] = to_json(ex->expected_type(q));
  return out;
}

Json to_json(const verify::ResidualReport& r) {
  Json out{{"example", r.example}, {"check", r.check}};
  out["sample"] = r.sample >= 0 ? Json(r.sample) : Json(nullptr);
  out["point"] = to_json(r.point);
  out["residual"] = r.residual;
  out["h"] = r.h;
  out["threshold"] = r.threshold;
  out["residual_half"] = r.residual_half ? Json(*r.residual_half) : Json(nullptr);
  out["ratio"] = r.ratio && std::isfinite(*r.ratio) ? Json(*r.ratio) : Json(nullptr);
  out["pass"] = r.pass;
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

Json to_json(const verify::RunResult& r, const verify::RunOptions& options) {
  const auto& t = options.thresholds;
  Json reports = Json::array();
  int failed = 0;
  for (const auto& rep : r.reports) {
    reports.push_back(to_json(rep));
    failed += rep.pass ? 0 : 1;
  }
  Json opts{{"ids", options.ids}, {"samples", options.samples}, {"seed", options.seed}};
  opts["h"] = options.h ? Json(*options.h) : Json(nullptr);
  opts["parameter"] = options.parameter ? Json(*options.parameter) : Json(nullptr);
  return Json{{"schema", kSchema},
              {"options", std::move(opts)},
              {"thresholds",
               Json{{"shape_fd", t.shape_fd},
                    {"shape_fd_h", t.shape_fd_h},
                    {"gauss", t.gauss},
                    {"codazzi", t.codazzi},
                    {"curvature_h", t.curvature_h},
                    {"convergence_ratio", t.convergence_ratio},
                    {"noise_floor", t.noise_floor},
                    {"iso_gradient_spread", t.iso_gradient_spread},
                    {"iso_laplacian_spread", t.iso_laplacian_spread},
                    {"iso_h", t.iso_h}}},
              {"all_pass", r.all_pass},
              {"failed", failed},
              {"reports", std::move(reports)}};
}

Json to_json(const report::TableReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(Json{{"key", row.key}, {"stated", row.stated}, {"observed", row.observed}});
  return Json{{"schema", kSchema},
              {"table", r.table},
              {"title", r.title},
              {"row_header", r.row_header},
              {"columns", r.columns},
              {"rows", std::move(rows)},
              {"samples", r.samples},
              {"pass", r.pass()},
              {"mismatches", r.mismatches}};
}

spaceform::QuadricFunction quadric_from_json(const Json& j) {
  const Json& variant = field(j, "variant");
  if (!variant.is_string() || (variant != "flat" && variant != "sphere")) bad("\"variant\" must be \"flat\" or \"sphere\"");
  const bool sphere = variant == "sphere";
  const Json& index = field(j, "index");
  if (!index.is_number_integer()) bad("\"index\" must be an integer");
  const RealMatrix p = matrix_from_json(field(j, "P")).real();
  RealVector vec = RealVector::Zero(p.rows());
  if (j.contains("p") && !j.at("p").is_null()) vec = vector_from_json(j.at("p"));
  const double c = number(field(j, "c"), "\"c\"");
  return spaceform::QuadricFunction::make(sphere ? spaceform::QuadricVariant::sphere : spaceform::QuadricVariant::flat,
                                          index.get<int>(), p, vec, c);
}

Json quadric_check(const Json& input, int per_level, std::uint64_t seed, const linalg::Tolerance& tol) {
  const auto f = quadric_from_json(input);
  const auto adm = spaceform::admissibility_check(f, tol.algebraic);
  std::vector<double> levels{f.level};
  if (input.contains("levels")) {
    levels.clear();
    for (const auto& c : field(input, "levels")) levels.push_back(number(c, "level"));
  }
  Json out{{"schema", kSchema},
           {"tolerance", to_json(tol)},
           {"variant", spaceform::to_string(f.variant)},
           {"index", f.index},
           {"levels", levels},
           {"admissible", adm.admissible},
           {"clause", adm.clause},
           {"diagnostic", adm.diagnostic}};
  const auto points = verify::sample_level_points(f, levels, per_level, seed);
  const auto rep = verify::isoparametric_function_check(f, points, {}, "quadric");
  out["gradient"] = to_json(rep.gradient);
  out["laplacian"] = to_json(rep.laplacian);
  out["pass"] = rep.pass();
  return out;
}

}  // namespace petrov::io

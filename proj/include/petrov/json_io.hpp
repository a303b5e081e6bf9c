#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "petrov/catalog.hpp"
#include "petrov/report.hpp"
#include "petrov/verify.hpp"

/// JSON encodings shared by the C API and the CLI. Every top-level document
/// carries "schema": "1". Keys keep insertion order so output is byte-stable.
namespace petrov::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "1";

/// Parses text, mapping syntax errors to ErrorKind::parse.
Json parse(const std::string& text);

/// {"rows", "cols", "data"} with row-major data. All-string data ("3", "-1/2",
/// "0.25") selects exact mode; any plain number selects float mode.
linalg::Matrix matrix_from_json(const Json& j);
RealVector vector_from_json(const Json& j);

Json to_json(const RealMatrix& m);
Json to_json(const linalg::Matrix& m);
Json to_json(const RealVector& v);
Json to_json(const linalg::Tolerance& tol);

Json to_json(const AlgebraicType& t);
Json to_json(const GeometricType& t);
Json to_json(const JordanStructure& s);

/// Input {"A", "G", "tol"?}; "tol" replaces the algebraic tolerance. With
/// `flip_metric` the pair (A, -G) is classified instead, which maps a
/// hypersurface of H^{n+1}_s to its anti-isometric image in S^{n+1}_{n+1-s}.
Json classify(const Json& input, const linalg::Tolerance& base, bool flip_metric = false);

Json to_json(const catalog::FrameData& data);
Json to_json(const catalog::ExpectedType& t);

Json catalog_list();
Json catalog_eval(const std::string& id, const RealVector& point, catalog::FrameOption option,
                  std::optional<double> parameter, const linalg::Tolerance& tol);

Json to_json(const verify::ResidualReport& r);
Json to_json(const verify::RunResult& r, const verify::RunOptions& options);
Json to_json(const report::TableReport& r);

/// {"variant": "flat"|"sphere", "index": s, "P": Matrix, "p"?: vector, "c": number}.
spaceform::QuadricFunction quadric_from_json(const Json& j);

/// Admissibility of the function plus the isoparametric check on seeded points
/// of each value in the optional "levels" array (default: c alone).
Json quadric_check(const Json& input, int per_level, std::uint64_t seed, const linalg::Tolerance& tol);

}  // namespace petrov::io

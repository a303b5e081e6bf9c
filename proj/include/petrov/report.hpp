#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "petrov/verify.hpp"

namespace petrov::report {

/// One regenerated classification table. Every cell carries the stated entry
/// next to the entry rebuilt from sampled frames.
struct TableReport {
  struct Row {
    std::string key;                    // ambient space or parameter region
    std::vector<std::string> stated;    // one entry per column
    std::vector<std::string> observed;  // same layout as `stated`
  };

  int table = 0;
  std::string title;
  std::string row_header;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::vector<std::string> mismatches;
  int samples = 0;  // frames classified in total

  bool pass() const { return mismatches.empty(); }
};

/// `--table 1` is the existence grid (ambient space x geometric label): a letter
/// marks the catalog entry found in that cell, "×" and "△" are kept as stated
/// and cells with no stated entry read "open". Tables 2 and 3 list the type
/// per parameter region of the two region-dependent examples.
///
/// Throws ErrorKind::contract for `which` outside 1..3.
TableReport table_report(int which, int samples_per_region = 8, std::uint64_t seed = 0,
                         const linalg::Tolerance& tol = {});

std::string to_markdown(const TableReport& report);

/// Summary per (example, check) followed by every failing report.
std::string to_markdown(const verify::RunResult& result);

}  // namespace petrov::report

#include "petrov/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "petrov/catalog.hpp"

namespace petrov::report {

namespace {

using catalog::make_example;

constexpr double kPi = 3.14159265358979323846;

std::string type_text(int index, Label label, std::optional<int> epsilon) {
  std::string s = std::string("type ") + to_string(label) + " of index " + std::to_string(index);
  if (epsilon) s += *epsilon > 0 ? " (ε=1)" : " (ε=-1)";
  return s;
}

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : " / ") + s;
  return out;
}

// Tables 2 and 3: one row per parameter region of a region-dependent example.
TableReport region_table(int which, int samples_per_region, std::uint64_t seed, const linalg::Tolerance& tol) {
  const bool index1 = which == 3;
  const auto ex = make_example(index1 ? "0-1" : "0-2");
  const char* var = index1 ? "v" : "w";

  TableReport r;
  r.table = which;
  r.title = std::string("The type of (A, <,>) for Example ") + ex->id();
  r.row_header = std::string("The value of ") + var;
  r.columns = {"The type"};
  const std::vector<std::string> stated =
      index1 ? std::vector<std::string>{type_text(1, Label::I, {}), type_text(1, Label::II, -1),
                                        type_text(1, Label::II, 1)}
             : std::vector<std::string>{type_text(2, Label::X, {}), type_text(2, Label::IX_i, {}),
                                        type_text(2, Label::IX_ii, {})};

  std::vector<RealVector> points;
  for (double t : {0.0, kPi / 2, 3 * kPi / 2}) {
    RealVector q = RealVector::Zero(ex->param_dim());
    q(ex->param_dim() - 1) = t;
    points.push_back(q);
  }
  const auto sampled = ex->sample_domain(samples_per_region * ex->region_count(), seed);
  points.insert(points.end(), sampled.begin(), sampled.end());

  std::vector<std::set<std::string>> seen(static_cast<size_t>(ex->region_count()));
  for (const auto& q : points) {
    const auto obs = catalog::observed_type(ex->evaluate(q), tol);
    // Index 2 rows state no sign, so only the index 1 row for type II carries one.
    std::optional<int> eps;
    if (index1 && obs.geometric.label == Label::II) eps = obs.algebraic.epsilon;
    seen[static_cast<size_t>(ex->region_of(q))].insert(type_text(obs.algebraic.index, obs.geometric.label, eps));
    ++r.samples;
  }
  for (int k = 0; k < ex->region_count(); ++k) {
    TableReport::Row row;
    row.key = ex->region_name(k);
    row.stated = {stated[static_cast<size_t>(k)]};
    row.observed = {join(seen[static_cast<size_t>(k)])};
    if (row.observed[0] != row.stated[0])
      r.mismatches.push_back(row.key + ": stated '" + row.stated[0] + "', observed '" + row.observed[0] + "'");
    r.rows.push_back(std::move(row));
  }
  return r;
}

TableReport existence_table(int samples_per_region, std::uint64_t seed, const linalg::Tolerance& tol) {
  TableReport r;
  r.table = 1;
  r.title = "The cases of M (4-dimensional, index 2)";
  r.row_header = "ambient";
  r.columns = {"I", "II", "III", "IV", "VI", "VII-i", "VII-ii", "IX-i", "IX-ii", "X", "XI"};
  const std::vector<std::string> ambients = {"R^5_2", "S^5_2", "S^5_3"};
  const std::vector<std::string> keys = {"R^5_2 (δ=0)", "S^5_2 (δ=1)", "S^5_3 (δ=-1)"};
  // Letters are catalog ids; an empty cell is an open case.
  const std::vector<std::vector<std::string>> stated = {
      {"×", "△", "×", "×", "m", "l", "k", "d", "c", "b", "a"},
      {"×", "△", "", "×", "", "", "", "", "", "", "e"},
      {"", "j", "", "", "", "", "", "i", "h", "g", "f"},
  };

  std::map<std::pair<std::string, std::string>, std::set<std::string>> found;  // (ambient, label) -> ids
  for (const auto& id : catalog::example_ids()) {
    if (id == "0-1" || id == "0-2") continue;
    const auto ex = make_example(id);
    auto points = ex->sample_domain(samples_per_region, seed);
    points.insert(points.begin(), ex->anchor());
    for (const auto& q : points) {
      const auto obs = catalog::observed_type(ex->evaluate(q), tol);
      const std::string where = ex->ambient().name();
      if (obs.algebraic.index != 2)
        r.mismatches.push_back(id + ": observed index " + std::to_string(obs.algebraic.index));
      found[{where, to_string(obs.geometric.label)}].insert(id);
      ++r.samples;
    }
  }

  std::set<std::string> placed;
  for (size_t i = 0; i < ambients.size(); ++i) {
    TableReport::Row row;
    row.key = keys[i];
    for (size_t j = 0; j < r.columns.size(); ++j) {
      const std::string& want = stated[i][j];
      row.stated.push_back(want.empty() ? "open" : want);
      const auto it = found.find({ambients[i], r.columns[j]});
      const std::string got = it == found.end() ? "" : join(it->second);
      const bool letter = !want.empty() && want != "×" && want != "△";
      if (letter ? got != want : !got.empty())
        r.mismatches.push_back(keys[i] + " / " + r.columns[j] + ": stated '" + row.stated.back() + "', observed '" +
                               (got.empty() ? "none" : got) + "'");
      row.observed.push_back(!got.empty() ? got : letter ? "missing" : row.stated.back());
      if (it != found.end()) placed.insert(it->first.first + "/" + it->first.second);
    }
    r.rows.push_back(std::move(row));
  }
  for (const auto& [cell, ids] : found)
    if (!placed.count(cell.first + "/" + cell.second))
      r.mismatches.push_back(join(ids) + " classified outside the grid: " + cell.first + " / " + cell.second);
  return r;
}

}  // namespace

TableReport table_report(int which, int samples_per_region, std::uint64_t seed, const linalg::Tolerance& tol) {
  if (samples_per_region < 1) throw Error(ErrorKind::contract, "need at least one sample per region");
  switch (which) {
    case 1:
      return existence_table(samples_per_region, seed, tol);
    case 2:
    case 3:
      return region_table(which, samples_per_region, seed, tol);
    default:
      throw Error(ErrorKind::contract, "table must be 1, 2 or 3");
  }
}

std::string to_markdown(const TableReport& report) {
  std::ostringstream os;
  os << "### Table " << report.table << ": " << report.title << "\n\n";
  if (report.table == 1) {
    os << "| " << report.row_header << " |";
    for (const auto& c : report.columns) os << ' ' << c << " |";
    os << "\n|---|";
    for (size_t k = 0; k < report.columns.size(); ++k) os << ":---:|";
    os << '\n';
    for (const auto& row : report.rows) {
      os << "| " << row.key << " |";
      for (const auto& cell : row.observed) os << ' ' << cell << " |";
      os << '\n';
    }
  } else {
    os << "| " << report.row_header << " | stated | observed |\n|---|---|---|\n";
    for (const auto& row : report.rows) os << "| " << row.key << " | " << row.stated[0] << " | " << row.observed[0] << " |\n";
  }
  os << '\n' << report.samples << " frames classified; ";
  if (report.pass()) {
    os << "every cell matches.\n";
  } else {
    os << report.mismatches.size() << " mismatch(es):\n";
    for (const auto& m : report.mismatches) os << "- " << m << '\n';
  }
  return os.str();
}

std::string to_markdown(const verify::RunResult& result) {
  struct Summary {
    int count = 0;
    int failed = 0;
    double worst = 0.0;
    double threshold = 0.0;
    double min_ratio = std::numeric_limits<double>::infinity();
  };
  std::vector<std::pair<std::string, Summary>> rows;  // first-seen order
  std::map<std::string, size_t> where;
  for (const auto& r : result.reports) {
    const std::string key = r.example + "\t" + r.check;
    auto [it, fresh] = where.emplace(key, rows.size());
    if (fresh) rows.emplace_back(key, Summary{});
    Summary& s = rows[it->second].second;
    ++s.count;
    s.failed += r.pass ? 0 : 1;
    s.worst = std::max(s.worst, r.residual);
    s.threshold = r.threshold;
    if (r.ratio && r.residual > 0) s.min_ratio = std::min(s.min_ratio, *r.ratio);
  }
  std::ostringstream os;
  os << "| example | check | runs | worst residual | threshold | min ratio | failed |\n"
     << "|---|---|---:|---:|---:|---:|---:|\n";
  os.precision(3);
  for (const auto& [key, s] : rows) {
    const auto tab = key.find('\t');
    os << "| " << key.substr(0, tab) << " | " << key.substr(tab + 1) << " | " << s.count << " | " << s.worst << " | "
       << s.threshold << " | ";
    if (std::isfinite(s.min_ratio)) {
      os << s.min_ratio;
    } else {
      os << "-";
    }
    os << " | " << s.failed << " |\n";
  }
  int failed = 0;
  for (const auto& r : result.reports) failed += r.pass ? 0 : 1;
  os << '\n' << result.reports.size() << " checks, " << failed << " failed.\n";
  for (const auto& r : result.reports) {
    if (r.pass) continue;
    os << "- " << r.example << ' ' << r.check << " sample " << r.sample << ": residual " << r.residual << " (threshold "
       << r.threshold << ")";
    if (r.ratio) os << ", ratio " << *r.ratio;
    if (!r.note.empty()) os << "; " << r.note;
    os << '\n';
  }
  return os.str();
}

}  // namespace petrov::report

// Copyright 2026 The wmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wmark/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "wmark/feature_ranking.hpp"

namespace wmark {

Dataset::Dataset(std::vector<std::string> feature_names, std::string class_name,
                 std::string id_name, std::vector<std::string> ids,
                 std::vector<std::string> labels,
                 std::vector<std::vector<double>> columns)
    : feature_names_(std::move(feature_names)),
      class_name_(std::move(class_name)),
      id_name_(std::move(id_name)),
      ids_(std::move(ids)),
      labels_(std::move(labels)),
      columns_(std::move(columns)) {
  if (feature_names_.empty()) throw SchemaError("dataset has no features");
  if (ids_.empty()) throw SchemaError("dataset has no rows");
  if (columns_.size() != feature_names_.size()) {
    throw SchemaError("column count does not match feature names");
  }
  if (labels_.size() != ids_.size()) {
    throw SchemaError("label count does not match row count");
  }
  for (std::size_t j = 0; j < feature_names_.size(); ++j) {
    const auto& name = feature_names_[j];
    if (name == class_name_ || name == id_name_) {
      throw SchemaError("feature '" + name + "' collides with class/id column");
    }
    if (!feature_lookup_.emplace(name, j).second) {
      throw SchemaError("duplicate column name '" + name + "'");
    }
    if (columns_[j].size() != ids_.size()) {
      throw SchemaError("column '" + name + "' has wrong length");
    }
    for (double v : columns_[j]) {
      if (!std::isfinite(v)) {
        throw SchemaError("non-finite value in column '" + name + "'");
      }
    }
  }
  if (class_name_ == id_name_) {
    throw SchemaError("class and id column must differ");
  }
  id_lookup_.reserve(ids_.size());
  for (std::size_t r = 0; r < ids_.size(); ++r) {
    if (!id_lookup_.emplace(ids_[r], r).second) {
      throw SchemaError("duplicate row id '" + ids_[r] + "'");
    }
  }
}

std::optional<std::size_t> Dataset::feature_index(std::string_view name) const {
  auto it = feature_lookup_.find(std::string(name));
  if (it == feature_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t Dataset::require_feature(std::string_view name) const {
  auto idx = feature_index(name);
  if (!idx) throw SchemaError("unknown feature '" + std::string(name) + "'");
  return *idx;
}

std::optional<std::size_t> Dataset::row_of(std::string_view id) const {
  auto it = id_lookup_.find(std::string(id));
  if (it == id_lookup_.end()) return std::nullopt;
  return it->second;
}

Dataset Dataset::with_column(std::size_t j, std::vector<double> values) const {
  auto cols = columns_;
  cols.at(j) = std::move(values);
  return Dataset(feature_names_, class_name_, id_name_, ids_, labels_,
                 std::move(cols));
}

Dataset Dataset::with_columns(
    std::vector<std::vector<double>> replacements) const {
  if (replacements.size() != columns_.size()) {
    throw SchemaError("replacement count does not match schema");
  }
  for (std::size_t j = 0; j < replacements.size(); ++j) {
    if (replacements[j].empty()) replacements[j] = columns_[j];
  }
  return Dataset(feature_names_, class_name_, id_name_, ids_, labels_,
                 std::move(replacements));
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> cols(columns_.size());
  ids.reserve(rows.size());
  labels.reserve(rows.size());
  for (auto& c : cols) c.reserve(rows.size());
  for (std::size_t r : rows) {
    ids.push_back(ids_.at(r));
    labels.push_back(labels_[r]);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      cols[j].push_back(columns_[j][r]);
    }
  }
  return Dataset(feature_names_, class_name_, id_name_, std::move(ids),
                 std::move(labels), std::move(cols));
}

bool Dataset::same_schema(const Dataset& other) const {
  return feature_names_ == other.feature_names_ &&
         class_name_ == other.class_name_ && id_name_ == other.id_name_;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits one record. Double quotes may wrap a field; "" inside a quoted
// field is a literal quote. Fields spanning lines are not supported.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::optional<double> parse_real(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\n") != std::string_view::npos;
}

void write_field(std::ostream& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

Dataset parse_csv(std::istream& in, std::string_view class_column,
                  std::string_view id_column) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_record(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("empty file: no header row");

  const bool synth = id_column == kSynthesizeIds;
  std::optional<std::size_t> class_pos;
  std::optional<std::size_t> id_pos;
  std::vector<std::size_t> feature_pos;
  std::vector<std::string> feature_names;
  std::unordered_set<std::string> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& name = header[c];
    if (name.empty()) {
      throw ParseError("empty column name at position " + std::to_string(c + 1));
    }
    if (!seen.insert(name).second) {
      throw ParseError("duplicate column name '" + name + "'");
    }
    if (name == class_column) {
      class_pos = c;
    } else if (!synth && name == id_column) {
      id_pos = c;
    } else {
      feature_pos.push_back(c);
      feature_names.push_back(name);
    }
  }
  if (!class_pos) {
    throw SchemaError("missing class column '" + std::string(class_column) + "'");
  }
  if (!synth && !id_pos) {
    throw SchemaError("missing id column '" + std::string(id_column) + "'");
  }
  std::string id_name(synth ? kSynthesizedIdName : id_column);
  if (synth && seen.count(id_name)) {
    throw ParseError("column '" + id_name +
                     "' already exists; cannot synthesize ids");
  }

  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> cols(feature_pos.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_record(line);
    if (cells.size() != header.size()) {
      throw ParseError("row " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < feature_pos.size(); ++j) {
      auto v = parse_real(cells[feature_pos[j]]);
      if (!v) {
        throw ParseError("row " + std::to_string(line_no) + ", column " +
                         feature_names[j] + ": '" + cells[feature_pos[j]] +
                         "' is not a finite real number");
      }
      cols[j].push_back(*v);
    }
    labels.push_back(cells[*class_pos]);
    ids.push_back(synth ? std::to_string(ids.size()) : cells[*id_pos]);
  }
  if (ids.empty()) throw ParseError("file has a header but no data rows");
  if (feature_names.empty()) throw ParseError("file has no feature columns");

  return Dataset(std::move(feature_names), std::string(class_column),
                 std::move(id_name), std::move(ids), std::move(labels),
                 std::move(cols));
}

Dataset load_dataset(const std::filesystem::path& source,
                     std::string_view class_column,
                     std::string_view id_column) {
  std::ifstream in(source);
  if (!in) throw ParseError("cannot open '" + source.string() + "'");
  return parse_csv(in, class_column, id_column);
}

void write_csv(std::ostream& out, const Dataset& d) {
  write_field(out, d.id_name());
  for (const auto& name : d.feature_names()) {
    out << ',';
    write_field(out, name);
  }
  out << ',';
  write_field(out, d.class_name());
  out << '\n';
  for (std::size_t r = 0; r < d.rows(); ++r) {
    write_field(out, d.ids()[r]);
    for (std::size_t j = 0; j < d.features(); ++j) {
      out << ',' << format_real(d.column(j)[r]);
    }
    out << ',';
    write_field(out, d.labels()[r]);
    out << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_csv(out, d);
}

ColumnStats raw_stats(std::span<const double> values) {
  ColumnStats s;
  if (values.empty()) return s;
  s.min = values.front();
  s.max = values.front();
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  const double n = static_cast<double>(values.size());
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / n);
  // Rounding in the sum can push the mean a ulp outside [min, max].
  s.mean = std::clamp(s.mean, s.min, s.max);
  if (s.min == s.max) s.stddev = 0.0;
  return s;
}

ColumnStats column_stats(const Dataset& d, std::string_view feature,
                         double norm_lo, double norm_hi) {
  if (!(norm_hi > norm_lo)) {
    throw std::invalid_argument("normalization range must satisfy lo < hi");
  }
  ColumnStats s = raw_stats(d.column(feature));
  const double width = norm_hi - norm_lo;
  s.v_min = std::clamp((s.min - norm_lo) / width, 0.0, 1.0);
  s.v_max = std::clamp((s.max - norm_lo) / width, 0.0, 1.0);
  return s;
}

NormalizationRange global_range(const Dataset& d,
                                std::span<const std::string> features) {
  if (features.empty()) throw std::invalid_argument("no features given");
  NormalizationRange r{std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()};
  for (const auto& f : features) {
    auto s = raw_stats(d.column(f));
    r.lo = std::min(r.lo, s.min);
    r.hi = std::max(r.hi, s.max);
  }
  if (r.hi <= r.lo) r.hi = r.lo + 1.0;
  return r;
}

void UsabilityConstraints::validate() const {
  if (!(cp_tolerance >= 0.0) || !(mean_tol >= 0.0) || !(std_tol >= 0.0)) {
    throw std::invalid_argument("usability tolerances must be >= 0");
  }
  if (!(beta_cap > 0.0 && beta_cap < 1.0)) {
    throw std::invalid_argument("beta_cap must lie in (0, 1)");
  }
}

const FeatureConstraintCheck* ConstraintReport::find(
    std::string_view feature) const {
  for (const auto& f : features) {
    if (f.feature == feature) return &f;
  }
  return nullptr;
}

namespace {

double relative_change(double before, double after) {
  const double diff = std::abs(after - before);
  return before == 0.0 ? diff : diff / std::abs(before);
}

}  // namespace

ConstraintReport validate_constraints(const Dataset& original,
                                      const Dataset& marked,
                                      const UsabilityConstraints& h,
                                      const CpVector& cp_orig,
                                      const CpVector& cp_marked) {
  if (!original.same_schema(marked)) {
    throw SchemaError("original and marked datasets have different schemas");
  }
  if (original.rows() != marked.rows()) {
    throw SchemaError("row-id sets differ (row counts differ)");
  }
  std::vector<std::size_t> order(original.rows());
  for (std::size_t r = 0; r < original.rows(); ++r) {
    auto m = marked.row_of(original.ids()[r]);
    if (!m) {
      throw SchemaError("row-id sets differ: '" + original.ids()[r] +
                        "' missing from marked dataset");
    }
    order[r] = *m;
  }

  ConstraintReport report;
  for (std::size_t j = 0; j < original.features(); ++j) {
    const auto& name = original.feature_names()[j];
    auto before = original.column(j);
    auto raw_after = marked.column(j);
    std::vector<double> after(before.size());
    for (std::size_t r = 0; r < before.size(); ++r) after[r] = raw_after[order[r]];

    const auto s0 = raw_stats(before);
    const auto s1 = raw_stats(after);
    FeatureConstraintCheck c;
    c.feature = name;
    c.cp_delta = std::abs(cp_marked.at(name).cp - cp_orig.at(name).cp);
    c.mean_rel = relative_change(s0.mean, s1.mean);
    c.std_rel = relative_change(s0.stddev, s1.stddev);
    c.min_equal = s0.min == s1.min;
    c.max_equal = s0.max == s1.max;
    if (h.integer_columns.count(name)) {
      for (double v : after) {
        if (v != std::round(v)) ++c.integer_violations;
      }
    }
    c.pass = c.cp_delta <= h.cp_tolerance && c.mean_rel <= h.mean_tol &&
             c.std_rel <= h.std_tol && c.integer_violations == 0 &&
             (!h.enforce_min_max || (c.min_equal && c.max_equal));
    report.pass = report.pass && c.pass;
    report.features.push_back(std::move(c));
  }
  return report;
}

}  // namespace wmark

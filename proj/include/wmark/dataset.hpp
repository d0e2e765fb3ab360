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

#ifndef WMARK_DATASET_HPP_
#define WMARK_DATASET_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wmark {

/// Malformed CSV input. The message names the offending row and column.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dataset violates a structural invariant (schema, ids, finiteness).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Id column value meaning "assign sequential ids 0..R-1".
inline constexpr std::string_view kSynthesizeIds = "synthesize";

/// Name given to the id column when ids are synthesized on load.
inline constexpr std::string_view kSynthesizedIdName = "row_id";

/// Immutable numeric table: A real-valued feature columns, one class-label
/// column and one row-id column. Storage is column-major. Any "mutation"
/// builds a new Dataset, so instances can be shared across threads.
class Dataset {
 public:
  /// Validates every invariant; throws SchemaError on violation.
  Dataset(std::vector<std::string> feature_names, std::string class_name,
          std::string id_name, std::vector<std::string> ids,
          std::vector<std::string> labels,
          std::vector<std::vector<double>> columns);

  std::size_t rows() const { return ids_.size(); }
  std::size_t features() const { return feature_names_.size(); }

  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  const std::string& class_name() const { return class_name_; }
  const std::string& id_name() const { return id_name_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<std::size_t> feature_index(std::string_view name) const;
  /// Like feature_index but throws SchemaError for unknown names.
  std::size_t require_feature(std::string_view name) const;

  std::span<const double> column(std::size_t j) const { return columns_[j]; }
  std::span<const double> column(std::string_view name) const {
    return columns_[require_feature(name)];
  }
  const std::vector<std::vector<double>>& columns() const { return columns_; }

  std::optional<std::size_t> row_of(std::string_view id) const;

  /// Copy with column `j` replaced.
  Dataset with_column(std::size_t j, std::vector<double> values) const;
  /// Copy with several columns replaced; `replacements` is indexed like the
  /// schema and empty entries keep the original column.
  Dataset with_columns(std::vector<std::vector<double>> replacements) const;
  /// Copy holding only the given rows, in the given order.
  Dataset select_rows(std::span<const std::size_t> rows) const;

  bool same_schema(const Dataset& other) const;

 private:
  std::vector<std::string> feature_names_;
  std::string class_name_;
  std::string id_name_;
  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> columns_;
  std::unordered_map<std::string, std::size_t> feature_lookup_;
  std::unordered_map<std::string, std::size_t> id_lookup_;
};

/// Parses CSV text (header row, comma separator, '.' decimal point).
/// `id_column` may be kSynthesizeIds.
Dataset parse_csv(std::istream& in, std::string_view class_column,
                  std::string_view id_column);

Dataset load_dataset(const std::filesystem::path& source,
                     std::string_view class_column,
                     std::string_view id_column);

/// Writes id, features, class. Values use the shortest round-trip
/// representation so a reload is bit-exact.
void write_csv(std::ostream& out, const Dataset& d);
void save_dataset(const std::filesystem::path& path, const Dataset& d);

struct ColumnStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
  double v_min = 0.0;  // min mapped through the reference range, in [0,1]
  double v_max = 0.0;
};

ColumnStats column_stats(const Dataset& d, std::string_view feature,
                         double norm_lo, double norm_hi);

/// Two-pass population mean/stddev and exact min/max of raw values.
ColumnStats raw_stats(std::span<const double> values);

struct NormalizationRange {
  double lo = 0.0;
  double hi = 1.0;
};

/// Smallest and largest value across the given features. When every value
/// is equal the range is widened by one unit so that it stays non-empty.
NormalizationRange global_range(const Dataset& d,
                                std::span<const std::string> features);

/// The usability constraint set. Defaults are the settings used throughout
/// the tool (2% cap on beta, 1e-3 relative moment tolerance).
struct UsabilityConstraints {
  double cp_tolerance = 1e-6;  // percentage points
  double mean_tol = 1e-3;
  double std_tol = 1e-3;
  bool enforce_min_max = true;
  /// Cells never leave the frozen histogram bin they started in.
  bool preserve_bins = true;
  double beta_cap = 0.02;
  std::set<std::string> integer_columns;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct FeatureConstraintCheck {
  std::string feature;
  double cp_delta = 0.0;   // |CP_W - CP_O|, percentage points
  double mean_rel = 0.0;   // |dmu| / |mu| (absolute when mu == 0)
  double std_rel = 0.0;    // |dsigma| / sigma (absolute when sigma == 0)
  bool min_equal = true;
  bool max_equal = true;
  std::size_t integer_violations = 0;
  bool pass = true;
};

struct ConstraintReport {
  std::vector<FeatureConstraintCheck> features;
  bool pass = true;

  const FeatureConstraintCheck* find(std::string_view feature) const;
};

struct CpVector;

/// Compares `marked` against `original` feature by feature. Rows are
/// aligned by id, so row order may differ.
ConstraintReport validate_constraints(const Dataset& original,
                                      const Dataset& marked,
                                      const UsabilityConstraints& h,
                                      const CpVector& cp_orig,
                                      const CpVector& cp_marked);

}  // namespace wmark

#endif  // WMARK_DATASET_HPP_

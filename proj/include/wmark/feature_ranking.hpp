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

#ifndef WMARK_FEATURE_RANKING_HPP_
#define WMARK_FEATURE_RANKING_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wmark/dataset.hpp"

namespace wmark {

/// Class labels mapped to dense integer codes in first-seen order.
struct EncodedLabels {
  std::vector<int> codes;
  std::vector<std::string> classes;

  static EncodedLabels encode(std::span<const std::string> labels);
};

/// Shannon entropy in bits. Throws std::invalid_argument on empty input.
double entropy(std::span<const std::string> labels);
double entropy(const EncodedLabels& labels);

/// Bin edges of one feature. Bins are [e_i, e_{i+1}) except the last one,
/// which is closed on the right.
struct FeatureBins {
  std::vector<double> edges;

  std::size_t count() const { return edges.size() - 1; }
  /// Bin index, or -1 when the value is outside [edges.front(), edges.back()].
  int locate(double value) const;
  /// Bin index with out-of-range values assigned to the outermost bins.
  int locate_clamped(double value) const;
};

/// Discretization for every feature of a schema. Edges are frozen from the
/// original data and reused for every later comparison.
class BinningSpec {
 public:
  BinningSpec() = default;
  BinningSpec(std::vector<std::string> features, std::vector<FeatureBins> bins);

  /// Equal-width bins over [min, max] of each column. A constant column
  /// gets a single bin [v, v + 1].
  static BinningSpec equal_width(const Dataset& d, std::size_t bin_count = 10);

  const FeatureBins& of(std::string_view feature) const;
  bool contains(std::string_view feature) const;
  const std::vector<std::string>& features() const { return features_; }
  const std::vector<FeatureBins>& bins() const { return bins_; }

 private:
  std::vector<std::string> features_;
  std::vector<FeatureBins> bins_;
};

/// IG(R, a) = H(R) - sum_j P(a = v_j) H(R | a = v_j) over bin indices.
/// Throws std::out_of_range when a value falls outside the bins.
double information_gain(const Dataset& d, std::string_view feature,
                        const BinningSpec& bins);
double information_gain(const Dataset& d, std::string_view feature,
                        const FeatureBins& bins);

/// Same quantity over precomputed bin indices (used in hot loops).
double information_gain(std::span<const int> bin_index, std::size_t bin_count,
                        const EncodedLabels& labels);

struct FeatureCp {
  std::string feature;
  double ig = 0.0;    // bits
  double cp = 0.0;    // percent
  std::size_t rank = 0;  // 1 = highest cp
};

struct CpVector {
  std::vector<FeatureCp> entries;  // schema order
  bool degenerate = false;          // every ig was zero

  const FeatureCp& at(std::string_view feature) const;
  /// Entries sorted by rank.
  std::vector<FeatureCp> ranked() const;
};

/// Builds a CpVector from information gains given in schema order.
CpVector cp_from_gains(std::span<const std::string> features,
                       std::span<const double> gains);

/// cp of every feature under frozen bins. Values outside the edges count
/// toward the outermost bin, so perturbed or attacked tables can be compared.
CpVector classification_potential(const Dataset& d, const BinningSpec& bins);

struct BetaBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Admissible watermark range for a feature with classification potential
/// `cp` (percent scale). Both ends shrink as cp grows.
BetaBounds beta_bounds(const ColumnStats& stats, double cp);

struct CandidateSet {
  std::vector<std::string> features;
  std::size_t excluded_top_t = 0;
};

class EmptyCandidateSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Features ranked below the top t whose cp does not exceed the threshold,
/// in ascending-cp order.
CandidateSet select_candidates(const CpVector& cp, std::size_t t,
                               double cp_threshold);

double median_cp(const CpVector& cp);

}  // namespace wmark

#endif  // WMARK_FEATURE_RANKING_HPP_

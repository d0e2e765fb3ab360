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

#ifndef WMARK_METRICS_HPP_
#define WMARK_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wmark/feature_ranking.hpp"

namespace wmark {

/// Probability mass over fixed bin edges.
struct Histogram {
  std::vector<double> edges;
  std::vector<double> mass;  // sums to 1

  /// Counts `values` into the bins (out-of-range values go to the end bins).
  static Histogram of(std::span<const double> values, const FeatureBins& bins);
  /// Normalizes raw counts.
  static Histogram from_counts(std::vector<double> edges,
                               std::span<const double> counts);
};

/// D_KL(P || Q) in bits. Terms with P(i) = 0 contribute nothing; Q(i) = 0
/// with P(i) > 0 yields +infinity. Throws std::invalid_argument when the
/// bin edges differ.
double kl_divergence(const Histogram& p, const Histogram& q);

/// Jensen-Shannon divergence in bits, in [0, 1].
double jsd(const Histogram& p, const Histogram& q);

struct BitCorrelation {
  double value = 0.0;
  /// At least one sequence was constant, so Pearson's r is undefined and the
  /// value is 1 for equal sequences, 0 otherwise.
  bool degenerate = false;
};

/// Pearson correlation of two 0/1 sequences of equal length.
BitCorrelation bit_correlation(std::span<const std::uint8_t> expected,
                               std::span<const std::uint8_t> decoded);

struct ClassificationStats {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  static ClassificationStats from_counts(std::size_t tp, std::size_t fp,
                                         std::size_t tn, std::size_t fn);
  /// Detection rate TP / (TP + FN), percent. 0 when undefined.
  double detection_rate() const;
  /// False alarm rate FP / (FP + TN), percent. 0 when undefined.
  double false_alarm_rate() const;
};

/// Binary confusion counts. Labels other than `positive` are negatives, but
/// more than two distinct labels overall is an error.
ClassificationStats classification_stats(std::span<const std::string> truth,
                                         std::span<const std::string> predicted,
                                         const std::string& positive);

}  // namespace wmark

#endif  // WMARK_METRICS_HPP_

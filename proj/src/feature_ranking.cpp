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

#include "wmark/feature_ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace wmark {

EncodedLabels EncodedLabels::encode(std::span<const std::string> labels) {
  EncodedLabels out;
  std::unordered_map<std::string, int> lookup;
  out.codes.reserve(labels.size());
  for (const auto& l : labels) {
    auto [it, inserted] =
        lookup.emplace(l, static_cast<int>(out.classes.size()));
    if (inserted) out.classes.push_back(l);
    out.codes.push_back(it->second);
  }
  return out;
}

namespace {

double entropy_of_counts(std::span<const std::size_t> counts,
                         std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

}  // namespace

double entropy(const EncodedLabels& labels) {
  if (labels.codes.empty()) {
    throw std::invalid_argument("entropy of an empty label list");
  }
  std::vector<std::size_t> counts(labels.classes.size(), 0);
  for (int c : labels.codes) ++counts[static_cast<std::size_t>(c)];
  return entropy_of_counts(counts, labels.codes.size());
}

double entropy(std::span<const std::string> labels) {
  return entropy(EncodedLabels::encode(labels));
}

int FeatureBins::locate(double value) const {
  if (value < edges.front() || value > edges.back()) return -1;
  return locate_clamped(value);
}

int FeatureBins::locate_clamped(double value) const {
  auto it = std::upper_bound(edges.begin(), edges.end(), value);
  auto idx = static_cast<int>(it - edges.begin()) - 1;
  return std::clamp(idx, 0, static_cast<int>(count()) - 1);
}

BinningSpec::BinningSpec(std::vector<std::string> features,
                         std::vector<FeatureBins> bins)
    : features_(std::move(features)), bins_(std::move(bins)) {
  if (features_.size() != bins_.size()) {
    throw std::invalid_argument("binning: feature/bin count mismatch");
  }
  for (const auto& b : bins_) {
    if (b.edges.size() < 2) {
      throw std::invalid_argument("binning: need at least two edges");
    }
    for (std::size_t i = 1; i < b.edges.size(); ++i) {
      if (!(b.edges[i] > b.edges[i - 1])) {
        throw std::invalid_argument("binning: edges must strictly increase");
      }
    }
  }
}

BinningSpec BinningSpec::equal_width(const Dataset& d, std::size_t bin_count) {
  if (bin_count == 0) throw std::invalid_argument("bin count must be >= 1");
  std::vector<FeatureBins> bins;
  for (std::size_t j = 0; j < d.features(); ++j) {
    auto col = d.column(j);
    auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    FeatureBins fb;
    if (hi == lo) {
      fb.edges = {lo, lo + 1.0};
    } else {
      fb.edges.resize(bin_count + 1);
      const double width = (hi - lo) / static_cast<double>(bin_count);
      for (std::size_t i = 0; i <= bin_count; ++i) {
        fb.edges[i] = lo + width * static_cast<double>(i);
      }
      fb.edges.front() = lo;
      fb.edges.back() = hi;
    }
    bins.push_back(std::move(fb));
  }
  return BinningSpec(d.feature_names(), std::move(bins));
}

const FeatureBins& BinningSpec::of(std::string_view feature) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i] == feature) return bins_[i];
  }
  throw std::out_of_range("no bins defined for feature '" +
                          std::string(feature) + "'");
}

bool BinningSpec::contains(std::string_view feature) const {
  return std::find(features_.begin(), features_.end(), feature) !=
         features_.end();
}

double information_gain(std::span<const int> bin_index, std::size_t bin_count,
                        const EncodedLabels& labels) {
  const std::size_t classes = labels.classes.size();
  std::vector<std::size_t> joint(bin_count * classes, 0);
  std::vector<std::size_t> class_counts(classes, 0);
  for (std::size_t r = 0; r < bin_index.size(); ++r) {
    const auto c = static_cast<std::size_t>(labels.codes[r]);
    ++joint[static_cast<std::size_t>(bin_index[r]) * classes + c];
    ++class_counts[c];
  }
  const std::size_t total = bin_index.size();
  const double h = entropy_of_counts(class_counts, total);
  double conditional = 0.0;
  for (std::size_t b = 0; b < bin_count; ++b) {
    std::span<const std::size_t> row(joint.data() + b * classes, classes);
    const std::size_t in_bin = std::accumulate(row.begin(), row.end(),
                                               std::size_t{0});
    if (in_bin == 0) continue;
    conditional += static_cast<double>(in_bin) / static_cast<double>(total) *
                   entropy_of_counts(row, in_bin);
  }
  return std::clamp(h - conditional, 0.0, h);
}

double information_gain(const Dataset& d, std::string_view feature,
                        const FeatureBins& fb) {
  auto col = d.column(feature);
  std::vector<int> idx(col.size());
  for (std::size_t r = 0; r < col.size(); ++r) {
    idx[r] = fb.locate(col[r]);
    if (idx[r] < 0) {
      throw std::out_of_range("bins of '" + std::string(feature) +
                              "' do not cover value at row " +
                              std::to_string(r));
    }
  }
  return information_gain(idx, fb.count(), EncodedLabels::encode(d.labels()));
}

double information_gain(const Dataset& d, std::string_view feature,
                        const BinningSpec& bins) {
  return information_gain(d, feature, bins.of(feature));
}

const FeatureCp& CpVector::at(std::string_view feature) const {
  for (const auto& e : entries) {
    if (e.feature == feature) return e;
  }
  throw std::out_of_range("no cp entry for '" + std::string(feature) + "'");
}

std::vector<FeatureCp> CpVector::ranked() const {
  auto out = entries;
  std::sort(out.begin(), out.end(),
            [](const FeatureCp& a, const FeatureCp& b) { return a.rank < b.rank; });
  return out;
}

CpVector cp_from_gains(std::span<const std::string> features,
                       std::span<const double> gains) {
  CpVector out;
  const double total = std::accumulate(gains.begin(), gains.end(), 0.0);
  out.degenerate = !(total > 0.0);
  for (std::size_t j = 0; j < features.size(); ++j) {
    FeatureCp e;
    e.feature = features[j];
    e.ig = gains[j];
    e.cp = out.degenerate ? 0.0 : gains[j] / total * 100.0;
    out.entries.push_back(std::move(e));
  }
  std::vector<std::size_t> order(out.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.entries[a].cp > out.entries[b].cp;
  });
  for (std::size_t k = 0; k < order.size(); ++k) out.entries[order[k]].rank = k + 1;
  return out;
}

CpVector classification_potential(const Dataset& d, const BinningSpec& bins) {
  const auto labels = EncodedLabels::encode(d.labels());
  std::vector<double> gains;
  gains.reserve(d.features());
  std::vector<int> idx(d.rows());
  for (const auto& f : d.feature_names()) {
    const auto& fb = bins.of(f);
    auto col = d.column(f);
    for (std::size_t r = 0; r < col.size(); ++r) idx[r] = fb.locate_clamped(col[r]);
    gains.push_back(information_gain(idx, fb.count(), labels));
  }
  return cp_from_gains(d.feature_names(), gains);
}

BetaBounds beta_bounds(const ColumnStats& stats, double cp) {
  const double scale = 1.0 / (1.0 + cp);
  return {scale * (stats.v_min / (stats.v_max + 1.0)),
          scale * (stats.v_max / (stats.v_min + 1.0))};
}

CandidateSet select_candidates(const CpVector& cp, std::size_t t,
                               double cp_threshold) {
  if (t >= cp.entries.size()) {
    throw std::invalid_argument("t must be smaller than the feature count");
  }
  std::vector<FeatureCp> kept;
  for (const auto& e : cp.entries) {
    if (e.rank > t && e.cp <= cp_threshold) kept.push_back(e);
  }
  if (kept.empty()) {
    throw EmptyCandidateSet("no feature survives rank > " + std::to_string(t) +
                            " and cp <= " + std::to_string(cp_threshold));
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const FeatureCp& a, const FeatureCp& b) { return a.cp < b.cp; });
  CandidateSet out;
  out.excluded_top_t = t;
  for (auto& e : kept) out.features.push_back(std::move(e.feature));
  return out;
}

double median_cp(const CpVector& cp) {
  if (cp.entries.empty()) throw std::invalid_argument("empty cp vector");
  std::vector<double> v;
  for (const auto& e : cp.entries) v.push_back(e.cp);
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace wmark

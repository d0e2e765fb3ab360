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

#include "wmark/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace wmark {

Histogram Histogram::of(std::span<const double> values, const FeatureBins& bins) {
  std::vector<double> counts(bins.count(), 0.0);
  for (double v : values) counts[static_cast<std::size_t>(bins.locate_clamped(v))] += 1.0;
  return from_counts(bins.edges, counts);
}

Histogram Histogram::from_counts(std::vector<double> edges,
                                 std::span<const double> counts) {
  if (edges.size() != counts.size() + 1) {
    throw std::invalid_argument("histogram: need one more edge than counts");
  }
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("histogram: no mass");
  Histogram h;
  h.edges = std::move(edges);
  h.mass.reserve(counts.size());
  for (double c : counts) {
    if (c < 0.0) throw std::invalid_argument("histogram: negative count");
    h.mass.push_back(c / total);
  }
  return h;
}

namespace {

void require_same_bins(const Histogram& p, const Histogram& q) {
  if (p.edges != q.edges || p.mass.size() != q.mass.size()) {
    throw std::invalid_argument("histograms use different bins");
  }
}

double kl_unchecked(std::span<const double> p, std::span<const double> q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

}  // namespace

double kl_divergence(const Histogram& p, const Histogram& q) {
  require_same_bins(p, q);
  return kl_unchecked(p.mass, q.mass);
}

double jsd(const Histogram& p, const Histogram& q) {
  require_same_bins(p, q);
  std::vector<double> m(p.mass.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (p.mass[i] + q.mass[i]);
  const double v = 0.5 * kl_unchecked(p.mass, m) + 0.5 * kl_unchecked(q.mass, m);
  return std::clamp(v, 0.0, 1.0);
}

BitCorrelation bit_correlation(std::span<const std::uint8_t> expected,
                               std::span<const std::uint8_t> decoded) {
  if (expected.size() != decoded.size()) {
    throw std::invalid_argument("bit_correlation: length mismatch");
  }
  if (expected.empty()) throw std::invalid_argument("bit_correlation: empty input");
  const double n = static_cast<double>(expected.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    mx += expected[i];
    my += decoded[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double dx = expected[i] - mx;
    const double dy = decoded[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    const bool equal = std::equal(expected.begin(), expected.end(), decoded.begin());
    return {equal ? 1.0 : 0.0, true};
  }
  return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), false};
}

ClassificationStats ClassificationStats::from_counts(std::size_t tp, std::size_t fp,
                                                     std::size_t tn, std::size_t fn) {
  return {tp, fp, tn, fn};
}

double ClassificationStats::detection_rate() const {
  return tp + fn ? 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
}

double ClassificationStats::false_alarm_rate() const {
  return fp + tn ? 100.0 * static_cast<double>(fp) / static_cast<double>(fp + tn) : 0.0;
}

ClassificationStats classification_stats(std::span<const std::string> truth,
                                         std::span<const std::string> predicted,
                                         const std::string& positive) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("classification_stats: length mismatch");
  }
  std::set<std::string> labels(truth.begin(), truth.end());
  labels.insert(predicted.begin(), predicted.end());
  labels.insert(positive);
  if (labels.size() > 2) {
    throw std::invalid_argument("classification_stats: labels are not binary");
  }
  ClassificationStats s;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] == positive;
    const bool p = predicted[i] == positive;
    if (t && p) {
      ++s.tp;
    } else if (t) {
      ++s.fn;
    } else if (p) {
      ++s.fp;
    } else {
      ++s.tn;
    }
  }
  return s;
}

}  // namespace wmark

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

#include "wmark/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wmark/feature_ranking.hpp"

namespace wmark {

GaussianNaiveBayes GaussianNaiveBayes::train(const Dataset& d) {
  const auto enc = EncodedLabels::encode(d.labels());
  if (enc.classes.size() != 2) {
    throw std::invalid_argument("naive Bayes reference model needs a binary class");
  }
  GaussianNaiveBayes m;
  // Sorted class order keeps the model independent of row order.
  m.classes = enc.classes;
  std::sort(m.classes.begin(), m.classes.end());
  const std::size_t k = m.classes.size();
  const std::size_t a = d.features();
  std::vector<int> cls(d.rows());
  std::vector<double> count(k, 0.0);
  for (std::size_t r = 0; r < d.rows(); ++r) {
    cls[r] = d.labels()[r] == m.classes[0] ? 0 : 1;
    count[static_cast<std::size_t>(cls[r])] += 1.0;
  }
  m.means.assign(k, std::vector<double>(a, 0.0));
  m.variances.assign(k, std::vector<double>(a, 0.0));
  for (std::size_t j = 0; j < a; ++j) {
    auto col = d.column(j);
    for (std::size_t r = 0; r < d.rows(); ++r) {
      m.means[static_cast<std::size_t>(cls[r])][j] += col[r];
    }
    for (std::size_t c = 0; c < k; ++c) m.means[c][j] /= count[c];
    for (std::size_t r = 0; r < d.rows(); ++r) {
      const auto c = static_cast<std::size_t>(cls[r]);
      const double dv = col[r] - m.means[c][j];
      m.variances[c][j] += dv * dv;
    }
    for (std::size_t c = 0; c < k; ++c) {
      m.variances[c][j] = std::max(m.variances[c][j] / count[c], kVarianceFloor);
    }
  }
  const double n = static_cast<double>(d.rows());
  for (std::size_t c = 0; c < k; ++c) m.log_priors.push_back(std::log(count[c] / n));
  return m;
}

std::vector<std::string> GaussianNaiveBayes::predict(const Dataset& d) const {
  if (d.features() != means.front().size()) {
    throw std::invalid_argument("naive Bayes: feature count mismatch");
  }
  std::vector<std::string> out;
  out.reserve(d.rows());
  for (std::size_t r = 0; r < d.rows(); ++r) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < classes.size(); ++c) {
      double s = log_priors[c];
      for (std::size_t j = 0; j < d.features(); ++j) {
        const double var = variances[c][j];
        const double dv = d.column(j)[r] - means[c][j];
        s += -0.5 * std::log(2.0 * std::numbers::pi * var) - dv * dv / (2.0 * var);
      }
      if (s > best_score) {
        best_score = s;
        best = c;
      }
    }
    out.push_back(classes[best]);
  }
  return out;
}

}  // namespace wmark

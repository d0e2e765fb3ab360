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

#include "wmark/synthetic.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmark/random.hpp"

namespace wmark {

namespace {

// Every weak column bottoms out at the same value.
constexpr double kWeakFloor = 0.5;

}  // namespace

Dataset make_fixture(const FixtureConfig& cfg) {
  if (cfg.rows < 2) throw std::invalid_argument("fixture needs at least 2 rows");
  if (cfg.features < 2) throw std::invalid_argument("fixture needs at least 2 features");
  if (!(cfg.positive_rate > 0.0 && cfg.positive_rate < 1.0)) {
    throw std::invalid_argument("positive_rate must lie in (0, 1)");
  }
  const std::size_t strong = cfg.features / 2;
  const std::size_t weak = cfg.features - strong;

  std::mt19937_64 label_rng(derive_seed(cfg.seed, 0));
  std::bernoulli_distribution positive(cfg.positive_rate);
  std::vector<std::string> ids(cfg.rows);
  std::vector<std::string> labels(cfg.rows);
  std::vector<int> y(cfg.rows);
  for (std::size_t r = 0; r < cfg.rows; ++r) {
    ids[r] = std::to_string(r);
    y[r] = positive(label_rng) ? 1 : 0;
    labels[r] = y[r] ? "yes" : "no";
  }

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (std::size_t j = 0; j < strong; ++j) {
    std::mt19937_64 rng(derive_seed(cfg.seed, 100 + j));
    std::normal_distribution<double> noise(0.0, 5.0);
    const double shift = 6.0 + 2.0 * static_cast<double>(j);
    std::vector<double> col(cfg.rows);
    for (std::size_t r = 0; r < cfg.rows; ++r) {
      col[r] = 60.0 + shift * y[r] + noise(rng);
    }
    names.push_back("s" + std::to_string(j));
    columns.push_back(std::move(col));
  }
  for (std::size_t j = 0; j < weak; ++j) {
    std::mt19937_64 rng(derive_seed(cfg.seed, 200 + j));
    std::gamma_distribution<double> skew(4.0, 5.0);
    const double shift = 0.4 + 0.1 * static_cast<double>(j);
    std::vector<double> col(cfg.rows);
    for (std::size_t r = 0; r < cfg.rows; ++r) {
      col[r] = skew(rng) + shift * y[r];
    }
    const double low = *std::min_element(col.begin(), col.end());
    for (auto& v : col) v += kWeakFloor - low;
    names.push_back("w" + std::to_string(j));
    columns.push_back(std::move(col));
  }
  return Dataset(std::move(names), "diagnosis", "id", std::move(ids),
                 std::move(labels), std::move(columns));
}

}  // namespace wmark

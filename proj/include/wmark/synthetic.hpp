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

// Seeded synthetic clinical-style table with a planted class dependency.

#ifndef WMARK_SYNTHETIC_HPP_
#define WMARK_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>

#include "wmark/dataset.hpp"

namespace wmark {

struct FixtureConfig {
  std::size_t rows = 5000;
  /// Half the features are strongly class-dependent Gaussians ("s0", "s1",
  /// ...); the other half are skewed positive values with a weak class
  /// shift ("w0", "w1", ...) that all share the minimum 0.5.
  std::size_t features = 8;
  std::uint64_t seed = 20260101;
  /// Probability of the positive label "yes".
  double positive_rate = 0.5;
};

/// Ids are "0".."R-1", the class column is "diagnosis" with labels
/// "yes"/"no". Identical configs give identical tables.
Dataset make_fixture(const FixtureConfig& cfg);

}  // namespace wmark

#endif  // WMARK_SYNTHETIC_HPP_

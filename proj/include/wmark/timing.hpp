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

// Wall-clock scaling of embedding and decoding over synthetic tables.

#ifndef WMARK_TIMING_HPP_
#define WMARK_TIMING_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wmark {

struct TimingPoint {
  std::size_t rows = 0;
  double embed_seconds = 0.0;   // median over repetitions
  double decode_seconds = 0.0;  // median over repetitions
};

struct TimingReport {
  std::vector<TimingPoint> points;
  /// Coefficient of determination of a least-squares line through
  /// (rows, seconds). 1 when the times are all equal.
  double embed_r2 = 0.0;
  double decode_r2 = 0.0;
};

/// Embeds a 16-bit mark into fixtures of each size with fixed betas and
/// decodes it again, timing both steps.
TimingReport measure_scaling(std::span<const std::size_t> sizes, std::uint64_t seed,
                             std::size_t repetitions = 5);

double linear_r2(std::span<const double> x, std::span<const double> y);

}  // namespace wmark

#endif  // WMARK_TIMING_HPP_

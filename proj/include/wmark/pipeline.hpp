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

// End-to-end protection: rank, select, optimize, embed, and build the key.

#ifndef WMARK_PIPELINE_HPP_
#define WMARK_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "wmark/codec.hpp"
#include "wmark/dataset.hpp"
#include "wmark/feature_ranking.hpp"
#include "wmark/pso.hpp"

namespace wmark {

class InfeasibleOptimization : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  std::size_t length = 16;
  std::uint64_t seed = 0x5eed;
  /// Number of top-ranked features that are never watermarked.
  std::size_t top_t = 1;
  /// Candidates need cp <= threshold; unset means the median cp.
  std::optional<double> cp_threshold;
  std::size_t bin_count = 10;
  UsabilityConstraints h;
  /// Particle count, iterations and c1/c2. The seed is derived from `seed`.
  pso::SwarmConfig swarm;
  /// Independent swarm runs tried before giving up as infeasible.
  std::size_t search_attempts = 3;
  /// Fixed decoder gamma for every feature; unset picks it per feature
  /// from beta and the column maximum.
  std::optional<double> gamma;
  /// Explicit watermark; unset draws `length` bits from `seed`.
  std::optional<Watermark> bits;
};

struct Ranking {
  BinningSpec bins;
  CpVector cp;
};

Ranking rank_features(const Dataset& d, std::size_t bin_count = 10);

struct Protection {
  Ranking ranking;
  CandidateSet candidates;
  Watermark bits;
  CreationResult creation;
  Dataset marked;
  WatermarkKey key;
  ConstraintReport constraints;
};

/// Gamma per feature in the order of `betas`, from the policy in `cfg`.
std::vector<double> choose_gamma(const Dataset& d, const BetaMatrix& betas,
                                 std::optional<double> fixed);

/// Assembles the decoding key from an embedding.
WatermarkKey make_key(const Dataset& d, const BetaMatrix& betas, const Watermark& w,
                      std::vector<double> gamma, const BinningSpec& bins,
                      DeltaMatrix delta);

/// Runs the full chain. Throws InfeasibleOptimization when the swarm finds
/// no point that satisfies the usability constraints.
Protection protect(const Dataset& d, const PipelineConfig& cfg);

/// Embeds with caller-supplied betas, skipping the search.
Protection protect_with_betas(const Dataset& d, const BetaMatrix& betas,
                              const Watermark& w, const PipelineConfig& cfg);

}  // namespace wmark

#endif  // WMARK_PIPELINE_HPP_

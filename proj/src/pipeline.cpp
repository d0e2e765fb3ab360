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

#include "wmark/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

#include "wmark/decoder.hpp"
#include "wmark/random.hpp"

namespace wmark {

namespace {

constexpr std::uint64_t kBitsStream = 1;
// Swarm attempts use streams 16, 17, ...
constexpr std::uint64_t kSwarmStream = 16;

}  // namespace

Ranking rank_features(const Dataset& d, std::size_t bin_count) {
  Ranking r;
  r.bins = BinningSpec::equal_width(d, bin_count);
  r.cp = classification_potential(d, r.bins);
  return r;
}

std::vector<double> choose_gamma(const Dataset& d, const BetaMatrix& betas,
                                 std::optional<double> fixed) {
  std::vector<double> out;
  out.reserve(betas.entries.size());
  for (const auto& e : betas.entries) {
    if (fixed) {
      out.push_back(*fixed);
      continue;
    }
    const auto col = d.column(e.feature);
    const double max = *std::max_element(col.begin(), col.end());
    out.push_back(default_gamma(e.beta, max));
  }
  return out;
}

WatermarkKey make_key(const Dataset& d, const BetaMatrix& betas, const Watermark& w,
                      std::vector<double> gamma, const BinningSpec& bins,
                      DeltaMatrix delta) {
  WatermarkKey key;
  key.class_column = d.class_name();
  key.id_column = d.id_name();
  for (const auto& e : betas.entries) key.features.push_back(e.feature);
  key.betas = betas;
  key.bits = w;
  key.gamma = std::move(gamma);
  key.bins = bins;
  key.delta = std::move(delta);
  key.validate();
  return key;
}

namespace {

Protection finish(const Dataset& d, Ranking ranking, CandidateSet candidates,
                  const Watermark& w, CreationResult creation,
                  const PipelineConfig& cfg) {
  auto embedded = embed(d, w, creation.betas, candidates, cfg.h, ranking.bins);
  auto gamma = choose_gamma(d, creation.betas, cfg.gamma);
  auto key = make_key(d, creation.betas, w, std::move(gamma), ranking.bins,
                      std::move(embedded.delta));
  const auto cp_marked = classification_potential(embedded.marked, ranking.bins);
  auto report = validate_constraints(d, embedded.marked, cfg.h, ranking.cp, cp_marked);
  return Protection{std::move(ranking), std::move(candidates), w,
                    std::move(creation), std::move(embedded.marked),
                    std::move(key), std::move(report)};
}

Watermark pick_bits(const PipelineConfig& cfg) {
  if (cfg.bits) return *cfg.bits;
  return generate_bits(cfg.length, derive_seed(cfg.seed, kBitsStream));
}

CandidateSet pick_candidates(const Ranking& ranking, const PipelineConfig& cfg) {
  const double thr = cfg.cp_threshold ? *cfg.cp_threshold : median_cp(ranking.cp);
  return select_candidates(ranking.cp, cfg.top_t, thr);
}

}  // namespace

Protection protect(const Dataset& d, const PipelineConfig& cfg) {
  cfg.h.validate();
  auto ranking = rank_features(d, cfg.bin_count);
  auto candidates = pick_candidates(ranking, cfg);
  const auto w = pick_bits(cfg);
  if (cfg.search_attempts == 0) {
    throw std::invalid_argument("search_attempts must be >= 1");
  }
  auto swarm = cfg.swarm;
  CreationResult creation;
  for (std::size_t attempt = 0; attempt < cfg.search_attempts; ++attempt) {
    swarm.seed = derive_seed(cfg.seed, kSwarmStream + attempt);
    creation = create_watermark_params(d, candidates, ranking.cp, cfg.h, swarm,
                                       ranking.bins, w);
    if (creation.feasible) break;
  }
  if (!creation.feasible) {
    throw InfeasibleOptimization(
        "no beta vector satisfies the usability constraints (best penalty " +
        std::to_string(creation.fitness.penalty) + ")");
  }
  return finish(d, std::move(ranking), std::move(candidates), w,
                std::move(creation), cfg);
}

Protection protect_with_betas(const Dataset& d, const BetaMatrix& betas,
                              const Watermark& w, const PipelineConfig& cfg) {
  cfg.h.validate();
  auto ranking = rank_features(d, cfg.bin_count);
  CandidateSet candidates;
  for (const auto& e : betas.entries) candidates.features.push_back(e.feature);
  CreationResult creation;
  creation.betas = betas;
  creation.feasible = true;
  return finish(d, std::move(ranking), std::move(candidates), w,
                std::move(creation), cfg);
}

}  // namespace wmark

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

#ifndef WMARK_CODEC_HPP_
#define WMARK_CODEC_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wmark/dataset.hpp"
#include "wmark/feature_ranking.hpp"
#include "wmark/pso.hpp"

namespace wmark {

/// The embedded bit string, most significant bit first.
class Watermark {
 public:
  Watermark() = default;
  explicit Watermark(std::vector<std::uint8_t> bits);

  /// Parses a string of '0'/'1' characters of any non-zero length.
  static Watermark from_string(std::string_view text);

  std::size_t length() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t k) const { return bits_[k]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::string to_string() const;

  friend bool operator==(const Watermark&, const Watermark&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

bool is_supported_length(std::size_t length);

/// Deterministic pseudo-random bits. Lengths other than 8/16/32/64 need
/// `allow_any_length`.
Watermark generate_bits(std::size_t length, std::uint64_t seed,
                        bool allow_any_length = false);

struct BetaEntry {
  std::string feature;
  double beta = 0.0;
  BetaBounds bounds;   // from the cp-dependent range formula
  double upper = 0.0;  // min(bounds.max, beta_cap)
};

struct BetaMatrix {
  std::vector<BetaEntry> entries;  // candidate-set order

  const BetaEntry& at(std::string_view feature) const;
  std::vector<double> values() const;
};

/// One recorded change: eta = beta * v, v being the cell value just before
/// the bit was applied. Skipped cells were left untouched.
struct DeltaCell {
  double eta = 0.0;
  bool skipped = false;
};

struct DeltaSummary {
  std::string feature;
  double beta = 0.0;
  double total_abs_change = 0.0;
  std::size_t skipped = 0;
};

/// Per (feature, bit, row) record of every change made during embedding.
/// Row ids are those of the original dataset, so the matrix stays aligned
/// after rows are inserted, deleted or reordered.
class DeltaMatrix {
 public:
  DeltaMatrix() = default;
  DeltaMatrix(std::vector<std::string> features, std::vector<double> betas,
              std::size_t bit_count, std::vector<std::string> row_ids);

  std::size_t feature_count() const { return features_.size(); }
  std::size_t bit_count() const { return bit_count_; }
  std::size_t row_count() const { return row_ids_.size(); }
  const std::vector<std::string>& features() const { return features_; }
  const std::vector<std::string>& row_ids() const { return row_ids_; }
  double beta(std::size_t feature) const { return betas_[feature]; }

  std::optional<std::size_t> row_of(std::string_view id) const;

  DeltaCell& at(std::size_t feature, std::size_t bit, std::size_t row) {
    return cells_[feature][bit * row_ids_.size() + row];
  }
  const DeltaCell& at(std::size_t feature, std::size_t bit,
                      std::size_t row) const {
    return cells_[feature][bit * row_ids_.size() + row];
  }
  /// All cells of one feature laid out bit-major.
  std::span<DeltaCell> feature_cells(std::size_t feature) {
    return cells_[feature];
  }
  std::span<const DeltaCell> feature_cells(std::size_t feature) const {
    return cells_[feature];
  }

  DeltaSummary summary(std::size_t feature) const;

 private:
  std::vector<std::string> features_;
  std::vector<double> betas_;
  std::size_t bit_count_ = 0;
  std::vector<std::string> row_ids_;
  std::unordered_map<std::string, std::size_t> row_lookup_;
  std::vector<std::vector<DeltaCell>> cells_;
};

/// Everything the owner keeps secret; decoding needs nothing else.
struct WatermarkKey {
  static constexpr int kFormatVersion = 1;

  int version = kFormatVersion;
  std::string class_column;
  std::string id_column;
  std::vector<std::string> features;
  BetaMatrix betas;
  Watermark bits;
  std::vector<double> gamma;  // per feature
  BinningSpec bins;
  DeltaMatrix delta;

  /// Throws std::invalid_argument if the pieces disagree.
  void validate() const;
};

/// Per-cell constraints applied while embedding. A cell that would break
/// one of them for the current bit is skipped for that bit.
class CellGuard {
 public:
  CellGuard(std::span<const double> original, const FeatureBins* bins,
            bool enforce_min_max, bool integer_valued);

  bool allows(std::size_t row, double next) const;

 private:
  struct Window {
    double lo;
    double hi;
    bool hi_inclusive;
  };
  std::vector<Window> windows_;
  bool integer_valued_ = false;
};

/// Applies every bit (MSB first) to one column in place. Each bit is
/// applied to all rows before the next. `out` may be empty; otherwise it
/// receives bit_count * rows cells, bit-major.
void embed_column(std::span<double> values, double beta, const Watermark& w,
                  const CellGuard& guard, std::span<DeltaCell> out);

struct EmbedResult {
  Dataset marked;
  DeltaMatrix delta;
};

EmbedResult embed(const Dataset& d, const Watermark& w, const BetaMatrix& betas,
                  const CandidateSet& f, const UsabilityConstraints& h,
                  const BinningSpec& bins);

struct FitnessBreakdown {
  double value = 0.0;
  double objective = 0.0;  // sum of betas
  double penalty = 0.0;
  double cp_violation = 0.0;
  double moment_violation = 0.0;
  double range_violation = 0.0;
  bool feasible = true;
};

/// Constrained objective for the optimizer: sum of betas minus a penalty
/// of 10 per unit of constraint violation. Infeasible points additionally
/// lose the largest attainable objective, so any feasible point beats any
/// infeasible one. Precomputes everything that does not depend on beta.
class FitnessEvaluator {
 public:
  FitnessEvaluator(const Dataset& d, const CandidateSet& f,
                   const UsabilityConstraints& h, const BinningSpec& bins,
                   const Watermark& bits, std::vector<double> upper_bounds);

  FitnessBreakdown evaluate(std::span<const double> betas) const;
  double operator()(std::span<const double> betas) const {
    return evaluate(betas).value;
  }

  const CpVector& original_cp() const { return cp_original_; }

 private:
  struct Candidate {
    std::size_t column;
    std::vector<double> values;
    CellGuard guard;
    FeatureBins bins;
    ColumnStats stats;
  };

  UsabilityConstraints h_;
  Watermark bits_;
  std::vector<std::string> feature_names_;
  EncodedLabels labels_;
  std::vector<double> gains_;
  CpVector cp_original_;
  std::vector<Candidate> candidates_;
  double max_objective_ = 0.0;
};

double fitness(const Dataset& d, std::span<const double> betas,
               const CandidateSet& f, const UsabilityConstraints& h,
               const BinningSpec& bins, const Watermark& bits);

struct CreationResult {
  BetaMatrix betas;
  FitnessBreakdown fitness;
  bool feasible = false;
  /// The raw swarm run. `betas` may sit above search.best_position because
  /// a feasible swarm optimum is pushed coordinate by coordinate toward the
  /// upper bounds while it stays feasible.
  pso::Result search;
};

/// Searches the per-feature beta box with the swarm. Bounds come from the
/// cp-dependent range capped by h.beta_cap; V_min/V_max use `norm`.
CreationResult create_watermark_params(const Dataset& d, const CandidateSet& f,
                                       const CpVector& cp,
                                       const UsabilityConstraints& h,
                                       const pso::SwarmConfig& cfg,
                                       const BinningSpec& bins,
                                       const Watermark& bits,
                                       const NormalizationRange& norm);

/// Same, with the default normalization range (global range of the
/// candidate features).
CreationResult create_watermark_params(const Dataset& d, const CandidateSet& f,
                                       const CpVector& cp,
                                       const UsabilityConstraints& h,
                                       const pso::SwarmConfig& cfg,
                                       const BinningSpec& bins,
                                       const Watermark& bits);

}  // namespace wmark

#endif  // WMARK_CODEC_HPP_

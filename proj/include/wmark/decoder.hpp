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

#ifndef WMARK_DECODER_HPP_
#define WMARK_DECODER_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmark/codec.hpp"
#include "wmark/dataset.hpp"

namespace wmark {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every vote for a bit was a cross.
class UndecodableBit : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

/// Decoder width tau = beta / gamma. gamma must lie in (0, 1).
double compute_tau(double beta, double gamma);

/// gamma = clamp(1 / (2 * beta * max_value), 0.05, 0.95). A clean bit-0
/// residual is beta^2 * v, so tau = beta / gamma keeps a 2x margin over the
/// largest cell.
double default_gamma(double beta, double max_value);

struct FeatureDecoderParams {
  double beta = 0.0;
  double gamma = 0.5;
  double tau = 0.0;
};

struct DecoderParams {
  std::vector<FeatureDecoderParams> features;  // key feature order

  /// Takes beta and gamma from the key; tau follows from them.
  static DecoderParams from_key(const WatermarkKey& key);
};

enum class CellVote : std::uint8_t { kOne, kZero, kCross };

/// Reads one cell: eta_d = beta * v_w, residual = eta_d - eta_recorded.
/// residual <= 0 reads 1, 0 < residual <= tau reads 0, larger is a cross.
CellVote detect_cell_bit(double v_w, double eta_recorded, double beta,
                         double tau);

struct VoteTally {
  std::size_t ones = 0;
  std::size_t zeros = 0;
  std::size_t crosses = 0;

  void add(CellVote v);
  VoteTally& merge(const VoteTally& other);
  std::size_t votes() const { return ones + zeros + crosses; }
};

struct MajorityResult {
  std::uint8_t bit = 0;
  bool tie = false;
};

/// Crosses are ignored; a tie decodes 0 and is flagged. Throws
/// UndecodableBit when no 0/1 vote exists.
MajorityResult majority_vote(const VoteTally& tally);

enum class Verdict { kMatch, kPartial, kCorrupted };

std::string to_string(Verdict v);

struct MatchReport {
  double bit_accuracy = 0.0;
  double correlation = 0.0;
  bool correlation_degenerate = false;
  double cross_rate = 0.0;
  Verdict verdict = Verdict::kCorrupted;
};

struct FeatureDecode {
  std::string feature;
  std::vector<std::uint8_t> bits;
  std::vector<VoteTally> tallies;     // per bit, MSB first
  std::vector<bool> undecodable;      // all votes were crosses
};

struct DecodedWatermark {
  std::vector<std::uint8_t> bits;        // combined across features
  std::vector<VoteTally> tallies;        // per bit, summed over features
  std::vector<bool> undecodable;
  std::vector<FeatureDecode> per_feature;
  std::vector<std::string> warnings;
  std::size_t surviving_rows = 0;
  std::size_t unknown_rows = 0;
  MatchReport match;

  std::string to_string() const;
};

/// Recovers the watermark from a possibly attacked dataset using only the
/// key. Rows are matched to the key by id; rows the key does not know are
/// ignored. Bits are read LSB first and peeled off after each vote.
DecodedWatermark decode(const Dataset& attacked, const WatermarkKey& key,
                        const DecoderParams& params);

DecodedWatermark decode(const Dataset& attacked, const WatermarkKey& key);

}  // namespace wmark

#endif  // WMARK_DECODER_HPP_

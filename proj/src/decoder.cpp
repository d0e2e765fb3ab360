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

#include "wmark/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "wmark/metrics.hpp"

namespace wmark {

double compute_tau(double beta, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in (0, 1)");
  }
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  return beta / gamma;
}

double default_gamma(double beta, double max_value) {
  const double scale = 2.0 * beta * std::abs(max_value);
  if (!(scale > 0.0)) return 0.95;
  return std::clamp(1.0 / scale, 0.05, 0.95);
}

DecoderParams DecoderParams::from_key(const WatermarkKey& key) {
  DecoderParams p;
  for (std::size_t i = 0; i < key.features.size(); ++i) {
    FeatureDecoderParams f;
    f.beta = key.betas.entries.at(i).beta;
    f.gamma = key.gamma.at(i);
    f.tau = f.beta > 0.0 ? compute_tau(f.beta, f.gamma) : 0.0;
    p.features.push_back(f);
  }
  return p;
}

CellVote detect_cell_bit(double v_w, double eta_recorded, double beta,
                         double tau) {
  const double eta_d = beta * v_w;
  const double residual = eta_d - eta_recorded;
  if (residual <= 0.0) return CellVote::kOne;
  if (residual <= tau) return CellVote::kZero;
  return CellVote::kCross;
}

void VoteTally::add(CellVote v) {
  switch (v) {
    case CellVote::kOne:
      ++ones;
      break;
    case CellVote::kZero:
      ++zeros;
      break;
    case CellVote::kCross:
      ++crosses;
      break;
  }
}

VoteTally& VoteTally::merge(const VoteTally& other) {
  ones += other.ones;
  zeros += other.zeros;
  crosses += other.crosses;
  return *this;
}

MajorityResult majority_vote(const VoteTally& tally) {
  if (tally.ones + tally.zeros == 0) {
    throw UndecodableBit("bit is undecodable: all " +
                         std::to_string(tally.crosses) + " votes are crosses");
  }
  return {static_cast<std::uint8_t>(tally.ones > tally.zeros ? 1 : 0),
          tally.ones == tally.zeros};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kMatch:
      return "match";
    case Verdict::kPartial:
      return "partial";
    case Verdict::kCorrupted:
      return "corrupted";
  }
  return "corrupted";
}

std::string DecodedWatermark::to_string() const {
  std::string s;
  for (auto b : bits) s.push_back(static_cast<char>('0' + b));
  return s;
}

namespace {

struct RowPair {
  std::size_t attacked;
  std::size_t keyed;
};

FeatureDecode decode_feature(std::span<const double> column,
                             std::span<const RowPair> rows,
                             const DeltaMatrix& delta, std::size_t feature,
                             const FeatureDecoderParams& p,
                             std::vector<std::string>& warnings) {
  const std::size_t l = delta.bit_count();
  FeatureDecode out;
  out.feature = delta.features()[feature];
  out.bits.assign(l, 0);
  out.tallies.assign(l, {});
  out.undecodable.assign(l, false);

  std::vector<double> working;
  working.reserve(rows.size());
  for (const auto& rp : rows) working.push_back(column[rp.attacked]);

  for (std::size_t step = 0; step < l; ++step) {
    const std::size_t k = l - 1 - step;
    auto& tally = out.tallies[k];
    for (std::size_t s = 0; s < rows.size(); ++s) {
      const auto& cell = delta.at(feature, k, rows[s].keyed);
      // Cells that were never changed carry no bit.
      if (cell.skipped || cell.eta == 0.0) continue;
      tally.add(detect_cell_bit(working[s], cell.eta, p.beta, p.tau));
    }
    std::uint8_t bit = 0;
    try {
      const auto m = majority_vote(tally);
      bit = m.bit;
      if (m.tie) {
        warnings.push_back(out.feature + ": tie at bit " + std::to_string(k + 1) +
                           ", decoded 0");
      }
    } catch (const UndecodableBit& e) {
      out.undecodable[k] = true;
      warnings.push_back(out.feature + ": bit " + std::to_string(k + 1) + ": " +
                         e.what());
    }
    out.bits[k] = bit;
    // Undo this bit so the previous one can be read from near-original values.
    for (std::size_t s = 0; s < rows.size(); ++s) {
      const auto& cell = delta.at(feature, k, rows[s].keyed);
      if (cell.skipped) continue;
      working[s] += bit == 1 ? cell.eta : -cell.eta;
    }
  }
  return out;
}

MatchReport score(const DecodedWatermark& d, const Watermark& expected) {
  MatchReport m;
  std::size_t correct = 0;
  for (std::size_t k = 0; k < expected.length(); ++k) {
    if (d.bits[k] == expected[k]) ++correct;
  }
  m.bit_accuracy = static_cast<double>(correct) / static_cast<double>(expected.length());
  const auto corr = bit_correlation(expected.bits(), d.bits);
  m.correlation = corr.value;
  m.correlation_degenerate = corr.degenerate;
  std::size_t votes = 0;
  std::size_t crosses = 0;
  for (const auto& t : d.tallies) {
    votes += t.votes();
    crosses += t.crosses;
  }
  m.cross_rate = votes ? static_cast<double>(crosses) / static_cast<double>(votes) : 1.0;
  const bool any_undecodable =
      std::find(d.undecodable.begin(), d.undecodable.end(), true) != d.undecodable.end();
  if (correct == expected.length() && !any_undecodable) {
    m.verdict = Verdict::kMatch;
  } else if (any_undecodable || m.cross_rate > 0.5 || m.bit_accuracy <= 0.5) {
    m.verdict = Verdict::kCorrupted;
  } else {
    m.verdict = Verdict::kPartial;
  }
  return m;
}

}  // namespace

DecodedWatermark decode(const Dataset& attacked, const WatermarkKey& key,
                        const DecoderParams& params) {
  key.validate();
  if (params.features.size() != key.features.size()) {
    throw std::invalid_argument("decoder params do not match key features");
  }
  const auto& delta = key.delta;
  const std::size_t l = delta.bit_count();

  DecodedWatermark out;
  std::vector<RowPair> rows;
  rows.reserve(attacked.rows());
  for (std::size_t r = 0; r < attacked.rows(); ++r) {
    if (auto keyed = delta.row_of(attacked.ids()[r])) {
      rows.push_back({r, *keyed});
    } else {
      ++out.unknown_rows;
    }
  }
  out.surviving_rows = rows.size();
  if (rows.empty()) {
    throw DecodeError("no rows of the suspect dataset are known to the key");
  }

  for (std::size_t i = 0; i < key.features.size(); ++i) {
    const auto& name = key.features[i];
    auto col = attacked.feature_index(name);
    if (!col) throw DecodeError("suspect dataset lacks feature '" + name + "'");
    if (!(params.features[i].beta > 0.0)) {
      out.warnings.push_back(name + ": beta is zero, feature carries no mark");
      continue;
    }
    out.per_feature.push_back(decode_feature(attacked.column(*col), rows, delta, i,
                                             params.features[i], out.warnings));
  }

  out.bits.assign(l, 0);
  out.tallies.assign(l, {});
  out.undecodable.assign(l, false);
  for (std::size_t k = 0; k < l; ++k) {
    std::size_t ones = 0;
    std::size_t zeros = 0;
    for (const auto& f : out.per_feature) {
      out.tallies[k].merge(f.tallies[k]);
      if (f.undecodable[k]) continue;
      (f.bits[k] ? ones : zeros) += 1;
    }
    if (ones + zeros == 0) {
      out.undecodable[k] = true;
      continue;
    }
    if (ones != zeros) {
      out.bits[k] = ones > zeros ? 1 : 0;
      continue;
    }
    // Features split evenly: fall back to the pooled cell votes.
    const auto& pooled = out.tallies[k];
    out.bits[k] = pooled.ones > pooled.zeros ? 1 : 0;
    if (pooled.ones == pooled.zeros) {
      out.warnings.push_back("tie across features at bit " + std::to_string(k + 1) +
                             ", decoded 0");
    }
  }
  out.match = score(out, key.bits);
  return out;
}

DecodedWatermark decode(const Dataset& attacked, const WatermarkKey& key) {
  return decode(attacked, key, DecoderParams::from_key(key));
}

}  // namespace wmark

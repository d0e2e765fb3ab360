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

#ifndef WMARK_ATTACK_HPP_
#define WMARK_ATTACK_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmark/codec.hpp"
#include "wmark/dataset.hpp"

namespace wmark {

enum class AttackKind {
  kDuplicateInsert,
  kSyntheticInsert,
  kDelete,
  kAlterRandom,
  kAlterFixed,
  kCombined,
};

std::string to_string(AttackKind kind);
/// Accepts the snake_case names used in attack files, e.g. "alter_random".
AttackKind parse_attack_kind(std::string_view name);

/// One adversary move against a marked dataset.
///
/// alpha is the fraction of the marked row count R that is touched; rho is
/// the magnitude (units of sigma for synthetic inserts, absolute half-range
/// for alterations). Combined attacks delete, duplicate-insert and then
/// alter, each fraction taken relative to the input R.
struct AttackSpec {
  AttackKind kind = AttackKind::kDelete;
  double alpha = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  double delete_frac = 0.0;
  double insert_frac = 0.0;
  double alter_frac = 0.0;
  /// Alter every feature instead of only the watermark carriers.
  bool alter_all_features = false;

  void validate() const;
};

/// ceil(fraction * rows), tolerant of rounding noise in the product.
std::size_t affected_rows(double fraction, std::size_t rows);

/// Applies the attack. `targets` are the features alterations may touch;
/// an empty list means every feature. Inserted rows receive fresh ids.
Dataset attack(const Dataset& marked, const AttackSpec& spec,
               std::span<const std::string> targets);

struct ResiliencePoint {
  AttackSpec spec;
  std::size_t rows_after = 0;
  double bit_accuracy = 0.0;
  double correlation = 0.0;
  double cross_rate = 0.0;
  std::string verdict;
  std::string decoded;
  std::optional<std::string> error;
  /// Combined attacks only: log10 of (0.5)^((a + w) / 2), with a the rows
  /// deleted and w the original rows left neither deleted nor altered.
  /// Reported, never asserted.
  std::optional<double> combined_success_log10;
};

struct ResilienceReport {
  std::vector<ResiliencePoint> points;
  /// log10 of (0.5)^(R/2): the chance a blind adversary flips one bit's
  /// majority by guessing on half the rows. Reported, never asserted.
  double naive_success_log10 = 0.0;

  /// One line per point: kind,alpha,rho,seed,rows,bit_accuracy,correlation,...
  std::string curves_csv() const;
};

/// Attacks `marked` once per grid point and decodes with `key`. Failures
/// are recorded per point; the sweep carries on.
ResilienceReport resilience_sweep(const Dataset& marked, const WatermarkKey& key,
                                  std::span<const AttackSpec> grid);

}  // namespace wmark

#endif  // WMARK_ATTACK_HPP_

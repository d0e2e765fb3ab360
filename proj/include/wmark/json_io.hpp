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

// JSON forms of the key file and of every report the CLI emits.

#ifndef WMARK_JSON_IO_HPP_
#define WMARK_JSON_IO_HPP_

#include <filesystem>
#include <vector>

#include "json.hpp"
#include "wmark/attack.hpp"
#include "wmark/codec.hpp"
#include "wmark/dataset.hpp"
#include "wmark/decoder.hpp"
#include "wmark/feature_ranking.hpp"

namespace wmark {

using Json = nlohmann::json;

class KeyFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Key document: {version, class_column, id_column, features, betas, bounds,
/// bits, l, gamma, bins, delta}. `delta` is an array of
/// {feature, bit, row_id, eta} or {feature, bit, row_id, skip: true}; bits
/// are numbered 1..l from the most significant.
Json key_to_json(const WatermarkKey& key);
WatermarkKey key_from_json(const Json& j);

void save_key(const std::filesystem::path& path, const WatermarkKey& key);
WatermarkKey load_key(const std::filesystem::path& path);

Json to_json(const CpVector& cp);
Json to_json(const ConstraintReport& report);
Json to_json(const BetaMatrix& betas);
Json to_json(const CreationResult& result);
Json to_json(const DecodedWatermark& decoded);
Json to_json(const AttackSpec& spec);
Json to_json(const ResilienceReport& report);

AttackSpec attack_spec_from_json(const Json& j);
/// Accepts either a list of specs or {"attacks": [...]}.
std::vector<AttackSpec> attack_specs_from_json(const Json& j);

BetaMatrix beta_matrix_from_json(const Json& j);

}  // namespace wmark

#endif  // WMARK_JSON_IO_HPP_

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

#include "wmark/json_io.hpp"

#include <fstream>
#include <unordered_map>

namespace wmark {

Json key_to_json(const WatermarkKey& key) {
  Json j;
  j["version"] = key.version;
  j["class_column"] = key.class_column;
  j["id_column"] = key.id_column;
  j["features"] = key.features;
  Json betas = Json::array();
  Json bounds = Json::array();
  for (const auto& e : key.betas.entries) {
    betas.push_back(e.beta);
    bounds.push_back({{"min", e.bounds.min}, {"max", e.bounds.max}, {"upper", e.upper}});
  }
  j["betas"] = std::move(betas);
  j["bounds"] = std::move(bounds);
  j["bits"] = key.bits.to_string();
  j["l"] = key.bits.length();
  j["gamma"] = key.gamma;
  Json bins = Json::array();
  for (std::size_t i = 0; i < key.bins.features().size(); ++i) {
    bins.push_back({{"feature", key.bins.features()[i]},
                    {"edges", key.bins.bins()[i].edges}});
  }
  j["bins"] = std::move(bins);

  const auto& delta = key.delta;
  Json cells = Json::array();
  for (std::size_t f = 0; f < delta.feature_count(); ++f) {
    for (std::size_t k = 0; k < delta.bit_count(); ++k) {
      for (std::size_t r = 0; r < delta.row_count(); ++r) {
        const auto& c = delta.at(f, k, r);
        Json cell = {{"feature", delta.features()[f]},
                     {"bit", k + 1},
                     {"row_id", delta.row_ids()[r]}};
        if (c.skipped) {
          cell["skip"] = true;
        } else {
          cell["eta"] = c.eta;
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  j["delta"] = std::move(cells);
  return j;
}

WatermarkKey key_from_json(const Json& j) {
  try {
    WatermarkKey key;
    key.version = j.at("version").get<int>();
    if (key.version != WatermarkKey::kFormatVersion) {
      throw KeyFormatError("unsupported key version " + std::to_string(key.version));
    }
    key.class_column = j.at("class_column").get<std::string>();
    key.id_column = j.at("id_column").get<std::string>();
    key.features = j.at("features").get<std::vector<std::string>>();
    const auto betas = j.at("betas").get<std::vector<double>>();
    const auto& bounds = j.at("bounds");
    if (betas.size() != key.features.size() || bounds.size() != key.features.size()) {
      throw KeyFormatError("betas/bounds do not match features");
    }
    for (std::size_t i = 0; i < key.features.size(); ++i) {
      BetaEntry e;
      e.feature = key.features[i];
      e.beta = betas[i];
      e.bounds.min = bounds[i].at("min").get<double>();
      e.bounds.max = bounds[i].at("max").get<double>();
      e.upper = bounds[i].at("upper").get<double>();
      key.betas.entries.push_back(std::move(e));
    }
    key.bits = Watermark::from_string(j.at("bits").get<std::string>());
    if (j.at("l").get<std::size_t>() != key.bits.length()) {
      throw KeyFormatError("l does not match the bit string");
    }
    key.gamma = j.at("gamma").get<std::vector<double>>();

    std::vector<std::string> bin_features;
    std::vector<FeatureBins> bins;
    for (const auto& b : j.at("bins")) {
      bin_features.push_back(b.at("feature").get<std::string>());
      bins.push_back({b.at("edges").get<std::vector<double>>()});
    }
    key.bins = BinningSpec(std::move(bin_features), std::move(bins));

    const auto& cells = j.at("delta");
    std::unordered_map<std::string, std::size_t> feature_pos;
    for (std::size_t i = 0; i < key.features.size(); ++i) feature_pos[key.features[i]] = i;
    std::vector<std::string> row_ids;
    std::unordered_map<std::string, std::size_t> row_pos;
    for (const auto& c : cells) {
      const auto& id = c.at("row_id").get_ref<const std::string&>();
      if (row_pos.emplace(id, row_ids.size()).second) row_ids.push_back(id);
    }
    const std::size_t l = key.bits.length();
    if (cells.size() != key.features.size() * l * row_ids.size()) {
      throw KeyFormatError("delta does not hold one entry per (feature, bit, row)");
    }
    key.delta = DeltaMatrix(key.features, betas, l, row_ids);
    std::vector<bool> seen(cells.size(), false);
    for (const auto& c : cells) {
      auto f = feature_pos.find(c.at("feature").get<std::string>());
      if (f == feature_pos.end()) throw KeyFormatError("delta names an unknown feature");
      const auto bit = c.at("bit").get<std::size_t>();
      if (bit < 1 || bit > l) throw KeyFormatError("delta bit index out of range");
      const std::size_t r = row_pos.at(c.at("row_id").get<std::string>());
      const std::size_t slot = (f->second * l + (bit - 1)) * row_ids.size() + r;
      if (seen[slot]) throw KeyFormatError("delta has a duplicate entry");
      seen[slot] = true;
      auto& cell = key.delta.at(f->second, bit - 1, r);
      if (c.contains("skip") && c.at("skip").get<bool>()) {
        cell = {0.0, true};
      } else {
        cell = {c.at("eta").get<double>(), false};
      }
    }
    key.validate();
    return key;
  } catch (const Json::exception& e) {
    throw KeyFormatError(std::string("malformed key: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw KeyFormatError(std::string("inconsistent key: ") + e.what());
  }
}

void save_key(const std::filesystem::path& path, const WatermarkKey& key) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << key_to_json(key).dump() << '\n';
}

WatermarkKey load_key(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw KeyFormatError("cannot open key '" + path.string() + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw KeyFormatError(std::string("key is not valid JSON: ") + e.what());
  }
  return key_from_json(j);
}

Json to_json(const CpVector& cp) {
  Json features = Json::array();
  for (const auto& e : cp.entries) {
    features.push_back({{"feature", e.feature}, {"ig", e.ig}, {"cp", e.cp}, {"rank", e.rank}});
  }
  return {{"features", std::move(features)}, {"degenerate", cp.degenerate}};
}

Json to_json(const ConstraintReport& report) {
  Json features = Json::array();
  for (const auto& f : report.features) {
    features.push_back({{"feature", f.feature},
                        {"cp_delta", f.cp_delta},
                        {"mean_rel", f.mean_rel},
                        {"std_rel", f.std_rel},
                        {"min_equal", f.min_equal},
                        {"max_equal", f.max_equal},
                        {"integer_violations", f.integer_violations},
                        {"pass", f.pass}});
  }
  return {{"pass", report.pass}, {"features", std::move(features)}};
}

Json to_json(const BetaMatrix& betas) {
  Json out = Json::array();
  for (const auto& e : betas.entries) {
    out.push_back({{"feature", e.feature},
                   {"beta", e.beta},
                   {"beta_min", e.bounds.min},
                   {"beta_max", e.bounds.max},
                   {"upper", e.upper}});
  }
  return out;
}

BetaMatrix beta_matrix_from_json(const Json& j) {
  BetaMatrix m;
  for (const auto& e : j) {
    BetaEntry b;
    b.feature = e.at("feature").get<std::string>();
    b.beta = e.at("beta").get<double>();
    b.bounds.min = e.value("beta_min", 0.0);
    b.bounds.max = e.value("beta_max", b.beta);
    b.upper = e.value("upper", b.beta);
    m.entries.push_back(std::move(b));
  }
  return m;
}

Json to_json(const CreationResult& result) {
  return {{"betas", to_json(result.betas)},
          {"feasible", result.feasible},
          {"fitness",
           {{"value", result.fitness.value},
            {"objective", result.fitness.objective},
            {"penalty", result.fitness.penalty},
            {"cp_violation", result.fitness.cp_violation},
            {"moment_violation", result.fitness.moment_violation},
            {"range_violation", result.fitness.range_violation}}},
          {"iterations", result.search.iterations},
          {"stagnated", result.search.stagnated},
          {"trace", result.search.trace}};
}

namespace {

Json tallies_json(const std::vector<VoteTally>& tallies) {
  Json out = Json::array();
  for (std::size_t k = 0; k < tallies.size(); ++k) {
    out.push_back({{"bit", k + 1},
                   {"ones", tallies[k].ones},
                   {"zeros", tallies[k].zeros},
                   {"crosses", tallies[k].crosses}});
  }
  return out;
}

std::string bit_string(const std::vector<std::uint8_t>& bits) {
  std::string s;
  for (auto b : bits) s.push_back(static_cast<char>('0' + b));
  return s;
}

}  // namespace

Json to_json(const DecodedWatermark& decoded) {
  Json per_feature = Json::array();
  for (const auto& f : decoded.per_feature) {
    per_feature.push_back({{"feature", f.feature},
                           {"bits", bit_string(f.bits)},
                           {"tallies", tallies_json(f.tallies)}});
  }
  std::vector<std::size_t> undecodable;
  for (std::size_t k = 0; k < decoded.undecodable.size(); ++k) {
    if (decoded.undecodable[k]) undecodable.push_back(k + 1);
  }
  return {{"decoded", decoded.to_string()},
          {"tallies", tallies_json(decoded.tallies)},
          {"per_feature", std::move(per_feature)},
          {"undecodable_bits", undecodable},
          {"warnings", decoded.warnings},
          {"surviving_rows", decoded.surviving_rows},
          {"unknown_rows", decoded.unknown_rows},
          {"bit_accuracy", decoded.match.bit_accuracy},
          {"correlation", decoded.match.correlation},
          {"correlation_degenerate", decoded.match.correlation_degenerate},
          {"cross_rate", decoded.match.cross_rate},
          {"verdict", to_string(decoded.match.verdict)}};
}

Json to_json(const AttackSpec& spec) {
  return {{"kind", to_string(spec.kind)},
          {"alpha", spec.alpha},
          {"rho", spec.rho},
          {"seed", spec.seed},
          {"delete_frac", spec.delete_frac},
          {"insert_frac", spec.insert_frac},
          {"alter_frac", spec.alter_frac},
          {"alter_all_features", spec.alter_all_features}};
}

AttackSpec attack_spec_from_json(const Json& j) {
  AttackSpec s;
  s.kind = parse_attack_kind(j.at("kind").get<std::string>());
  s.alpha = j.value("alpha", 0.0);
  s.rho = j.value("rho", 0.0);
  s.seed = j.value("seed", std::uint64_t{0});
  s.delete_frac = j.value("delete_frac", 0.0);
  s.insert_frac = j.value("insert_frac", 0.0);
  s.alter_frac = j.value("alter_frac", 0.0);
  s.alter_all_features = j.value("alter_all_features", false);
  s.validate();
  return s;
}

std::vector<AttackSpec> attack_specs_from_json(const Json& j) {
  const Json& list = j.is_object() ? j.at("attacks") : j;
  if (!list.is_array()) throw std::invalid_argument("attack spec must be a JSON array");
  std::vector<AttackSpec> out;
  for (const auto& e : list) out.push_back(attack_spec_from_json(e));
  return out;
}

Json to_json(const ResilienceReport& report) {
  Json points = Json::array();
  for (const auto& p : report.points) {
    Json point = {{"attack", to_json(p.spec)},
                  {"rows_after", p.rows_after},
                  {"bit_accuracy", p.bit_accuracy},
                  {"correlation", p.correlation},
                  {"cross_rate", p.cross_rate},
                  {"verdict", p.verdict},
                  {"decoded", p.decoded}};
    if (p.error) point["error"] = *p.error;
    if (p.combined_success_log10) {
      point["combined_success_log10"] = *p.combined_success_log10;
      point["combined_success_formula"] = "(0.5)^((a+w)/2)";
    }
    points.push_back(std::move(point));
  }
  return {{"points", std::move(points)},
          {"naive_single_bit_success_log10", report.naive_success_log10},
          {"naive_single_bit_success_formula", "(0.5)^(R/2)"}};
}

}  // namespace wmark

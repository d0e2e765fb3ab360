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

#include <gtest/gtest.h>

#include <filesystem>

#include "test_support.hpp"
#include "wmark/decoder.hpp"
#include "wmark/json_io.hpp"
#include "wmark/pipeline.hpp"
#include "wmark/synthetic.hpp"

namespace wmark {
namespace {

Protection small_protection() {
  return protect(make_fixture({.rows = 300, .features = 4, .seed = 13}), PipelineConfig{});
}

TEST(KeyJson, RoundTripPreservesEverything) {
  const auto p = small_protection();
  const auto back = key_from_json(key_to_json(p.key));
  EXPECT_EQ(back.features, p.key.features);
  EXPECT_EQ(back.bits, p.key.bits);
  EXPECT_EQ(back.gamma, p.key.gamma);
  EXPECT_EQ(back.class_column, p.key.class_column);
  EXPECT_EQ(back.betas.values(), p.key.betas.values());
  EXPECT_EQ(back.delta.row_ids(), p.key.delta.row_ids());
  for (std::size_t f = 0; f < back.delta.feature_count(); ++f) {
    for (std::size_t k = 0; k < back.delta.bit_count(); ++k) {
      for (std::size_t r = 0; r < back.delta.row_count(); ++r) {
        EXPECT_EQ(back.delta.at(f, k, r).eta, p.key.delta.at(f, k, r).eta);
        EXPECT_EQ(back.delta.at(f, k, r).skipped, p.key.delta.at(f, k, r).skipped);
      }
    }
  }
  EXPECT_EQ(decode(p.marked, back).to_string(), p.bits.to_string());
}

TEST(KeyJson, DocumentShape) {
  const auto j = key_to_json(small_protection().key);
  for (const char* field : {"version", "features", "betas", "bounds", "bits", "l", "gamma",
                            "bins", "delta"}) {
    EXPECT_TRUE(j.contains(field)) << field;
  }
  const auto& cell = j["delta"][0];
  EXPECT_TRUE(cell.contains("feature"));
  EXPECT_EQ(cell["bit"], 1);
  EXPECT_TRUE(cell.contains("row_id"));
  EXPECT_TRUE(cell.contains("eta") || cell.contains("skip"));
}

TEST(KeyJson, FileRoundTrip) {
  const auto p = small_protection();
  const auto path = std::filesystem::temp_directory_path() / "wmark_key_test.json";
  save_key(path, p.key);
  EXPECT_EQ(load_key(path).bits, p.key.bits);
  std::filesystem::remove(path);
  EXPECT_THROW(load_key(path), KeyFormatError);
}

TEST(KeyJson, MalformedDocumentsRejected) {
  const auto good = key_to_json(small_protection().key);
  auto missing = good;
  missing.erase("delta");
  EXPECT_THROW(key_from_json(missing), KeyFormatError);
  auto wrong_version = good;
  wrong_version["version"] = 99;
  EXPECT_THROW(key_from_json(wrong_version), KeyFormatError);
  auto short_delta = good;
  short_delta["delta"].erase(short_delta["delta"].size() - 1);
  EXPECT_THROW(key_from_json(short_delta), KeyFormatError);
  auto bad_l = good;
  bad_l["l"] = 3;
  EXPECT_THROW(key_from_json(bad_l), KeyFormatError);
}

TEST(AttackSpecJson, ListAndWrappedForms) {
  const auto list = Json::parse(R"([
    {"kind": "delete", "alpha": 0.8, "seed": 3},
    {"kind": "combined", "delete_frac": 0.4, "insert_frac": 0.5, "alter_frac": 0.4, "rho": 0.01}
  ])");
  const auto specs = attack_specs_from_json(list);
  ASSERT_EQ(specs.size(), 2u);
  EXPECT_EQ(specs[0].kind, AttackKind::kDelete);
  EXPECT_EQ(specs[0].seed, 3u);
  EXPECT_EQ(specs[1].insert_frac, 0.5);
  const auto wrapped = Json{{"attacks", list}};
  EXPECT_EQ(attack_specs_from_json(wrapped).size(), 2u);
  EXPECT_EQ(attack_spec_from_json(to_json(specs[1])).alter_frac, 0.4);
}

TEST(AttackSpecJson, InvalidSpecsRejected) {
  EXPECT_THROW(attack_specs_from_json(Json::parse(R"([{"kind": "melt"}])")),
               std::invalid_argument);
  EXPECT_THROW(attack_specs_from_json(Json::parse(R"([{"kind": "delete", "alpha": 1.0}])")),
               std::invalid_argument);
  EXPECT_THROW(attack_specs_from_json(Json::parse(R"({"kind": "delete"})")), Json::exception);
}

TEST(ReportJson, DecodeReportFields) {
  const auto p = small_protection();
  const auto j = to_json(decode(p.marked, p.key));
  EXPECT_EQ(j["decoded"], p.bits.to_string());
  EXPECT_EQ(j["verdict"], "match");
  EXPECT_EQ(j["correlation"], 1.0);
  EXPECT_EQ(j["tallies"].size(), p.bits.length());
}

TEST(ReportJson, CpAndBetas) {
  const auto p = small_protection();
  const auto cp = to_json(p.ranking.cp);
  double sum = 0.0;
  for (const auto& e : cp["features"]) sum += e["cp"].get<double>();
  EXPECT_NEAR(sum, 100.0, 1e-9);
  const auto betas = beta_matrix_from_json(to_json(p.key.betas));
  EXPECT_EQ(betas.values(), p.key.betas.values());
}

}  // namespace
}  // namespace wmark

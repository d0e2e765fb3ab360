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

#include <numeric>

#include "test_support.hpp"
#include "wmark/attack.hpp"
#include "wmark/decoder.hpp"
#include "wmark/pipeline.hpp"
#include "wmark/synthetic.hpp"

namespace wmark {
namespace {

TEST(Tau, Arithmetic) {
  EXPECT_NEAR(compute_tau(0.01, 0.5), 0.01 / 0.5, 1e-15);
  EXPECT_NEAR(compute_tau(0.01, 0.5), 0.02, 1e-15);
}

TEST(Tau, ApproachesBetaAsGammaNearsOne) {
  EXPECT_NEAR(compute_tau(0.01, 1.0 - 1e-12), 0.01, 1e-12);
}

TEST(Tau, GammaOutsideOpenUnitIntervalRejected) {
  EXPECT_THROW(compute_tau(0.01, 0.0), std::invalid_argument);
  EXPECT_THROW(compute_tau(0.01, 1.0), std::invalid_argument);
  EXPECT_THROW(compute_tau(0.0, 0.5), std::invalid_argument);
}

TEST(DefaultGamma, ClampedAndScaled) {
  EXPECT_NEAR(default_gamma(0.01, 100.0), 1.0 / (2 * 0.01 * 100.0), 1e-15);
  EXPECT_EQ(default_gamma(0.01, 1e6), 0.05);
  EXPECT_EQ(default_gamma(0.01, 1.0), 0.95);
}

TEST(DetectCellBit, EmbeddedOne) {
  // v_w = 99 carries eta 1: eta_d = 0.99 and the residual -0.01 reads 1.
  EXPECT_EQ(detect_cell_bit(99.0, 1.0, 0.01, 0.02), CellVote::kOne);
}

TEST(DetectCellBit, EmbeddedZero) {
  // v_w = 101: residual 0.01 lies in (0, 0.02].
  EXPECT_EQ(detect_cell_bit(101.0, 1.0, 0.01, 0.02), CellVote::kZero);
}

TEST(DetectCellBit, ResidualBeyondTauIsCross) {
  // 0.01 * 105 - 1 = 0.05 > 0.02.
  EXPECT_EQ(detect_cell_bit(105.0, 1.0, 0.01, 0.02), CellVote::kCross);
}

VoteTally tally(std::size_t ones, std::size_t zeros, std::size_t crosses) {
  VoteTally t;
  t.ones = ones;
  t.zeros = zeros;
  t.crosses = crosses;
  return t;
}

TEST(MajorityVote, StrictMajority) {
  const auto r = majority_vote(tally(3, 1, 0));
  EXPECT_EQ(r.bit, 1);
  EXPECT_FALSE(r.tie);
}

TEST(MajorityVote, CrossesIgnored) {
  EXPECT_EQ(majority_vote(tally(1, 0, 5)).bit, 1);
}

TEST(MajorityVote, TieDecodesZeroAndIsFlagged) {
  const auto r = majority_vote(tally(2, 2, 0));
  EXPECT_EQ(r.bit, 0);
  EXPECT_TRUE(r.tie);
}

TEST(MajorityVote, OnlyCrossesIsUndecodable) {
  EXPECT_THROW(majority_vote(tally(0, 0, 4)), UndecodableBit);
}

TEST(VoteTally, AddAndMerge) {
  VoteTally t;
  t.add(CellVote::kOne);
  t.add(CellVote::kCross);
  t.merge(tally(1, 2, 0));
  EXPECT_EQ(t.ones, 2u);
  EXPECT_EQ(t.zeros, 2u);
  EXPECT_EQ(t.crosses, 1u);
  EXPECT_EQ(t.votes(), 5u);
}

Protection protect_example() {
  const auto d = testing::emr_example();
  // With ten bins each A1 value sits alone and ties A2; two bins do not.
  const auto ranking = rank_features(d, 2);
  const auto f = select_candidates(ranking.cp, 1, 100.0);
  BetaMatrix betas;
  for (const auto& name : f.features) betas.entries.push_back({name, 0.01, {}, 0.02});
  PipelineConfig cfg;
  cfg.h = testing::unguarded();
  return protect_with_betas(d, betas, Watermark::from_string("11001"), cfg);
}

TEST(Decode, WorkedExampleRoundTrip) {
  const auto p = protect_example();
  ASSERT_EQ(p.key.features, (std::vector<std::string>{"A1"}));
  const auto dec = decode(p.marked, p.key);
  EXPECT_EQ(dec.to_string(), "11001");
  for (const auto& t : dec.tallies) {
    EXPECT_EQ(t.crosses, 0u);
    EXPECT_EQ(t.ones + t.zeros, 8u);
  }
  EXPECT_EQ(dec.match.verdict, Verdict::kMatch);
  EXPECT_DOUBLE_EQ(dec.match.correlation, 1.0);
}

TEST(Decode, ReadsOnlyTheKeyAndMarkedRows) {
  const auto p = protect_example();
  // Shuffled row order and an unknown extra row do not matter.
  const std::vector<std::size_t> order{7, 3, 5, 1, 0, 2, 6, 4};
  const auto shuffled = p.marked.select_rows(order);
  EXPECT_EQ(decode(shuffled, p.key).to_string(), "11001");
  AttackSpec dup;
  dup.kind = AttackKind::kDuplicateInsert;
  dup.alpha = 0.5;
  const auto grown = attack(p.marked, dup, p.key.features);
  const auto dec = decode(grown, p.key);
  EXPECT_EQ(dec.unknown_rows, 4u);
  EXPECT_EQ(dec.surviving_rows, 8u);
}

TEST(Decode, NoSurvivingRowsIsAnError) {
  const auto p = protect_example();
  const auto stranger = testing::from_csv("id,A1,A2,D1\nzz,100,10,Yes\n", "D1", "id");
  EXPECT_THROW(decode(stranger, p.key), DecodeError);
}

class FixtureDecodeTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    protection_ = new Protection(protect(make_fixture({}), PipelineConfig{}));
  }
  static void TearDownTestSuite() {
    delete protection_;
    protection_ = nullptr;
  }
  static Protection* protection_;
};

Protection* FixtureDecodeTest::protection_ = nullptr;

TEST_F(FixtureDecodeTest, CleanDecodeMatches) {
  const auto dec = decode(protection_->marked, protection_->key);
  EXPECT_EQ(dec.to_string(), protection_->bits.to_string());
  EXPECT_EQ(dec.match.verdict, Verdict::kMatch);
  EXPECT_EQ(dec.match.cross_rate, 0.0);
}

TEST_F(FixtureDecodeTest, EightyPercentDeletion) {
  AttackSpec spec;
  spec.kind = AttackKind::kDelete;
  spec.alpha = 0.8;
  spec.seed = 17;
  const auto attacked = attack(protection_->marked, spec, protection_->key.features);
  EXPECT_EQ(decode(attacked, protection_->key).to_string(), protection_->bits.to_string());
}

TEST_F(FixtureDecodeTest, GrossScalingIsFlaggedAsCorruption) {
  const auto& marked = protection_->marked;
  std::vector<std::vector<double>> repl(marked.features());
  for (const auto& name : protection_->key.features) {
    const auto col = marked.column(name);
    auto& out = repl[marked.require_feature(name)];
    for (double v : col) out.push_back(v * 10.0);
  }
  const auto dec = decode(marked.with_columns(std::move(repl)), protection_->key);
  std::size_t crosses = 0;
  std::size_t votes = 0;
  for (const auto& t : dec.tallies) {
    crosses += t.crosses;
    votes += t.votes();
  }
  EXPECT_GT(crosses, votes / 2);
  EXPECT_EQ(dec.match.verdict, Verdict::kCorrupted);
}

TEST_F(FixtureDecodeTest, ZeroBetaFeatureIsSkippedWithWarning) {
  auto betas = protection_->key.betas;
  ASSERT_GE(betas.entries.size(), 2u);
  betas.entries[0].beta = 0.0;
  const auto p = protect_with_betas(make_fixture({}), betas, protection_->bits, PipelineConfig{});
  const auto dec = decode(p.marked, p.key);
  ASSERT_FALSE(dec.warnings.empty());
  EXPECT_NE(dec.warnings.front().find(betas.entries[0].feature), std::string::npos);
  EXPECT_EQ(dec.to_string(), protection_->bits.to_string());
}

}  // namespace
}  // namespace wmark

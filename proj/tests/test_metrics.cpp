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

#include <cmath>
#include <limits>
#include <random>

#include "test_support.hpp"
#include "wmark/classifier.hpp"
#include "wmark/metrics.hpp"

namespace wmark {
namespace {

Histogram two_bins(double p0, double p1) {
  const std::vector<double> counts{p0, p1};
  return Histogram::from_counts({0.0, 1.0, 2.0}, counts);
}

TEST(Histogram, CountsIntoBins) {
  const FeatureBins bins{{0.0, 1.0, 2.0}};
  const std::vector<double> values{0.1, 0.5, 1.5, 2.0};
  const auto h = Histogram::of(values, bins);
  EXPECT_DOUBLE_EQ(h.mass[0], 0.5);
  EXPECT_DOUBLE_EQ(h.mass[1], 0.5);
}

TEST(KlDivergence, IdenticalIsZero) {
  const auto p = two_bins(3, 7);
  EXPECT_EQ(kl_divergence(p, p), 0.0);
  EXPECT_EQ(jsd(p, p), 0.0);
}

TEST(KlDivergence, HalfVersusQuarter) {
  const double expected = 0.5 * std::log2(0.5 / 0.25) + 0.5 * std::log2(0.5 / 0.75);
  const double kl = kl_divergence(two_bins(1, 1), two_bins(1, 3));
  EXPECT_NEAR(kl, expected, 1e-12);
  EXPECT_NEAR(kl, 0.2075, 1e-4);
}

TEST(KlDivergence, MissingSupportIsInfinite) {
  EXPECT_EQ(kl_divergence(two_bins(1, 1), two_bins(1, 0)),
            std::numeric_limits<double>::infinity());
  EXPECT_EQ(kl_divergence(two_bins(1, 0), two_bins(1, 1)), 1.0);
}

TEST(KlDivergence, DifferentBinsRejected) {
  const std::vector<double> counts{1, 1};
  const auto q = Histogram::from_counts({0.0, 1.0, 3.0}, counts);
  EXPECT_THROW(kl_divergence(two_bins(1, 1), q), std::invalid_argument);
  EXPECT_THROW(jsd(two_bins(1, 1), q), std::invalid_argument);
}

TEST(Jsd, SymmetricAndBounded) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(6);
    std::vector<double> b(6);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    const std::vector<double> edges{0, 1, 2, 3, 4, 5, 6};
    const auto p = Histogram::from_counts(edges, a);
    const auto q = Histogram::from_counts(edges, b);
    EXPECT_NEAR(jsd(p, q), jsd(q, p), 1e-12);
    EXPECT_GE(jsd(p, q), 0.0);
    EXPECT_LE(jsd(p, q), 1.0);
  }
  EXPECT_NEAR(jsd(two_bins(1, 0), two_bins(0, 1)), 1.0, 1e-12);
}

std::vector<std::uint8_t> bits(const std::string& s) {
  std::vector<std::uint8_t> out;
  for (char c : s) out.push_back(static_cast<std::uint8_t>(c - '0'));
  return out;
}

TEST(BitCorrelation, Identical) {
  const auto a = bits("11001");
  EXPECT_DOUBLE_EQ(bit_correlation(a, a).value, 1.0);
}

TEST(BitCorrelation, Complement) {
  EXPECT_DOUBLE_EQ(bit_correlation(bits("11001"), bits("00110")).value, -1.0);
}

TEST(BitCorrelation, HalfFlippedBalanced) {
  // Pearson r written out: the flipped half cancels the kept half.
  const auto a = bits("11110000");
  const auto b = bits("11000011");
  EXPECT_NEAR(bit_correlation(a, b).value, 0.0, 1e-12);
}

TEST(BitCorrelation, ConstantSequenceIsDegenerate) {
  const auto c = bit_correlation(bits("1111"), bits("1111"));
  EXPECT_TRUE(c.degenerate);
  EXPECT_EQ(c.value, 1.0);
  EXPECT_EQ(bit_correlation(bits("1111"), bits("1101")).value, 0.0);
  EXPECT_THROW(bit_correlation(bits("11"), bits("1")), std::invalid_argument);
}

TEST(ClassificationStats, PerfectPrediction) {
  const std::vector<std::string> truth{"yes", "no", "yes", "no"};
  const auto s = classification_stats(truth, truth, "yes");
  EXPECT_EQ(s.fp, 0u);
  EXPECT_EQ(s.fn, 0u);
  EXPECT_EQ(s.detection_rate(), 100.0);
  EXPECT_EQ(s.false_alarm_rate(), 0.0);
}

TEST(ClassificationStats, AllPositive) {
  const std::vector<std::string> truth{"yes", "no", "yes", "no"};
  const std::vector<std::string> pred(4, "yes");
  const auto s = classification_stats(truth, pred, "yes");
  EXPECT_EQ(s.detection_rate(), 100.0);
  EXPECT_EQ(s.false_alarm_rate(), 100.0);
}

TEST(ClassificationStats, DetectionRateFromCounts) {
  const auto s = ClassificationStats::from_counts(152, 0, 0, 30);
  EXPECT_NEAR(s.detection_rate(), 152.0 / 182.0 * 100.0, 1e-12);
  EXPECT_NEAR(s.detection_rate(), 83.52, 5e-3);
}

TEST(ClassificationStats, BadInputRejected) {
  const std::vector<std::string> truth{"a", "b", "c"};
  EXPECT_THROW(classification_stats(truth, truth, "a"), std::invalid_argument);
  const std::vector<std::string> shorter{"a"};
  EXPECT_THROW(classification_stats(shorter, truth, "a"), std::invalid_argument);
}

TEST(NaiveBayes, SeparatedGaussians) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<double> x;
  for (int i = 0; i < 400; ++i) {
    const bool pos = i % 2 == 0;
    ids.push_back(std::to_string(i));
    labels.push_back(pos ? "yes" : "no");
    x.push_back((pos ? 6.0 : 0.0) + noise(rng));
  }
  const Dataset d({"x"}, "class", "id", ids, labels, {x});
  const auto model = GaussianNaiveBayes::train(d);
  const auto s = classification_stats(d.labels(), model.predict(d), "yes");
  EXPECT_GE(s.detection_rate(), 99.0);
}

TEST(NaiveBayes, ConstantFeaturePredictsMajority) {
  const auto d = testing::from_csv(
      "id,f,class\na,2,yes\nb,2,yes\nc,2,yes\nd,2,no\n");
  const auto model = GaussianNaiveBayes::train(d);
  for (const auto& label : model.predict(d)) EXPECT_EQ(label, "yes");
}

TEST(NaiveBayes, NeedsTwoClasses) {
  const auto d = testing::from_csv("id,f,class\na,1,yes\nb,2,yes\n");
  EXPECT_THROW(GaussianNaiveBayes::train(d), std::invalid_argument);
}

}  // namespace
}  // namespace wmark

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
#include <filesystem>
#include <limits>
#include <sstream>

#include "test_support.hpp"
#include "wmark/dataset.hpp"
#include "wmark/feature_ranking.hpp"
#include "wmark/synthetic.hpp"

namespace wmark {
namespace {

using testing::from_csv;
using testing::single_column;

const char* kThreeRows =
    "id,f1,f2,class\n"
    "a,1.5,2,yes\n"
    "b,2.5,3,no\n"
    "c,3.5,4,yes\n";

TEST(ParseCsv, ThreeRowTable) {
  const auto d = from_csv(kThreeRows);
  EXPECT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.features(), 2u);
  EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"f1", "f2"}));
  EXPECT_EQ(d.ids(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(d.labels(), (std::vector<std::string>{"yes", "no", "yes"}));
  EXPECT_DOUBLE_EQ(d.column("f1")[1], 2.5);
  EXPECT_DOUBLE_EQ(d.column("f2")[2], 4.0);
}

TEST(ParseCsv, ColumnOrderIsFree) {
  const auto d = from_csv("class,f2,id,f1\nyes,2,a,1\nno,3,b,5\n");
  EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"f2", "f1"}));
  EXPECT_DOUBLE_EQ(d.column("f1")[1], 5.0);
}

TEST(ParseCsv, NonNumericCellNamesRowAndColumn) {
  try {
    from_csv("id,f1,f2,class\na,abc,2,yes\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("f1"), std::string::npos) << msg;
  }
}

TEST(ParseCsv, DuplicateIdRejected) {
  try {
    from_csv("id,f1,class\na,1,yes\na,2,no\n");
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate row id"), std::string::npos);
  }
}

TEST(ParseCsv, RaggedRowRejected) {
  EXPECT_THROW(from_csv("id,f1,class\na,1\n"), ParseError);
}

TEST(ParseCsv, MissingClassColumnRejected) {
  EXPECT_THROW(from_csv("id,f1,label\na,1,yes\n"), SchemaError);
}

TEST(ParseCsv, NonFiniteValueRejected) {
  EXPECT_ANY_THROW(from_csv("id,f1,class\na,nan,yes\n"));
  EXPECT_ANY_THROW(from_csv("id,f1,class\na,inf,yes\n"));
}

TEST(ParseCsv, QuotedFieldsAndSynthesizedIds) {
  const auto d = from_csv("f1,class\n1,\"yes, really\"\n2,no\n", "class",
                          kSynthesizeIds);
  EXPECT_EQ(d.id_name(), kSynthesizedIdName);
  EXPECT_EQ(d.ids(), (std::vector<std::string>{"0", "1"}));
  EXPECT_EQ(d.labels()[0], "yes, really");
}

TEST(WriteCsv, RoundTripIsBitExact) {
  const auto d = make_fixture({.rows = 200, .features = 4, .seed = 7});
  std::ostringstream out;
  write_csv(out, d);
  const auto back = from_csv(out.str(), "diagnosis", "id");
  ASSERT_TRUE(back.same_schema(d));
  EXPECT_EQ(back.ids(), d.ids());
  EXPECT_EQ(back.labels(), d.labels());
  EXPECT_EQ(back.columns(), d.columns());
}

TEST(WriteCsv, SaveAndLoadFile) {
  const auto d = from_csv(kThreeRows);
  const auto path = std::filesystem::temp_directory_path() / "wmark_dataset_roundtrip.csv";
  save_dataset(path, d);
  const auto back = load_dataset(path, "class", "id");
  EXPECT_EQ(back.columns(), d.columns());
  std::filesystem::remove(path);
  EXPECT_THROW(load_dataset(path, "class", "id"), std::exception);
}

TEST(Dataset, DerivedCopiesLeaveOriginalIntact) {
  const auto d = from_csv(kThreeRows);
  const auto e = d.with_column(0, {9, 9, 9});
  EXPECT_DOUBLE_EQ(d.column(0)[0], 1.5);
  EXPECT_DOUBLE_EQ(e.column(0)[0], 9.0);
  const std::vector<std::size_t> keep{2, 0};
  const auto s = d.select_rows(keep);
  EXPECT_EQ(s.ids(), (std::vector<std::string>{"c", "a"}));
  EXPECT_EQ(s.row_of("a"), 1u);
  EXPECT_FALSE(s.row_of("b").has_value());
  EXPECT_THROW(d.with_column(0, {1, 2}), SchemaError);
}

TEST(ColumnStats, SmallColumn) {
  const auto d = single_column({1, 2, 3});
  const auto s = column_stats(d, "f1", 0, 10);
  // Population standard deviation written out by hand.
  const double sigma = std::sqrt(((1 - 2.0) * (1 - 2.0) + (3 - 2.0) * (3 - 2.0)) / 3.0);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_NEAR(s.stddev, sigma, 1e-12);
  EXPECT_NEAR(s.stddev, 0.8165, 1e-4);
  EXPECT_DOUBLE_EQ(s.min, 1.0);
  EXPECT_DOUBLE_EQ(s.max, 3.0);
  EXPECT_NEAR(s.v_min, 0.1, 1e-12);
  EXPECT_NEAR(s.v_max, 0.3, 1e-12);
}

TEST(ColumnStats, ConstantColumn) {
  const auto s = column_stats(single_column({5, 5}), "f1", 0, 10);
  EXPECT_EQ(s.stddev, 0.0);
  EXPECT_DOUBLE_EQ(s.v_min, 0.5);
  EXPECT_DOUBLE_EQ(s.v_max, 0.5);
}

TEST(ColumnStats, ValuesOnNormalizationBounds) {
  const auto s = column_stats(single_column({0, 10}), "f1", 0, 10);
  EXPECT_EQ(s.v_min, 0.0);
  EXPECT_EQ(s.v_max, 1.0);
}

TEST(ColumnStats, EmptyRangeAndUnknownFeature) {
  const auto d = single_column({1, 2});
  EXPECT_THROW(column_stats(d, "f1", 3, 3), std::invalid_argument);
  EXPECT_THROW(column_stats(d, "nope", 0, 1), SchemaError);
}

TEST(GlobalRange, SpansFeaturesAndWidensConstants) {
  const auto d = from_csv("id,a,b,class\nx,1,4,yes\ny,2,8,no\n");
  const std::vector<std::string> both{"a", "b"};
  const auto r = global_range(d, both);
  EXPECT_EQ(r.lo, 1.0);
  EXPECT_EQ(r.hi, 8.0);
  const auto c = single_column({3, 3});
  const std::vector<std::string> one{"f1"};
  const auto w = global_range(c, one);
  EXPECT_GT(w.hi, w.lo);
}

class ConstraintsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    original_ = from_csv(
        "id,f1,f2,class\n"
        "a,1,10,yes\nb,2,20,no\nc,3,30,yes\nd,4,40,no\n");
    bins_ = BinningSpec::equal_width(original_, 10);
    cp_ = classification_potential(original_, bins_);
  }

  ConstraintReport check(const Dataset& marked) const {
    return validate_constraints(original_, marked, h_, cp_,
                                classification_potential(marked, bins_));
  }

  Dataset original_ = testing::single_column({1});
  BinningSpec bins_;
  CpVector cp_;
  UsabilityConstraints h_;
};

TEST_F(ConstraintsTest, IdentityPasses) {
  const auto r = check(original_);
  EXPECT_TRUE(r.pass);
  for (const auto& f : r.features) {
    EXPECT_EQ(f.cp_delta, 0.0);
    EXPECT_EQ(f.mean_rel, 0.0);
    EXPECT_EQ(f.std_rel, 0.0);
    EXPECT_TRUE(f.min_equal && f.max_equal);
  }
}

TEST_F(ConstraintsTest, RaisedMaximumFailsNamingFeature) {
  auto col = std::vector<double>(original_.column("f2").begin(), original_.column("f2").end());
  col[3] = 40.0001;
  const auto r = check(original_.with_column(1, col));
  EXPECT_FALSE(r.pass);
  ASSERT_NE(r.find("f2"), nullptr);
  EXPECT_FALSE(r.find("f2")->max_equal);
  EXPECT_FALSE(r.find("f2")->pass);
  EXPECT_TRUE(r.find("f1")->pass);
}

TEST_F(ConstraintsTest, RowOrderDoesNotMatter) {
  const std::vector<std::size_t> order{3, 1, 0, 2};
  EXPECT_TRUE(check(original_.select_rows(order)).pass);
}

TEST_F(ConstraintsTest, MismatchedRowsRejected) {
  const std::vector<std::size_t> fewer{0, 1, 2};
  EXPECT_THROW(check(original_.select_rows(fewer)), SchemaError);
}

TEST_F(ConstraintsTest, IntegerColumnsFlagFractions) {
  h_.integer_columns = {"f1"};
  auto col = std::vector<double>(original_.column("f1").begin(), original_.column("f1").end());
  col[1] = 2.5;
  const auto r = check(original_.with_column(0, col));
  EXPECT_EQ(r.find("f1")->integer_violations, 1u);
  EXPECT_FALSE(r.pass);
}

TEST(UsabilityConstraints, ValidateRejectsBadFields) {
  UsabilityConstraints h;
  EXPECT_NO_THROW(h.validate());
  h.beta_cap = 0.0;
  EXPECT_THROW(h.validate(), std::invalid_argument);
  h.beta_cap = 0.02;
  h.mean_tol = -1.0;
  EXPECT_THROW(h.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace wmark

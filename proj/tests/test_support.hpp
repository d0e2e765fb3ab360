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

// Small hand-built tables shared by the unit tests and the acceptance suite.

#ifndef WMARK_TESTS_TEST_SUPPORT_HPP_
#define WMARK_TESTS_TEST_SUPPORT_HPP_

#include <sstream>
#include <string>
#include <vector>

#include "wmark/dataset.hpp"

namespace wmark::testing {

inline Dataset from_csv(const std::string& text, std::string_view class_column = "class",
                        std::string_view id_column = "id") {
  std::istringstream in(text);
  return parse_csv(in, class_column, id_column);
}

/// Single-feature table with ids "r0".."rN" and alternating labels.
inline Dataset single_column(std::vector<double> values, std::string name = "f1") {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ids.push_back("r" + std::to_string(i));
    labels.push_back(i % 2 == 0 ? "yes" : "no");
  }
  return Dataset({std::move(name)}, "class", "id", std::move(ids), std::move(labels),
                 {std::move(values)});
}

/// Two vitals and a yes/no diagnosis. A2 separates the classes perfectly;
/// A1 hovers around 100 and carries almost no class signal, so it is the
/// feature that gets watermarked.
inline Dataset emr_example() {
  return from_csv(
      "id,A1,A2,D1\n"
      "p1,100,10,Yes\n"
      "p2,104,11,Yes\n"
      "p3,97,12,Yes\n"
      "p4,102,13,Yes\n"
      "p5,99,30,No\n"
      "p6,103,31,No\n"
      "p7,98,32,No\n"
      "p8,101,33,No\n",
      "D1", "id");
}

/// Guards off, so every cell of the carrier moves.
inline UsabilityConstraints unguarded() {
  UsabilityConstraints h;
  h.enforce_min_max = false;
  h.preserve_bins = false;
  return h;
}

}  // namespace wmark::testing

#endif  // WMARK_TESTS_TEST_SUPPORT_HPP_

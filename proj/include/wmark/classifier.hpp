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

#ifndef WMARK_CLASSIFIER_HPP_
#define WMARK_CLASSIFIER_HPP_

#include <string>
#include <vector>

#include "wmark/dataset.hpp"

namespace wmark {

/// Gaussian naive Bayes over every feature column. Used as a yardstick for
/// how much watermarking shifts diagnosis outcomes.
struct GaussianNaiveBayes {
  static constexpr double kVarianceFloor = 1e-9;

  std::vector<std::string> classes;
  std::vector<double> log_priors;
  std::vector<std::vector<double>> means;      // [class][feature]
  std::vector<std::vector<double>> variances;  // [class][feature]

  /// Requires exactly two classes.
  static GaussianNaiveBayes train(const Dataset& d);

  /// Argmax-posterior labels; ties go to the earlier class.
  std::vector<std::string> predict(const Dataset& d) const;
};

}  // namespace wmark

#endif  // WMARK_CLASSIFIER_HPP_

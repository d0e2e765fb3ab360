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

#include "wmark/timing.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "wmark/decoder.hpp"
#include "wmark/pipeline.hpp"
#include "wmark/synthetic.hpp"

namespace wmark {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kTimingBeta = 0.0005;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

double linear_r2(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("linear_r2 needs two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0.0) return 1.0;
  if (sxx == 0.0) return 0.0;
  return sxy * sxy / (sxx * syy);
}

TimingReport measure_scaling(std::span<const std::size_t> sizes, std::uint64_t seed,
                             std::size_t repetitions) {
  if (repetitions == 0) throw std::invalid_argument("repetitions must be >= 1");
  const auto w = generate_bits(16, seed);
  TimingReport report;
  std::vector<double> x;
  std::vector<double> te;
  std::vector<double> td;
  for (std::size_t rows : sizes) {
    const auto d = make_fixture({.rows = rows, .seed = seed});
    const auto bins = BinningSpec::equal_width(d, 10);
    BetaMatrix betas;
    CandidateSet f;
    // Every weak column carries the mark.
    for (const auto& name : d.feature_names()) {
      if (name.front() != 'w') continue;
      betas.entries.push_back({name, kTimingBeta, {}, kTimingBeta});
      f.features.push_back(name);
    }
    std::vector<double> embed_runs;
    std::vector<double> decode_runs;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      auto start = Clock::now();
      auto out = embed(d, w, betas, f, UsabilityConstraints{}, bins);
      embed_runs.push_back(std::chrono::duration<double>(Clock::now() - start).count());
      const auto key = make_key(d, betas, w, choose_gamma(d, betas, std::nullopt), bins,
                                std::move(out.delta));
      start = Clock::now();
      const auto decoded = decode(out.marked, key);
      decode_runs.push_back(std::chrono::duration<double>(Clock::now() - start).count());
      if (decoded.bits != w.bits()) {
        throw std::runtime_error("timing run failed to decode its own mark");
      }
    }
    TimingPoint p{rows, median(embed_runs), median(decode_runs)};
    report.points.push_back(p);
    x.push_back(static_cast<double>(rows));
    te.push_back(p.embed_seconds);
    td.push_back(p.decode_seconds);
  }
  if (x.size() >= 2) {
    report.embed_r2 = linear_r2(x, te);
    report.decode_r2 = linear_r2(x, td);
  }
  return report;
}

}  // namespace wmark

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

#include "wmark/codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace wmark {

Watermark::Watermark(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("watermark must be non-empty");
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("watermark bits must be 0 or 1");
  }
}

Watermark Watermark::from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("watermark string may contain only 0 and 1");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return Watermark(std::move(bits));
}

std::string Watermark::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

bool is_supported_length(std::size_t length) {
  return length == 8 || length == 16 || length == 32 || length == 64;
}

Watermark generate_bits(std::size_t length, std::uint64_t seed,
                        bool allow_any_length) {
  if (length == 0) throw std::invalid_argument("watermark length must be > 0");
  if (!allow_any_length && !is_supported_length(length)) {
    throw std::invalid_argument("watermark length must be 8, 16, 32 or 64");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> bits(length);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
  return Watermark(std::move(bits));
}

const BetaEntry& BetaMatrix::at(std::string_view feature) const {
  for (const auto& e : entries) {
    if (e.feature == feature) return e;
  }
  throw std::out_of_range("no beta for feature '" + std::string(feature) + "'");
}

std::vector<double> BetaMatrix::values() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.beta);
  return out;
}

DeltaMatrix::DeltaMatrix(std::vector<std::string> features,
                         std::vector<double> betas, std::size_t bit_count,
                         std::vector<std::string> row_ids)
    : features_(std::move(features)),
      betas_(std::move(betas)),
      bit_count_(bit_count),
      row_ids_(std::move(row_ids)) {
  if (features_.size() != betas_.size()) {
    throw std::invalid_argument("delta: feature/beta count mismatch");
  }
  row_lookup_.reserve(row_ids_.size());
  for (std::size_t r = 0; r < row_ids_.size(); ++r) {
    if (!row_lookup_.emplace(row_ids_[r], r).second) {
      throw std::invalid_argument("delta: duplicate row id '" + row_ids_[r] + "'");
    }
  }
  cells_.assign(features_.size(),
                std::vector<DeltaCell>(bit_count_ * row_ids_.size()));
}

std::optional<std::size_t> DeltaMatrix::row_of(std::string_view id) const {
  auto it = row_lookup_.find(std::string(id));
  if (it == row_lookup_.end()) return std::nullopt;
  return it->second;
}

DeltaSummary DeltaMatrix::summary(std::size_t feature) const {
  DeltaSummary s;
  s.feature = features_.at(feature);
  s.beta = betas_[feature];
  for (const auto& c : cells_[feature]) {
    if (c.skipped) {
      ++s.skipped;
    } else {
      s.total_abs_change += std::abs(c.eta);
    }
  }
  return s;
}

void WatermarkKey::validate() const {
  if (version != kFormatVersion) {
    throw std::invalid_argument("unsupported key version " + std::to_string(version));
  }
  if (features.empty()) throw std::invalid_argument("key has no features");
  if (bits.length() == 0) throw std::invalid_argument("key has no watermark bits");
  if (betas.entries.size() != features.size() || gamma.size() != features.size() ||
      delta.features() != features) {
    throw std::invalid_argument("key feature sets disagree");
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (betas.entries[i].feature != features[i]) {
      throw std::invalid_argument("key beta order disagrees with features");
    }
    if (delta.beta(i) != betas.entries[i].beta) {
      throw std::invalid_argument("key delta beta disagrees with beta matrix");
    }
    if (!bins.contains(features[i])) {
      throw std::invalid_argument("key lacks bins for '" + features[i] + "'");
    }
  }
  if (delta.bit_count() != bits.length()) {
    throw std::invalid_argument("key delta bit count disagrees with watermark");
  }
}

CellGuard::CellGuard(std::span<const double> original, const FeatureBins* bins,
                     bool enforce_min_max, bool integer_valued)
    : integer_valued_(integer_valued) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double lo = -inf;
  double hi = inf;
  if (enforce_min_max && !original.empty()) {
    auto [mn, mx] = std::minmax_element(original.begin(), original.end());
    lo = *mn;
    hi = *mx;
  }
  windows_.reserve(original.size());
  for (double v : original) {
    Window w{lo, hi, true};
    if (enforce_min_max && (v == lo || v == hi)) {
      // The extremes stay put so that min and max survive exactly.
      w = {v, v, true};
    } else if (bins != nullptr) {
      const int b = bins->locate_clamped(v);
      const double b_lo = bins->edges[static_cast<std::size_t>(b)];
      const double b_hi = bins->edges[static_cast<std::size_t>(b) + 1];
      const bool last = static_cast<std::size_t>(b) + 1 == bins->count();
      if (b_lo > w.lo) w.lo = b_lo;
      if (b_hi < w.hi) {
        w.hi = b_hi;
        w.hi_inclusive = last;
      }
    }
    windows_.push_back(w);
  }
}

bool CellGuard::allows(std::size_t row, double next) const {
  const auto& w = windows_[row];
  if (next < w.lo) return false;
  if (w.hi_inclusive ? next > w.hi : next >= w.hi) return false;
  if (integer_valued_ && next != std::round(next)) return false;
  return true;
}

void embed_column(std::span<double> values, double beta, const Watermark& w,
                  const CellGuard& guard, std::span<DeltaCell> out) {
  const std::size_t rows = values.size();
  const bool record = !out.empty();
  if (record && out.size() != w.length() * rows) {
    throw std::invalid_argument("embed_column: delta span has wrong size");
  }
  for (std::size_t k = 0; k < w.length(); ++k) {
    const bool subtract = w[k] == 1;
    for (std::size_t r = 0; r < rows; ++r) {
      const double cur = values[r];
      const double eta = beta * cur;
      const double next = subtract ? cur - eta : cur + eta;
      // Detection assumes positive magnitudes; non-positive cells carry no bit.
      const bool ok = cur > 0.0 && guard.allows(r, next);
      if (ok) values[r] = next;
      if (record) out[k * rows + r] = ok ? DeltaCell{eta, false} : DeltaCell{0.0, true};
    }
  }
}

namespace {

CellGuard make_guard(const Dataset& d, std::size_t column,
                     const UsabilityConstraints& h, const BinningSpec& bins) {
  const auto& name = d.feature_names()[column];
  const FeatureBins* fb = h.preserve_bins ? &bins.of(name) : nullptr;
  return CellGuard(d.column(column), fb, h.enforce_min_max,
                   h.integer_columns.count(name) > 0);
}

}  // namespace

EmbedResult embed(const Dataset& d, const Watermark& w, const BetaMatrix& betas,
                  const CandidateSet& f, const UsabilityConstraints& h,
                  const BinningSpec& bins) {
  if (w.length() == 0) throw std::invalid_argument("embed: empty watermark");
  if (f.features.empty()) throw std::invalid_argument("embed: empty candidate set");
  std::vector<double> beta_values;
  for (const auto& name : f.features) beta_values.push_back(betas.at(name).beta);

  DeltaMatrix delta(f.features, beta_values, w.length(), d.ids());
  std::vector<std::vector<double>> replaced(d.features());
  for (std::size_t i = 0; i < f.features.size(); ++i) {
    const std::size_t col = d.require_feature(f.features[i]);
    auto values = std::vector<double>(d.column(col).begin(), d.column(col).end());
    const auto guard = make_guard(d, col, h, bins);
    embed_column(values, beta_values[i], w, guard, delta.feature_cells(i));
    replaced[col] = std::move(values);
  }
  return {d.with_columns(std::move(replaced)), std::move(delta)};
}

FitnessEvaluator::FitnessEvaluator(const Dataset& d, const CandidateSet& f,
                                   const UsabilityConstraints& h,
                                   const BinningSpec& bins,
                                   const Watermark& bits,
                                   std::vector<double> upper_bounds)
    : h_(h),
      bits_(bits),
      feature_names_(d.feature_names()),
      labels_(EncodedLabels::encode(d.labels())) {
  if (upper_bounds.size() != f.features.size()) {
    throw std::invalid_argument("fitness: one upper bound per candidate needed");
  }
  for (double u : upper_bounds) max_objective_ += u;
  gains_.reserve(d.features());
  for (std::size_t j = 0; j < d.features(); ++j) {
    const auto& fb = bins.of(feature_names_[j]);
    auto col = d.column(j);
    std::vector<int> idx(col.size());
    for (std::size_t r = 0; r < col.size(); ++r) idx[r] = fb.locate_clamped(col[r]);
    gains_.push_back(information_gain(idx, fb.count(), labels_));
  }
  cp_original_ = cp_from_gains(feature_names_, gains_);
  for (const auto& name : f.features) {
    const std::size_t col = d.require_feature(name);
    auto values = d.column(col);
    candidates_.push_back(Candidate{col,
                                    std::vector<double>(values.begin(), values.end()),
                                    make_guard(d, col, h_, bins), bins.of(name),
                                    raw_stats(values)});
  }
}

namespace {

double relative_excess(double before, double after, double tol) {
  const double diff = std::abs(after - before);
  const double rel = before == 0.0 ? diff : diff / std::abs(before);
  return std::max(0.0, rel - tol);
}

}  // namespace

FitnessBreakdown FitnessEvaluator::evaluate(std::span<const double> betas) const {
  if (betas.size() != candidates_.size()) {
    throw std::invalid_argument("fitness: beta vector has wrong dimension");
  }
  FitnessBreakdown out;
  auto gains = gains_;
  std::vector<double> trial;
  std::vector<int> idx;
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    const auto& c = candidates_[i];
    out.objective += betas[i];
    trial = c.values;
    embed_column(trial, betas[i], bits_, c.guard, {});

    const auto s = raw_stats(trial);
    out.moment_violation += relative_excess(c.stats.mean, s.mean, h_.mean_tol) +
                            relative_excess(c.stats.stddev, s.stddev, h_.std_tol);
    if (h_.enforce_min_max) {
      const double span = c.stats.max > c.stats.min ? c.stats.max - c.stats.min : 1.0;
      out.range_violation +=
          (std::abs(s.min - c.stats.min) + std::abs(s.max - c.stats.max)) / span;
    }
    idx.resize(trial.size());
    for (std::size_t r = 0; r < trial.size(); ++r) idx[r] = c.bins.locate_clamped(trial[r]);
    gains[c.column] = information_gain(idx, c.bins.count(), labels_);
  }
  const auto cp_marked = cp_from_gains(feature_names_, gains);
  for (std::size_t j = 0; j < gains.size(); ++j) {
    const double d = std::abs(cp_marked.entries[j].cp - cp_original_.entries[j].cp);
    out.cp_violation += std::max(0.0, d - h_.cp_tolerance);
  }
  out.feasible = out.cp_violation == 0.0 && out.moment_violation == 0.0 &&
                 out.range_violation == 0.0;
  out.penalty = 10.0 * (out.cp_violation + out.moment_violation + out.range_violation);
  out.value = out.objective - out.penalty - (out.feasible ? 0.0 : max_objective_);
  return out;
}

double fitness(const Dataset& d, std::span<const double> betas,
               const CandidateSet& f, const UsabilityConstraints& h,
               const BinningSpec& bins, const Watermark& bits) {
  std::vector<double> upper(betas.begin(), betas.end());
  return FitnessEvaluator(d, f, h, bins, bits, std::move(upper))(betas);
}

namespace {

constexpr int kRefineSweeps = 2;
constexpr int kRefineSteps = 30;

// Raises each coordinate of a feasible point toward its upper bound as far
// as feasibility allows. The objective grows with every beta, so the value
// never decreases.
FitnessBreakdown refine_feasible(const FitnessEvaluator& evaluator,
                                 std::span<const pso::Interval> box,
                                 std::vector<double>& x, FitnessBreakdown current) {
  for (int sweep = 0; sweep < kRefineSweeps; ++sweep) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      double ok = x[i];
      double bad = box[i].hi;
      if (!(bad > ok)) continue;
      x[i] = bad;
      auto trial = evaluator.evaluate(x);
      if (trial.feasible) {
        current = trial;
        continue;
      }
      for (int step = 0; step < kRefineSteps; ++step) {
        x[i] = 0.5 * (ok + bad);
        trial = evaluator.evaluate(x);
        if (trial.feasible) {
          ok = x[i];
          current = trial;
        } else {
          bad = x[i];
        }
      }
      x[i] = ok;
    }
  }
  return current;
}

}  // namespace

CreationResult create_watermark_params(const Dataset& d, const CandidateSet& f,
                                       const CpVector& cp,
                                       const UsabilityConstraints& h,
                                       const pso::SwarmConfig& cfg,
                                       const BinningSpec& bins,
                                       const Watermark& bits,
                                       const NormalizationRange& norm) {
  if (f.features.empty()) {
    throw std::invalid_argument("create_watermark_params: empty candidate set");
  }
  h.validate();
  cfg.validate();

  BetaMatrix matrix;
  std::vector<pso::Interval> box;
  for (const auto& name : f.features) {
    const auto stats = column_stats(d, name, norm.lo, norm.hi);
    BetaEntry e;
    e.feature = name;
    e.bounds = beta_bounds(stats, cp.at(name).cp);
    e.upper = std::min(e.bounds.max, h.beta_cap);
    // A lower bound above the cap collapses the box onto the cap.
    box.push_back({std::min(e.bounds.min, e.upper), e.upper});
    matrix.entries.push_back(std::move(e));
  }
  std::vector<double> upper;
  for (const auto& b : box) upper.push_back(b.hi);

  FitnessEvaluator evaluator(d, f, h, bins, bits, std::move(upper));
  CreationResult out;
  out.search = pso::optimize(std::cref(evaluator), box, cfg);
  auto best = out.search.best_position;
  out.fitness = evaluator.evaluate(best);
  if (out.fitness.feasible) {
    out.fitness = refine_feasible(evaluator, box, best, out.fitness);
  }
  out.feasible = out.fitness.feasible;
  for (std::size_t i = 0; i < matrix.entries.size(); ++i) {
    matrix.entries[i].beta = best[i];
  }
  out.betas = std::move(matrix);
  return out;
}

CreationResult create_watermark_params(const Dataset& d, const CandidateSet& f,
                                       const CpVector& cp,
                                       const UsabilityConstraints& h,
                                       const pso::SwarmConfig& cfg,
                                       const BinningSpec& bins,
                                       const Watermark& bits) {
  if (f.features.empty()) {
    throw std::invalid_argument("create_watermark_params: empty candidate set");
  }
  return create_watermark_params(d, f, cp, h, cfg, bins, bits,
                                 global_range(d, f.features));
}

}  // namespace wmark

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

#include "wmark/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "wmark/decoder.hpp"
#include "wmark/random.hpp"

namespace wmark {

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kDuplicateInsert:
      return "duplicate_insert";
    case AttackKind::kSyntheticInsert:
      return "synthetic_insert";
    case AttackKind::kDelete:
      return "delete";
    case AttackKind::kAlterRandom:
      return "alter_random";
    case AttackKind::kAlterFixed:
      return "alter_fixed";
    case AttackKind::kCombined:
      return "combined";
  }
  return "unknown";
}

AttackKind parse_attack_kind(std::string_view name) {
  for (auto k : {AttackKind::kDuplicateInsert, AttackKind::kSyntheticInsert,
                 AttackKind::kDelete, AttackKind::kAlterRandom,
                 AttackKind::kAlterFixed, AttackKind::kCombined}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown attack kind '" + std::string(name) + "'");
}

void AttackSpec::validate() const {
  if (!(alpha >= 0.0) || !(delete_frac >= 0.0) || !(insert_frac >= 0.0) ||
      !(alter_frac >= 0.0)) {
    throw std::invalid_argument("attack fractions must be >= 0");
  }
  if (!(rho >= 0.0)) throw std::invalid_argument("attack magnitude must be >= 0");
  if (kind == AttackKind::kDelete && alpha >= 1.0) {
    throw std::invalid_argument("delete with alpha >= 1 would empty the dataset");
  }
  if (kind == AttackKind::kCombined && delete_frac >= 1.0) {
    throw std::invalid_argument("combined delete fraction must be < 1");
  }
}

std::size_t affected_rows(double fraction, std::size_t rows) {
  const double exact = fraction * static_cast<double>(rows);
  const double nearest = std::round(exact);
  const double n = std::abs(exact - nearest) < 1e-9 ? nearest : std::ceil(exact);
  return static_cast<std::size_t>(std::max(0.0, n));
}

namespace {

// Mutable row-major working copy of a dataset.
struct Table {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> cols;

  explicit Table(const Dataset& d)
      : ids(d.ids()), labels(d.labels()), cols(d.columns()) {}

  std::size_t rows() const { return ids.size(); }

  Dataset build(const Dataset& schema) && {
    return Dataset(schema.feature_names(), schema.class_name(), schema.id_name(),
                   std::move(ids), std::move(labels), std::move(cols));
  }
};

std::vector<std::size_t> sample_rows(std::size_t n, std::size_t rows,
                                     std::mt19937_64& rng) {
  std::vector<std::size_t> idx(rows);
  std::iota(idx.begin(), idx.end(), 0);
  n = std::min(n, rows);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, rows - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(n);
  return idx;
}

class IdMinter {
 public:
  explicit IdMinter(const std::vector<std::string>& existing)
      : taken_(existing.begin(), existing.end()) {}

  std::string next() {
    for (;;) {
      auto id = "ins-" + std::to_string(counter_++);
      if (taken_.insert(id).second) return id;
    }
  }

 private:
  std::unordered_set<std::string> taken_;
  std::size_t counter_ = 0;
};

void delete_rows(Table& t, std::size_t n, std::mt19937_64& rng) {
  if (n >= t.rows()) throw std::invalid_argument("delete would empty the dataset");
  auto doomed = sample_rows(n, t.rows(), rng);
  std::vector<bool> drop(t.rows(), false);
  for (auto r : doomed) drop[r] = true;
  Table kept = t;
  kept.ids.clear();
  kept.labels.clear();
  for (auto& c : kept.cols) c.clear();
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (drop[r]) continue;
    kept.ids.push_back(t.ids[r]);
    kept.labels.push_back(t.labels[r]);
    for (std::size_t j = 0; j < t.cols.size(); ++j) kept.cols[j].push_back(t.cols[j][r]);
  }
  t = std::move(kept);
}

void duplicate_insert(Table& t, std::size_t n, std::mt19937_64& rng) {
  IdMinter ids(t.ids);
  const std::size_t base = t.rows();
  std::uniform_int_distribution<std::size_t> pick(0, base - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = pick(rng);
    t.ids.push_back(ids.next());
    t.labels.push_back(t.labels[src]);
    for (auto& c : t.cols) c.push_back(c[src]);
  }
}

void synthetic_insert(Table& t, std::size_t n, double rho, std::mt19937_64& rng) {
  IdMinter ids(t.ids);
  const std::size_t base = t.rows();
  std::vector<std::uniform_real_distribution<double>> dists;
  for (const auto& c : t.cols) {
    const auto s = raw_stats(c);
    dists.emplace_back(s.mean - rho * s.stddev, s.mean + rho * s.stddev);
  }
  std::uniform_int_distribution<std::size_t> pick(0, base - 1);
  for (std::size_t i = 0; i < n; ++i) {
    t.ids.push_back(ids.next());
    t.labels.push_back(t.labels[pick(rng)]);
    for (std::size_t j = 0; j < t.cols.size(); ++j) t.cols[j].push_back(dists[j](rng));
  }
}

void alter(Table& t, std::size_t n, double rho, bool fixed,
           std::span<const std::size_t> columns, std::mt19937_64& rng) {
  auto rows = sample_rows(n, t.rows(), rng);
  std::sort(rows.begin(), rows.end());
  std::uniform_real_distribution<double> offset(-rho, rho);
  std::bernoulli_distribution sign(0.5);
  for (auto r : rows) {
    for (auto j : columns) {
      const double delta = fixed ? (sign(rng) ? rho : -rho) : offset(rng);
      t.cols[j][r] += delta;
    }
  }
}

std::vector<std::size_t> target_columns(const Dataset& d,
                                        std::span<const std::string> targets,
                                        bool all) {
  std::vector<std::size_t> out;
  if (all || targets.empty()) {
    out.resize(d.features());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  for (const auto& name : targets) out.push_back(d.require_feature(name));
  return out;
}

}  // namespace

Dataset attack(const Dataset& marked, const AttackSpec& spec,
               std::span<const std::string> targets) {
  spec.validate();
  const std::size_t r0 = marked.rows();
  const auto cols = target_columns(marked, targets, spec.alter_all_features);
  Table t(marked);
  std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(spec.kind)));
  switch (spec.kind) {
    case AttackKind::kDuplicateInsert:
      duplicate_insert(t, affected_rows(spec.alpha, r0), rng);
      break;
    case AttackKind::kSyntheticInsert:
      synthetic_insert(t, affected_rows(spec.alpha, r0), spec.rho, rng);
      break;
    case AttackKind::kDelete:
      delete_rows(t, affected_rows(spec.alpha, r0), rng);
      break;
    case AttackKind::kAlterRandom:
      alter(t, affected_rows(spec.alpha, r0), spec.rho, false, cols, rng);
      break;
    case AttackKind::kAlterFixed:
      alter(t, affected_rows(spec.alpha, r0), spec.rho, true, cols, rng);
      break;
    case AttackKind::kCombined:
      delete_rows(t, affected_rows(spec.delete_frac, r0), rng);
      duplicate_insert(t, affected_rows(spec.insert_frac, r0), rng);
      alter(t, affected_rows(spec.alter_frac, r0), spec.rho, false, cols, rng);
      break;
  }
  return std::move(t).build(marked);
}

ResilienceReport resilience_sweep(const Dataset& marked, const WatermarkKey& key,
                                  std::span<const AttackSpec> grid) {
  ResilienceReport report;
  report.naive_success_log10 =
      std::log10(0.5) * static_cast<double>(marked.rows()) / 2.0;
  for (const auto& spec : grid) {
    ResiliencePoint p;
    p.spec = spec;
    if (spec.kind == AttackKind::kCombined) {
      const std::size_t r0 = marked.rows();
      const std::size_t deleted = affected_rows(spec.delete_frac, r0);
      const std::size_t altered = affected_rows(spec.alter_frac, r0);
      const std::size_t untouched = r0 - std::min(r0, deleted + altered);
      p.combined_success_log10 =
          std::log10(0.5) * static_cast<double>(deleted + untouched) / 2.0;
    }
    try {
      const auto attacked = attack(marked, spec, key.features);
      p.rows_after = attacked.rows();
      const auto decoded = decode(attacked, key);
      p.bit_accuracy = decoded.match.bit_accuracy;
      p.correlation = decoded.match.correlation;
      p.cross_rate = decoded.match.cross_rate;
      p.verdict = to_string(decoded.match.verdict);
      p.decoded = decoded.to_string();
    } catch (const std::exception& e) {
      p.error = e.what();
      p.verdict = "error";
    }
    report.points.push_back(std::move(p));
  }
  return report;
}

std::string ResilienceReport::curves_csv() const {
  std::ostringstream out;
  out << "kind,alpha,rho,seed,delete_frac,insert_frac,alter_frac,rows_after,"
         "bit_accuracy,correlation,cross_rate,verdict\n";
  for (const auto& p : points) {
    out << to_string(p.spec.kind) << ',' << p.spec.alpha << ',' << p.spec.rho << ','
        << p.spec.seed << ',' << p.spec.delete_frac << ',' << p.spec.insert_frac
        << ',' << p.spec.alter_frac << ',' << p.rows_after << ',' << p.bit_accuracy
        << ',' << p.correlation << ',' << p.cross_rate << ',' << p.verdict << '\n';
  }
  return out.str();
}

}  // namespace wmark

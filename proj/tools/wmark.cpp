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

// wmark: command-line front end for ranking, watermark creation, embedding,
// decoding, attack simulation and timing reports.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wmark/attack.hpp"
#include "wmark/decoder.hpp"
#include "wmark/json_io.hpp"
#include "wmark/pipeline.hpp"
#include "wmark/synthetic.hpp"
#include "wmark/timing.hpp"

namespace {

using wmark::Json;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kCorrupted = 3,
  kInfeasible = 4,
};

constexpr const char* kSeedEnv = "WMARK_SEED";

/// Thrown for problems with the invocation itself (missing or bad inputs).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DataOptions {
  std::string in;
  std::string class_column = "class";
  std::string id_column = "id";
};

struct TuningOptions {
  std::size_t length = 16;
  std::uint64_t seed = 0x5eed;
  std::string bits;
  std::size_t top_t = 1;
  double cp_threshold = 0.0;
  CLI::Option* cp_threshold_opt = nullptr;
  std::size_t bins = 10;
  std::size_t particles = 100;
  std::size_t iterations = 100;
  double c1 = 2.0;
  double c2 = 2.0;
  unsigned threads = 1;
  double beta_cap = 0.02;
  double mean_tol = 1e-3;
  double std_tol = 1e-3;
  bool no_bin_guard = false;
  bool no_anchor_guard = false;
  std::vector<std::string> integer_columns;
  double gamma = 0.5;
  CLI::Option* gamma_opt = nullptr;
};

void add_data_options(CLI::App* cmd, DataOptions& o, bool input_required = true) {
  auto* in = cmd->add_option("--in", o.in, "Input CSV file");
  if (input_required) in->required()->check(CLI::ExistingFile);
  cmd->add_option("--class", o.class_column, "Class label column")->capture_default_str();
  cmd->add_option("--id", o.id_column, "Row id column, or 'synthesize'")
      ->capture_default_str();
}

void add_seed_option(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed, "Master seed")->envname(kSeedEnv)->capture_default_str();
}

void add_tuning_options(CLI::App* cmd, TuningOptions& o) {
  cmd->add_option("--length", o.length, "Watermark length l (8, 16, 32 or 64)")
      ->capture_default_str();
  add_seed_option(cmd, o.seed);
  cmd->add_option("--bits", o.bits, "Explicit watermark bits, e.g. 11001");
  cmd->add_option("--top-t", o.top_t, "Top-ranked features never watermarked")
      ->capture_default_str();
  o.cp_threshold_opt =
      cmd->add_option("--cp-threshold", o.cp_threshold, "Candidate cp ceiling (default: median)");
  cmd->add_option("--bins", o.bins, "Histogram bins per feature")->capture_default_str();
  cmd->add_option("--particles", o.particles, "Swarm size")->capture_default_str();
  cmd->add_option("--iterations", o.iterations, "Swarm iterations")->capture_default_str();
  cmd->add_option("--c1", o.c1, "Cognitive acceleration")->capture_default_str();
  cmd->add_option("--c2", o.c2, "Social acceleration")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Fitness threads (0 = all cores)")
      ->capture_default_str();
  cmd->add_option("--beta-cap", o.beta_cap, "Global cap on beta")->capture_default_str();
  cmd->add_option("--mean-tol", o.mean_tol, "Relative mean tolerance")->capture_default_str();
  cmd->add_option("--std-tol", o.std_tol, "Relative stddev tolerance")->capture_default_str();
  cmd->add_flag("--no-bin-guard", o.no_bin_guard, "Let cells leave their histogram bin");
  cmd->add_flag("--no-anchor-guard", o.no_anchor_guard,
                "Let the column minimum and maximum move");
  cmd->add_option("--integer-columns", o.integer_columns, "Columns that must stay integral")
      ->delimiter(',');
  o.gamma_opt = cmd->add_option("--gamma", o.gamma, "Fixed decoder gamma in (0, 1)");
}

wmark::PipelineConfig to_pipeline(const TuningOptions& o) {
  wmark::PipelineConfig cfg;
  cfg.length = o.length;
  cfg.seed = o.seed;
  cfg.top_t = o.top_t;
  if (o.cp_threshold_opt->count() > 0) cfg.cp_threshold = o.cp_threshold;
  cfg.bin_count = o.bins;
  cfg.h.beta_cap = o.beta_cap;
  cfg.h.mean_tol = o.mean_tol;
  cfg.h.std_tol = o.std_tol;
  cfg.h.preserve_bins = !o.no_bin_guard;
  cfg.h.enforce_min_max = !o.no_anchor_guard;
  cfg.h.integer_columns.insert(o.integer_columns.begin(), o.integer_columns.end());
  cfg.swarm.particles = o.particles;
  cfg.swarm.max_iterations = o.iterations;
  cfg.swarm.c1 = o.c1;
  cfg.swarm.c2 = o.c2;
  cfg.swarm.threads = o.threads;
  if (o.gamma_opt->count() > 0) {
    if (!(o.gamma > 0.0 && o.gamma < 1.0)) throw ConfigError("--gamma must lie in (0, 1)");
    cfg.gamma = o.gamma;
  }
  if (!o.bits.empty()) {
    cfg.bits = wmark::Watermark::from_string(o.bits);
  } else if (!wmark::is_supported_length(o.length)) {
    throw ConfigError("--length must be 8, 16, 32 or 64");
  }
  if (o.bins < 2) throw ConfigError("--bins must be >= 2");
  cfg.swarm.validate();
  cfg.h.validate();
  return cfg;
}

wmark::Dataset load(const DataOptions& o) {
  return wmark::load_dataset(o.in, o.class_column, o.id_column);
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void emit(bool json, const Json& j, const std::string& text) {
  if (json) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

// ---- rank -----------------------------------------------------------------

struct RankCommand {
  DataOptions data;
  std::size_t bins = 10;
  bool json = false;

  int run() const {
    const auto d = load(data);
    const auto r = wmark::rank_features(d, bins);
    std::ostringstream text;
    text << std::left << std::setw(6) << "rank" << std::setw(24) << "feature"
         << std::setw(14) << "ig" << "cp\n";
    for (const auto& e : r.cp.ranked()) {
      text << std::setw(6) << e.rank << std::setw(24) << e.feature << std::setw(14)
           << std::setprecision(6) << e.ig << std::setprecision(6) << e.cp << '\n';
    }
    emit(json, wmark::to_json(r.cp), text.str());
    return kOk;
  }
};

// ---- create ---------------------------------------------------------------

struct CreateCommand {
  DataOptions data;
  TuningOptions tuning;
  std::string out;
  bool json = false;

  int run() const {
    const auto d = load(data);
    const auto p = wmark::protect(d, to_pipeline(tuning));
    Json j = wmark::to_json(p.creation);
    j["candidates"] = p.candidates.features;
    j["bits"] = p.bits.to_string();
    if (!out.empty()) write_json_file(out, j);
    std::ostringstream text;
    text << "candidates:";
    for (const auto& f : p.candidates.features) text << ' ' << f;
    text << "\nbits: " << p.bits.to_string() << '\n';
    for (const auto& e : p.creation.betas.entries) {
      text << "  " << e.feature << " beta=" << e.beta << " range=[" << e.bounds.min << ", "
           << e.upper << "]\n";
    }
    text << "objective " << p.creation.fitness.objective << " after "
         << p.creation.search.iterations << " iterations\n";
    emit(json, j, text.str());
    return kOk;
  }
};

// ---- embed ----------------------------------------------------------------

struct EmbedCommand {
  DataOptions data;
  TuningOptions tuning;
  std::string key_out;
  std::string out;
  std::string betas_in;
  bool json = false;

  int run() const {
    const auto d = load(data);
    const auto cfg = to_pipeline(tuning);
    wmark::Protection p = [&] {
      if (betas_in.empty()) return wmark::protect(d, cfg);
      std::ifstream in(betas_in);
      if (!in) throw ConfigError("cannot open '" + betas_in + "'");
      const auto j = Json::parse(in);
      const auto betas = wmark::beta_matrix_from_json(j.contains("betas") ? j["betas"] : j);
      const auto w = cfg.bits ? *cfg.bits
                              : wmark::generate_bits(cfg.length, cfg.seed);
      return wmark::protect_with_betas(d, betas, w, cfg);
    }();
    wmark::save_dataset(out, p.marked);
    wmark::save_key(key_out, p.key);
    Json j = {{"bits", p.bits.to_string()},
              {"betas", wmark::to_json(p.key.betas)},
              {"gamma", p.key.gamma},
              {"constraints", wmark::to_json(p.constraints)},
              {"marked", out},
              {"key", key_out}};
    std::ostringstream text;
    text << "embedded " << p.bits.to_string() << " into";
    for (const auto& f : p.key.features) text << ' ' << f;
    text << "\nconstraints " << (p.constraints.pass ? "pass" : "FAIL") << "\nwrote " << out
         << " and " << key_out << '\n';
    emit(json, j, text.str());
    return kOk;
  }
};

// ---- decode ---------------------------------------------------------------

struct DecodeCommand {
  DataOptions data;
  std::string key_path;
  std::string report;
  bool json = false;

  int run() {
    const auto key = wmark::load_key(key_path);
    if (data.class_column == "class") data.class_column = key.class_column;
    if (data.id_column == "id") data.id_column = key.id_column;
    const auto d = load(data);
    const auto decoded = wmark::decode(d, key);
    auto j = wmark::to_json(decoded);
    j["expected"] = key.bits.to_string();
    if (!report.empty()) write_json_file(report, j);
    std::ostringstream text;
    text << "decoded  " << decoded.to_string() << "\nexpected " << key.bits.to_string()
         << "\nverdict  " << wmark::to_string(decoded.match.verdict) << " (accuracy "
         << decoded.match.bit_accuracy * 100 << "%, correlation " << decoded.match.correlation
         << ")\n";
    for (const auto& w : decoded.warnings) text << "warning: " << w << '\n';
    emit(json, j, text.str());
    return decoded.match.verdict == wmark::Verdict::kCorrupted ? kCorrupted : kOk;
  }
};

// ---- attack ---------------------------------------------------------------

struct AttackCommand {
  DataOptions data;
  std::string key_path;
  std::string spec_path;
  std::string report;
  std::string curves;
  std::string attacked_out;
  bool json = false;

  int run() {
    const auto key = wmark::load_key(key_path);
    if (data.class_column == "class") data.class_column = key.class_column;
    if (data.id_column == "id") data.id_column = key.id_column;
    const auto d = load(data);
    std::ifstream in(spec_path);
    if (!in) throw ConfigError("cannot open '" + spec_path + "'");
    Json spec_json;
    try {
      spec_json = Json::parse(in);
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("attack spec is not valid JSON: ") + e.what());
    }
    const auto grid = wmark::attack_specs_from_json(spec_json);
    if (!attacked_out.empty()) {
      if (grid.size() != 1) throw ConfigError("--attacked-out needs exactly one attack");
      wmark::save_dataset(attacked_out, wmark::attack(d, grid.front(), key.features));
    }
    const auto r = wmark::resilience_sweep(d, key, grid);
    const auto j = wmark::to_json(r);
    if (!report.empty()) write_json_file(report, j);
    if (!curves.empty()) {
      std::ofstream out(curves);
      if (!out) throw ConfigError("cannot write '" + curves + "'");
      out << r.curves_csv();
    }
    std::ostringstream text;
    for (const auto& p : r.points) {
      text << std::left << std::setw(18) << wmark::to_string(p.spec.kind) << " alpha="
           << std::setw(6) << p.spec.alpha << " rho=" << std::setw(8) << p.spec.rho
           << " accuracy=" << std::setw(8)
           << (std::to_string(static_cast<int>(std::lround(p.bit_accuracy * 100))) + "%")
           << p.verdict;
      if (p.error) text << " (" << *p.error << ")";
      text << '\n';
    }
    emit(json, j, text.str());
    return kOk;
  }
};

// ---- report ---------------------------------------------------------------

struct ReportCommand {
  std::vector<std::size_t> rows{10000, 20000, 40000};
  std::uint64_t seed = 0x5eed;
  std::size_t repetitions = 5;
  bool json = false;

  int run() const {
    const auto r = wmark::measure_scaling(rows, seed, repetitions);
    Json points = Json::array();
    std::ostringstream text;
    text << std::left << std::setw(10) << "rows" << std::setw(14) << "embed_ms"
         << "decode_ms\n";
    for (const auto& p : r.points) {
      points.push_back({{"rows", p.rows},
                        {"embed_seconds", p.embed_seconds},
                        {"decode_seconds", p.decode_seconds}});
      text << std::setw(10) << p.rows << std::setw(14) << p.embed_seconds * 1e3
           << p.decode_seconds * 1e3 << '\n';
    }
    text << "linear fit R^2: embed " << r.embed_r2 << ", decode " << r.decode_r2 << '\n';
    emit(json,
         {{"points", points}, {"embed_r2", r.embed_r2}, {"decode_r2", r.decode_r2}},
         text.str());
    return kOk;
  }
};

// ---- generate -------------------------------------------------------------

struct GenerateCommand {
  wmark::FixtureConfig fixture;
  std::string out;
  bool json = false;

  int run() const {
    const auto d = wmark::make_fixture(fixture);
    wmark::save_dataset(out, d);
    emit(json,
         {{"rows", d.rows()}, {"features", d.feature_names()}, {"class_column", d.class_name()},
          {"id_column", d.id_name()}, {"out", out}},
         "wrote " + std::to_string(d.rows()) + " rows to " + out + " (class column '" +
             d.class_name() + "', id column '" + d.id_name() + "')\n");
    return kOk;
  }
};

int fail(int code, const std::string& type, const std::string& message) {
  const Json err = {{"error", {{"type", type}, {"message", message}, {"exit_code", code}}}};
  std::cerr << err.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Watermark numeric tabular data with swarm-tuned perturbations"};
  app.set_config("--config", "", "TOML or INI file with option defaults");
  app.require_subcommand(1);
  app.fallthrough();

  RankCommand rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank features by classification potential");
  add_data_options(rank_cmd, rank.data);
  rank_cmd->add_option("--bins", rank.bins, "Histogram bins per feature")->capture_default_str();
  rank_cmd->add_flag("--json", rank.json, "Print JSON");

  CreateCommand create;
  auto* create_cmd = app.add_subcommand("create", "Search watermark strengths (betas)");
  add_data_options(create_cmd, create.data);
  add_tuning_options(create_cmd, create.tuning);
  create_cmd->add_option("--out", create.out, "Write the betas as JSON");
  create_cmd->add_flag("--json", create.json, "Print JSON");

  EmbedCommand embed;
  auto* embed_cmd = app.add_subcommand("embed", "Embed a watermark and write the key");
  add_data_options(embed_cmd, embed.data);
  add_tuning_options(embed_cmd, embed.tuning);
  embed_cmd->add_option("--key-out", embed.key_out, "Key file to write")->required();
  embed_cmd->add_option("--out", embed.out, "Marked CSV to write")->required();
  embed_cmd->add_option("--betas", embed.betas_in, "Use betas from 'create --out'")
      ->check(CLI::ExistingFile);
  embed_cmd->add_flag("--json", embed.json, "Print JSON");

  DecodeCommand decode;
  auto* decode_cmd = app.add_subcommand("decode", "Recover the watermark from a dataset");
  add_data_options(decode_cmd, decode.data);
  decode_cmd->add_option("--key", decode.key_path, "Key file")->required()->check(
      CLI::ExistingFile);
  decode_cmd->add_option("--report", decode.report, "Write the decode report as JSON");
  decode_cmd->add_flag("--json", decode.json, "Print JSON");

  AttackCommand attack;
  auto* attack_cmd = app.add_subcommand("attack", "Attack a marked dataset and decode it");
  add_data_options(attack_cmd, attack.data);
  attack_cmd->add_option("--key", attack.key_path, "Key file")->required()->check(
      CLI::ExistingFile);
  attack_cmd->add_option("--spec", attack.spec_path, "JSON list of attacks")
      ->required()
      ->check(CLI::ExistingFile);
  attack_cmd->add_option("--report", attack.report, "Write the sweep report as JSON");
  attack_cmd->add_option("--curves", attack.curves, "Write one CSV line per attack");
  attack_cmd->add_option("--attacked-out", attack.attacked_out,
                         "Write the attacked table (single attack only)");
  attack_cmd->add_flag("--json", attack.json, "Print JSON");

  ReportCommand report;
  auto* report_cmd = app.add_subcommand("report", "Time embedding and decoding against size");
  report_cmd->add_option("--rows", report.rows, "Row counts to time")->delimiter(',');
  add_seed_option(report_cmd, report.seed);
  report_cmd->add_option("--repetitions", report.repetitions, "Runs per size")
      ->capture_default_str();
  report_cmd->add_flag("--json", report.json, "Print JSON");

  GenerateCommand generate;
  auto* generate_cmd = app.add_subcommand("generate", "Write the synthetic fixture table");
  generate_cmd->add_option("--rows", generate.fixture.rows, "Rows")->capture_default_str();
  generate_cmd->add_option("--features", generate.fixture.features, "Features")
      ->capture_default_str();
  add_seed_option(generate_cmd, generate.fixture.seed);
  generate_cmd->add_option("--out", generate.out, "CSV to write")->required();
  generate_cmd->add_flag("--json", generate.json, "Print JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kConfigError, "usage", e.what());
  }

  try {
    if (*rank_cmd) return rank.run();
    if (*create_cmd) return create.run();
    if (*embed_cmd) return embed.run();
    if (*decode_cmd) return decode.run();
    if (*attack_cmd) return attack.run();
    if (*report_cmd) return report.run();
    if (*generate_cmd) return generate.run();
  } catch (const wmark::InfeasibleOptimization& e) {
    return fail(kInfeasible, "infeasible", e.what());
  } catch (const wmark::DecodeError& e) {
    return fail(kCorrupted, "decode", e.what());
  } catch (const ConfigError& e) {
    return fail(kConfigError, "config", e.what());
  } catch (const wmark::KeyFormatError& e) {
    return fail(kConfigError, "key", e.what());
  } catch (const wmark::ParseError& e) {
    return fail(kConfigError, "input", e.what());
  } catch (const wmark::SchemaError& e) {
    return fail(kConfigError, "input", e.what());
  } catch (const wmark::EmptyCandidateSet& e) {
    return fail(kConfigError, "config", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kConfigError, "config", e.what());
  } catch (const std::exception& e) {
    return fail(kFailure, "internal", e.what());
  }
  return fail(kConfigError, "usage", "no subcommand given");
}

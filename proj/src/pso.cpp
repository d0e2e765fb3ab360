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

#include "wmark/pso.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <thread>

#include "wmark/random.hpp"

namespace wmark::pso {

void SwarmConfig::validate() const {
  if (particles < 2) throw std::invalid_argument("swarm needs >= 2 particles");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw std::invalid_argument("acceleration constants must be > 0");
  }
  if (!(velocity_clamp > 0.0)) {
    throw std::invalid_argument("velocity clamp must be > 0");
  }
}

std::vector<double> update_velocity(const Particle& p,
                                    std::span<const double> global_best,
                                    const SwarmConfig& cfg,
                                    std::span<const double> r1,
                                    std::span<const double> r2,
                                    std::span<const double> v_max) {
  const std::size_t n = p.position.size();
  if (p.velocity.size() != n || p.best_position.size() != n ||
      global_best.size() != n || r1.size() != n || r2.size() != n ||
      v_max.size() != n) {
    throw std::invalid_argument("update_velocity: dimension mismatch");
  }
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = p.position[j];
    v[j] = p.velocity[j] + cfg.c1 * r1[j] * (p.best_position[j] - x) +
           cfg.c2 * r2[j] * (global_best[j] - x);
    v[j] = std::clamp(v[j], -v_max[j], v_max[j]);
  }
  return v;
}

void update_position(Particle& p, std::span<const Interval> bounds) {
  for (std::size_t j = 0; j < p.position.size(); ++j) {
    double x = p.position[j] + p.velocity[j];
    if (x < bounds[j].lo || x > bounds[j].hi) {
      x = x < bounds[j].lo ? bounds[j].lo : bounds[j].hi;
      p.velocity[j] = -0.5 * p.velocity[j];
    }
    p.position[j] = x;
  }
}

std::vector<double> velocity_limits(std::span<const Interval> bounds,
                                    const SwarmConfig& cfg) {
  std::vector<double> out;
  out.reserve(bounds.size());
  for (const auto& b : bounds) out.push_back(cfg.velocity_clamp * (b.hi - b.lo));
  return out;
}

namespace {

void evaluate_all(const Objective& objective, std::vector<Particle>& swarm,
                  std::vector<double>& fitness, unsigned threads) {
  const std::size_t n = swarm.size();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fitness[i] = objective(swarm[i].position);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        fitness[i] = objective(swarm[i].position);
      }
    });
  }
}

// Compass search: try +/- step along each axis, keep any improvement and
// halve the step after a sweep without one.
void polish(const Objective& objective, std::span<const Interval> bounds,
            std::size_t budget, std::vector<double>& x, double& fx) {
  constexpr double kInitialStep = 0.05;
  constexpr double kFinestStep = 1e-9;
  std::vector<double> step(bounds.size());
  for (std::size_t j = 0; j < bounds.size(); ++j) {
    step[j] = kInitialStep * (bounds[j].hi - bounds[j].lo);
  }
  std::size_t spent = 0;
  double scale = 1.0;
  std::vector<double> trial = x;
  while (spent < budget && scale > kFinestStep) {
    bool improved = false;
    for (std::size_t j = 0; j < x.size() && spent < budget; ++j) {
      if (step[j] == 0.0) continue;
      for (double sign : {1.0, -1.0}) {
        if (spent >= budget) break;
        trial = x;
        trial[j] = std::clamp(x[j] + sign * step[j] * scale, bounds[j].lo, bounds[j].hi);
        if (trial[j] == x[j]) continue;
        const double f = objective(trial);
        ++spent;
        if (f > fx) {
          x = trial;
          fx = f;
          improved = true;
          break;
        }
      }
    }
    if (!improved) scale *= 0.5;
  }
}

}  // namespace

Result optimize(const Objective& objective, std::span<const Interval> bounds,
                const SwarmConfig& cfg) {
  cfg.validate();
  if (bounds.empty()) throw std::invalid_argument("optimize: empty box");
  for (const auto& b : bounds) {
    if (!(b.lo <= b.hi)) throw std::invalid_argument("optimize: lo > hi");
  }
  const std::size_t dim = bounds.size();
  unsigned threads = cfg.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  Result result;
  const bool degenerate = std::all_of(bounds.begin(), bounds.end(),
                                      [](const Interval& b) { return b.lo == b.hi; });
  if (degenerate) {
    for (const auto& b : bounds) result.best_position.push_back(b.lo);
    result.best_fitness = objective(result.best_position);
    result.trace.push_back(result.best_fitness);
    result.iterations = 1;
    return result;
  }

  const auto v_max = velocity_limits(bounds, cfg);
  std::vector<std::mt19937_64> streams;
  streams.reserve(cfg.particles);
  for (std::size_t i = 0; i < cfg.particles; ++i) {
    streams.emplace_back(derive_seed(cfg.seed, i));
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Particle> swarm(cfg.particles);
  for (std::size_t i = 0; i < cfg.particles; ++i) {
    auto& p = swarm[i];
    p.position.resize(dim);
    p.velocity.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      p.position[j] = bounds[j].lo + unit(streams[i]) * (bounds[j].hi - bounds[j].lo);
      p.velocity[j] = unit(streams[i]) * v_max[j];
    }
    p.best_position = p.position;
  }

  std::vector<double> fitness(cfg.particles);
  evaluate_all(objective, swarm, fitness, threads);
  std::size_t leader = 0;
  for (std::size_t i = 0; i < cfg.particles; ++i) {
    swarm[i].best_fitness = fitness[i];
    if (fitness[i] > fitness[leader]) leader = i;
  }
  std::vector<double> global_best = swarm[leader].best_position;
  double global_fitness = swarm[leader].best_fitness;
  result.trace.push_back(global_fitness);

  std::vector<double> r1(dim);
  std::vector<double> r2(dim);
  std::size_t since_improvement = 0;
  for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
    for (std::size_t i = 0; i < cfg.particles; ++i) {
      auto& p = swarm[i];
      for (std::size_t j = 0; j < dim; ++j) {
        r1[j] = unit(streams[i]);
        r2[j] = unit(streams[i]);
      }
      p.velocity = update_velocity(p, global_best, cfg, r1, r2, v_max);
      update_position(p, bounds);
    }
    evaluate_all(objective, swarm, fitness, threads);

    bool improved = false;
    for (std::size_t i = 0; i < cfg.particles; ++i) {
      auto& p = swarm[i];
      if (fitness[i] > p.best_fitness) {
        p.best_fitness = fitness[i];
        p.best_position = p.position;
      }
      if (p.best_fitness > global_fitness) {
        global_fitness = p.best_fitness;
        global_best = p.best_position;
        improved = true;
      }
    }
    result.trace.push_back(global_fitness);
    result.iterations = iter;
    since_improvement = improved ? 0 : since_improvement + 1;
    if (cfg.stagnation_window > 0 && since_improvement >= cfg.stagnation_window) {
      result.stagnated = true;
      break;
    }
  }
  if (cfg.polish_evaluations > 0) {
    const double before = global_fitness;
    polish(objective, bounds, cfg.polish_evaluations, global_best, global_fitness);
    if (global_fitness > before) {
      result.polished = true;
      result.trace.push_back(global_fitness);
    }
  }
  result.best_position = std::move(global_best);
  result.best_fitness = global_fitness;
  return result;
}

}  // namespace wmark::pso

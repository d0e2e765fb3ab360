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

#ifndef WMARK_PSO_HPP_
#define WMARK_PSO_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace wmark::pso {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Swarm parameters. There is no inertia term; velocities are clamped to
/// +/- velocity_clamp * (hi - lo) per dimension instead.
struct SwarmConfig {
  std::size_t particles = 100;
  std::size_t max_iterations = 100;
  double c1 = 2.0;
  double c2 = 2.0;
  double velocity_clamp = 0.2;
  /// Stop after this many iterations without a global-best improvement.
  std::size_t stagnation_window = 10;
  std::uint64_t seed = 0x5eed;
  /// Objective evaluations spent on a compass search around the swarm's best
  /// point once the swarm stops. 0 disables it.
  std::size_t polish_evaluations = 200;
  /// Worker threads for fitness evaluation; 0 picks hardware concurrency.
  /// Results do not depend on this value.
  unsigned threads = 1;

  void validate() const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_fitness = 0.0;
};

/// v + c1*r1*(y - x) + c2*r2*(g - x), then clamped to [-v_max, v_max].
std::vector<double> update_velocity(const Particle& p,
                                    std::span<const double> global_best,
                                    const SwarmConfig& cfg,
                                    std::span<const double> r1,
                                    std::span<const double> r2,
                                    std::span<const double> v_max);

/// x += v. A component that leaves its box lands on the nearest bound and
/// its velocity is negated and halved.
void update_position(Particle& p, std::span<const Interval> bounds);

/// Velocity clamp per dimension for the given box.
std::vector<double> velocity_limits(std::span<const Interval> bounds,
                                    const SwarmConfig& cfg);

/// Maximized. Must be a pure function of the position.
using Objective = std::function<double(std::span<const double>)>;

struct Result {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  /// Global-best fitness after initialization and after every iteration.
  std::vector<double> trace;
  std::size_t iterations = 0;
  bool stagnated = false;
  /// Whether the compass search improved on the swarm. When it did, the
  /// trace ends with one extra entry holding the polished fitness.
  bool polished = false;
};

/// Maximizes `objective` over the box. Deterministic for a fixed seed
/// regardless of thread count: each particle draws from its own stream.
Result optimize(const Objective& objective, std::span<const Interval> bounds,
                const SwarmConfig& cfg);

}  // namespace wmark::pso

#endif  // WMARK_PSO_HPP_

// Copyright 2026 The bnnv Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bnnv/dcim.hpp"
#include "bnnv/qubo.hpp"

namespace bnnv {

enum class Cooling { geometric, linear };

struct SaSchedule {
  double t_start = 1.0;
  double t_end = 1e-3;
  std::size_t sweeps = 1000;
  Cooling cooling = Cooling::geometric;
  std::uint64_t seed = 0;

  void validate() const;
  double temperature(std::size_t sweep) const;

  /// T_start = max|Q|, T_end = 1e-3 T_start, 1000 geometric sweeps.
  static SaSchedule defaults(const SquareMatrix& q, std::uint64_t seed);
};

/// Single-flip Metropolis chain over a QUBO with cached local fields.
class MetropolisSampler {
 public:
  MetropolisSampler(const SquareMatrix& q, double offset, BitVector init);

  /// Visits every variable once in `order`; returns accepted flips.
  std::size_t sweep(std::span<const std::size_t> order, double temperature, Rng& rng);
  const BitVector& state() const { return q_; }
  double energy() const { return energy_; }
  double delta(std::size_t i) const;

 private:
  void flip(std::size_t i);

  const SquareMatrix& mat_;
  BitVector q_;
  std::vector<double> field_;  // sum_{j != i} Q_ij q_j
  double energy_ = 0.0;
};

/// Metropolis simulated annealing; a fresh seeded permutation of the
/// variables every sweep. Reports the terminal state; the trace holds the
/// energy after each sweep.
AnnealResult sa_solve(const QuboInstance& inst, const SaSchedule& schedule,
                      std::optional<BitVector> q_init = std::nullopt);

}  // namespace bnnv

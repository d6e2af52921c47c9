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

#include "bnnv/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bnnv {

void SaSchedule::validate() const {
  if (!(t_end > 0.0) || !(t_start >= t_end)) {
    throw std::invalid_argument("SA schedule needs T_start >= T_end > 0");
  }
  if (sweeps == 0) throw std::invalid_argument("SA schedule needs at least one sweep");
}

double SaSchedule::temperature(std::size_t sweep) const {
  if (sweeps <= 1) return t_start;
  const double f = static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
  if (cooling == Cooling::linear) return t_start + f * (t_end - t_start);
  return t_start * std::pow(t_end / t_start, f);
}

SaSchedule SaSchedule::defaults(const SquareMatrix& q, std::uint64_t seed) {
  SaSchedule s;
  s.t_start = q.max_abs() > 0.0 ? q.max_abs() : 1.0;
  s.t_end = 1e-3 * s.t_start;
  s.seed = seed;
  return s;
}

MetropolisSampler::MetropolisSampler(const SquareMatrix& q, double offset, BitVector init)
    : mat_(q), q_(std::move(init)), field_(q.size(), 0.0) {
  if (q_.size() != q.size()) throw std::invalid_argument("initial state length mismatch");
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto row = q.row(i);
    double f = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (j != i && q_[j]) f += row[j];
    }
    field_[i] = f;
  }
  energy_ = qubo_energy(q, offset, q_);
}

double MetropolisSampler::delta(std::size_t i) const {
  return (q_[i] ? -1.0 : 1.0) * (mat_(i, i) + 2.0 * field_[i]);
}

void MetropolisSampler::flip(std::size_t i) {
  energy_ += delta(i);
  q_[i] ^= 1U;
  const double d = q_[i] ? 1.0 : -1.0;
  for (std::size_t k = 0; k < q_.size(); ++k) {
    if (k != i) field_[k] += d * mat_(k, i);
  }
}

std::size_t MetropolisSampler::sweep(std::span<const std::size_t> order, double temperature,
                                     Rng& rng) {
  std::size_t accepted = 0;
  for (auto i : order) {
    const double de = delta(i);
    if (de <= 0.0 || uniform01(rng) < std::exp(-de / temperature)) {
      flip(i);
      ++accepted;
    }
  }
  return accepted;
}

AnnealResult sa_solve(const QuboInstance& inst, const SaSchedule& schedule,
                      std::optional<BitVector> q_init) {
  schedule.validate();
  Rng rng(schedule.seed);
  BitVector q0 = q_init ? std::move(*q_init) : random_bits(inst.size(), rng);
  MetropolisSampler chain(inst.q, inst.offset, std::move(q0));

  std::vector<std::size_t> order(inst.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  AnnealResult out;
  out.seed = schedule.seed;
  out.trace.reserve(schedule.sweeps);
  for (std::size_t k = 0; k < schedule.sweeps; ++k) {
    std::shuffle(order.begin(), order.end(), rng);
    chain.sweep(order, schedule.temperature(k), rng);
    out.trace.push_back(chain.energy());
  }
  out.q = chain.state();
  out.energy = inst.energy(out.q);
  out.sweeps = schedule.sweeps;
  return out;
}

}  // namespace bnnv

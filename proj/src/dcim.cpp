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

#include "bnnv/dcim.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bnnv {

NoiseModel NoiseModel::defaults(double v_start, double v_end) {
  const double mid = 0.5 * (v_start + v_end);
  const double w = 0.05 * (v_end - v_start);
  return {{0.03, mid, w}, {0.08, mid, w}};
}

NoiseModel NoiseModel::silent() { return {{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}}; }

void AnnealSchedule::validate() const {
  if (!(v_start < v_end)) throw std::invalid_argument("schedule needs v_start < v_end");
  if (steps == 0) throw std::invalid_argument("schedule needs at least one step");
  if (refresh_period == 0) throw std::invalid_argument("refresh period must be >= 1");
}

double AnnealSchedule::voltage(std::size_t t) const {
  if (steps <= 1) return v_start;
  const double f = static_cast<double>(t) / static_cast<double>(steps - 1);
  return v_start + f * (v_end - v_start);
}

BitSlicedArray::BitSlicedArray(QuantizedQubo nominal)
    : nominal_(std::move(nominal)), magnitude_(nominal_.magnitude), sign_(nominal_.negative) {
  if (nominal_.magnitude.size() != nominal_.n * nominal_.n ||
      nominal_.negative.size() != nominal_.magnitude.size()) {
    throw std::invalid_argument("quantized matrix storage does not match its dimension");
  }
}

bool BitSlicedArray::bit(int plane, std::size_t i, std::size_t j) const {
  const std::size_t cell = i * dim() + j;
  if (plane == magnitude_bits()) return sign_[cell] != 0;
  if (plane < 0 || plane > magnitude_bits()) throw std::out_of_range("bit plane out of range");
  return ((magnitude_[cell] >> plane) & 1U) != 0;
}

void BitSlicedArray::refresh() {
  magnitude_ = nominal_.magnitude;
  sign_ = nominal_.negative;
}

std::uint64_t BitSlicedArray::effective_hash() const {
  std::uint64_t h = fnv1a({reinterpret_cast<const std::uint8_t*>(magnitude_.data()),
                           magnitude_.size() * sizeof(std::uint32_t)});
  return fnv1a(sign_, h);
}

std::uint64_t BitSlicedArray::nominal_hash() const {
  std::uint64_t h = fnv1a({reinterpret_cast<const std::uint8_t*>(nominal_.magnitude.data()),
                           nominal_.magnitude.size() * sizeof(std::uint32_t)});
  return fnv1a(nominal_.negative, h);
}

std::size_t pseudo_read(BitSlicedArray& array, const NoiseModel& noise, double v, Rng& rng) {
  return array.pseudo_read(noise, v, rng, [](std::size_t, std::size_t, std::int64_t) {});
}

void refresh(BitSlicedArray& array) { array.refresh(); }

std::size_t sweep(BitSlicedArray& array, BitVector& q, std::span<const std::size_t> order,
                  const NoiseModel* noise, double v, Rng& rng) {
  const std::size_t n = array.dim();
  const std::size_t pinned = array.nominal().pinned;
  if (q.size() != pinned) throw std::invalid_argument("state length does not match problem size");
  std::size_t flips = 0;
  for (auto i : order) {
    if (noise) array.pseudo_read(*noise, v, rng, [](std::size_t, std::size_t, std::int64_t) {});
    std::int64_t s = array.effective(i * n + pinned);
    for (std::size_t j = 0; j < pinned; ++j) {
      if (j != i && q[j]) s += array.effective(i * n + j);
    }
    if ((q[i] ? -s : s) < 0) {
      q[i] ^= 1U;
      ++flips;
    }
  }
  return flips;
}

DcimAnnealer::DcimAnnealer(const QuantizedQubo& qq, BitVector q_init)
    : array_(qq), problem_(qq.pinned), q_(std::move(q_init)) {
  if (qq.pinned + 1 != qq.n) throw std::invalid_argument("pinned variable must be the last index");
  if (q_.size() != problem_) throw std::invalid_argument("initial state length mismatch");
  const std::size_t n = array_.dim();
  eff_sum_.assign(problem_, 0);
  for (std::size_t i = 0; i < problem_; ++i) {
    std::int64_t s = array_.nominal_value(i * n + problem_);
    for (std::size_t j = 0; j < problem_; ++j) {
      if (j != i && q_[j]) s += array_.nominal_value(i * n + j);
    }
    eff_sum_[i] = s;
  }
  nom_sum_ = eff_sum_;
}

void DcimAnnealer::on_noise(std::size_t i, std::size_t j, std::int64_t delta) {
  if (i >= problem_ || i == j) return;
  if (j == problem_ || q_[j]) eff_sum_[i] += delta;
}

std::size_t DcimAnnealer::pseudo_read(const NoiseModel& noise, double v, Rng& rng) {
  return array_.pseudo_read(noise, v, rng,
                            [this](std::size_t i, std::size_t j, std::int64_t delta) { on_noise(i, j, delta); });
}

void DcimAnnealer::refresh() {
  array_.refresh();
  eff_sum_ = nom_sum_;
}

void DcimAnnealer::flip(std::size_t j) {
  q_[j] ^= 1U;
  const std::int64_t d = q_[j] ? 1 : -1;
  const std::size_t n = array_.dim();
  for (std::size_t i = 0; i < problem_; ++i) {
    if (i == j) continue;
    eff_sum_[i] += d * array_.effective(i * n + j);
    nom_sum_[i] += d * array_.nominal_value(i * n + j);
  }
}

std::size_t DcimAnnealer::sweep(std::span<const std::size_t> order, const NoiseModel* noise, double v,
                                Rng& rng) {
  std::size_t flips = 0;
  for (auto i : order) {
    if (noise) pseudo_read(*noise, v, rng);
    const std::int64_t s = eff_sum_[i];
    // dE = 2 (1 - 2 q_i) s_i * scale; scale > 0
    if ((q_[i] ? -s : s) < 0) {
      flip(i);
      ++flips;
    }
  }
  return flips;
}

double DcimAnnealer::nominal_energy() const {
  const std::size_t n = array_.dim();
  std::int64_t acc = array_.nominal_value(problem_ * n + problem_);
  for (std::size_t i = 0; i < problem_; ++i) {
    if (q_[i]) acc += nom_sum_[i] + array_.nominal_value(problem_ * n + i);
  }
  return static_cast<double>(acc) * array_.nominal().scale + array_.nominal().offset;
}

AnnealResult anneal(const QuantizedQubo& qq, const AnnealSchedule& schedule, const NoiseModel& noise,
                    std::uint64_t seed, std::optional<BitVector> q_init) {
  schedule.validate();
  Rng rng(seed);
  BitVector q0 = q_init ? std::move(*q_init) : random_bits(qq.pinned, rng);
  DcimAnnealer engine(qq, std::move(q0));

  std::vector<std::size_t> order(qq.pinned);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const bool per_spin = schedule.granularity == NoiseGranularity::spin;

  AnnealResult out;
  out.seed = seed;
  out.trace.reserve(schedule.steps);
  for (std::size_t t = 0; t < schedule.steps; ++t) {
    if (t % schedule.refresh_period == 0) engine.refresh();
    const double v = schedule.voltage(t);
    if (schedule.order == ScanOrder::permuted) std::shuffle(order.begin(), order.end(), rng);
    if (!per_spin) engine.pseudo_read(noise, v, rng);
    engine.sweep(order, per_spin ? &noise : nullptr, v, rng);
    out.trace.push_back(engine.nominal_energy());
  }
  out.q = engine.state();
  out.energy = engine.nominal_energy();
  out.sweeps = schedule.steps;
  return out;
}

}  // namespace bnnv

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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bnnv/bits.hpp"
#include "bnnv/ising.hpp"

namespace bnnv {

/// p(V) = p_max / (1 + exp((V - v_th) / width)); non-increasing in V.
struct SigmoidCurve {
  double p_max = 0.0;
  double v_th = 0.0;
  double width = 1.0;

  double at(double v) const { return p_max / (1.0 + std::exp((v - v_th) / width)); }
};

/// Pseudo-read flip rates for magnitude bits storing 0 (p01) and 1 (p10).
struct NoiseModel {
  SigmoidCurve p01;
  SigmoidCurve p10;

  double flip_probability(bool stored_one, double v) const {
    return stored_one ? p10.at(v) : p01.at(v);
  }
  /// p_max 0.08 for stored ones and 0.03 for stored zeros, threshold at the
  /// middle of [v_start, v_end], width 5% of the range.
  static NoiseModel defaults(double v_start, double v_end);
  static NoiseModel silent();
};

enum class ScanOrder { fixed, permuted };
enum class NoiseGranularity { sweep, spin };

struct AnnealSchedule {
  double v_start = 0.40;
  double v_end = 0.90;
  std::size_t steps = 1000;
  std::size_t refresh_period = 10;
  ScanOrder order = ScanOrder::fixed;
  NoiseGranularity granularity = NoiseGranularity::sweep;

  /// Throws std::invalid_argument unless v_start < v_end, steps >= 1 and
  /// refresh_period >= 1.
  void validate() const;
  /// Linear ramp from v_start (t = 0) to v_end (t = steps - 1).
  double voltage(std::size_t t) const;
};

struct AnnealResult {
  BitVector q;
  double energy = 0.0;
  std::vector<double> trace;
  std::size_t sweeps = 0;
  std::uint64_t seed = 0;

  bool operator==(const AnnealResult&) const = default;
};

/// Simulated SRAM weight array: a golden quantized copy plus the effective
/// bits the MAC actually reads. Magnitude planes are 0..bits-2, the sign
/// plane is bits-1. Pseudo-reads only ever touch magnitude planes.
class BitSlicedArray {
 public:
  explicit BitSlicedArray(QuantizedQubo nominal);

  const QuantizedQubo& nominal() const { return nominal_; }
  std::size_t dim() const { return nominal_.n; }
  std::size_t cells() const { return magnitude_.size(); }
  int magnitude_bits() const { return nominal_.bits - 1; }
  std::size_t stored_bits() const { return cells() * static_cast<std::size_t>(nominal_.bits); }

  bool bit(int plane, std::size_t i, std::size_t j) const;
  std::int64_t effective(std::size_t i, std::size_t j) const { return effective(i * dim() + j); }
  std::int64_t effective(std::size_t cell) const {
    const auto m = static_cast<std::int64_t>(magnitude_[cell]);
    return sign_[cell] ? -m : m;
  }
  std::int64_t nominal_value(std::size_t cell) const {
    const auto m = static_cast<std::int64_t>(nominal_.magnitude[cell]);
    return nominal_.negative[cell] ? -m : m;
  }

  /// Flips every magnitude bit independently with the stored-value dependent
  /// probability at supply `v`. For each flip calls on_flip(row, col,
  /// delta) with the signed change of the effective integer value. Drift accumulates
  /// until refresh(). Returns the number of flipped bits.
  template <class OnFlip>
  std::size_t pseudo_read(const NoiseModel& noise, double v, Rng& rng, OnFlip&& on_flip);

  /// Restores the effective planes to the nominal values.
  void refresh();

  bool sign_plane_intact() const { return sign_ == nominal_.negative; }
  bool matches_nominal() const { return magnitude_ == nominal_.magnitude && sign_plane_intact(); }
  std::uint64_t effective_hash() const;
  std::uint64_t nominal_hash() const;

 private:
  QuantizedQubo nominal_;
  std::vector<std::uint32_t> magnitude_;
  std::vector<std::uint8_t> sign_;
};

/// pseudo_read without observer.
std::size_t pseudo_read(BitSlicedArray& array, const NoiseModel& noise, double v, Rng& rng);
void refresh(BitSlicedArray& array);

/// One sequential scan that recomputes every row sum straight off the
/// effective array, as the in-memory MAC does. `q` holds the N problem
/// bits. With `noise` set, a pseudo-read precedes each spin. Returns the
/// number of flips.
std::size_t sweep(BitSlicedArray& array, BitVector& q, std::span<const std::size_t> order,
                  const NoiseModel* noise, double v, Rng& rng);

/// Annealing engine that keeps integer row sums of both the effective and
/// the nominal array up to date, so a spin decision costs O(1) and a flip
/// O(N).
class DcimAnnealer {
 public:
  DcimAnnealer(const QuantizedQubo& qq, BitVector q_init);

  const BitVector& state() const { return q_; }
  const BitSlicedArray& array() const { return array_; }

  std::size_t pseudo_read(const NoiseModel& noise, double v, Rng& rng);
  void refresh();
  /// Same decisions as the free sweep(); noise as there.
  std::size_t sweep(std::span<const std::size_t> order, const NoiseModel* noise, double v, Rng& rng);

  /// Energy of the current state under the golden (dequantized) matrix.
  double nominal_energy() const;
  /// Effective row sum in integer units, pinned term included.
  std::int64_t effective_row_sum(std::size_t i) const { return eff_sum_[i]; }

 private:
  void flip(std::size_t j);
  void on_noise(std::size_t i, std::size_t j, std::int64_t delta);

  BitSlicedArray array_;
  std::size_t problem_ = 0;
  BitVector q_;
  std::vector<std::int64_t> eff_sum_;
  std::vector<std::int64_t> nom_sum_;
};

/// Runs `schedule.steps` iterations of refresh-if-due, pseudo-read and a
/// sequential sweep, ramping the supply linearly. The terminal state is
/// reported, not the best one seen. `q_init` defaults to seeded random
/// bits. Energies are measured on the golden matrix.
AnnealResult anneal(const QuantizedQubo& qq, const AnnealSchedule& schedule, const NoiseModel& noise,
                    std::uint64_t seed, std::optional<BitVector> q_init = std::nullopt);

template <class OnFlip>
std::size_t BitSlicedArray::pseudo_read(const NoiseModel& noise, double v, Rng& rng, OnFlip&& on_flip) {
  const int mbits = magnitude_bits();
  if (mbits <= 0) return 0;
  const double p0 = noise.p01.at(v);
  const double p1 = noise.p10.at(v);
  const double hi = std::max(p0, p1);
  if (!(hi > 0.0)) return 0;

  // Candidate bits are drawn with geometric skips at rate `hi` and then
  // thinned to the rate of their current value. Planes are walked one at a
  // time so the row and column follow the cell without division.
  const std::size_t n = dim();
  const std::size_t total = cells();
  const double inv_log_keep = 1.0 / std::log1p(-std::min(hi, 1.0 - 1e-16));
  auto skip = [&]() { return std::floor(std::log(1.0 - uniform01(rng)) * inv_log_keep); };
  std::size_t flips = 0;
  for (int b = 0; b < mbits; ++b) {
    const std::uint32_t mask = std::uint32_t{1} << b;
    std::size_t cell = 0, i = 0, j = 0;
    for (double gap = skip(); gap < static_cast<double>(total - cell); gap = skip()) {
      const auto g = static_cast<std::size_t>(gap);
      cell += g;
      j += g;
      if (j >= n) {
        i += j / n;
        j %= n;
      }
      const bool one = (magnitude_[cell] & mask) != 0;
      const double p = one ? p1 : p0;
      if (p >= hi || uniform01(rng) * hi < p) {
        magnitude_[cell] ^= mask;
        const std::int64_t step = one ? -static_cast<std::int64_t>(mask) : static_cast<std::int64_t>(mask);
        on_flip(i, j, sign_[cell] ? -step : step);
        ++flips;
      }
      if (++cell == total) break;
      if (++j == n) {
        j = 0;
        ++i;
      }
    }
  }
  return flips;
}

}  // namespace bnnv

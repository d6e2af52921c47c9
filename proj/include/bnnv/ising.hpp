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
#include <iosfwd>
#include <span>
#include <vector>

#include "bnnv/qubo.hpp"

namespace bnnv {

/// H(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i + C, spins in {-1,+1}.
/// J is stored full and symmetric with a zero diagonal.
struct IsingInstance {
  SquareMatrix j;
  std::vector<double> h;
  double c = 0.0;

  std::size_t size() const { return h.size(); }
};

using SpinVector = std::vector<std::int8_t>;

SpinVector bits_to_spins(std::span<const std::uint8_t> bits);
BitVector spins_to_bits(std::span<const std::int8_t> spins);

double ising_energy(const IsingInstance& inst, std::span<const std::int8_t> spins);

/// Substitutes q = (1 + s) / 2.
IsingInstance qubo_to_ising(const SquareMatrix& q, double offset);
inline IsingInstance qubo_to_ising(const QuboInstance& inst) { return qubo_to_ising(inst.q, inst.offset); }

/// Substitutes s = 2q - 1. The registry of the result is all-auxiliary.
QuboInstance ising_to_qubo(const IsingInstance& inst);

/// 2 s_i (sum_{j != i} J_ij s_j + h_i).
double delta_e_ising(const IsingInstance& inst, std::span<const std::int8_t> spins, std::size_t i);

/// (1 - 2 q_i) (Q_ii + 2 sum_{j != i} Q_ij q_j).
double delta_e_qubo(const SquareMatrix& q, std::span<const std::uint8_t> bits, std::size_t i);
inline double delta_e_qubo(const QuboInstance& inst, std::span<const std::uint8_t> bits, std::size_t i) {
  return delta_e_qubo(inst.q, bits, i);
}

/// QUBO of size N + 1 whose problem block has a zero diagonal and whose last
/// variable is clamped to 1. Diagonal Q_ii moves to the couplings
/// (i, p) and (p, i) as Q_ii / 2. With q_p = 1,
/// pinned_energy(q) == source energy(q) for every q.
struct PinnedQubo {
  SquareMatrix q;
  std::size_t pinned = 0;
  /// Constant carried over from the source so energies agree exactly.
  double offset = 0.0;

  std::size_t num_problem_vars() const { return pinned; }
};

PinnedQubo pin_embed(const SquareMatrix& q, double offset);
inline PinnedQubo pin_embed(const QuboInstance& inst) { return pin_embed(inst.q, inst.offset); }

/// Energy of problem bits (length N) with the pinned bit set to 1.
double pinned_energy(const PinnedQubo& pq, std::span<const std::uint8_t> bits);

/// MAC-style row sum s_i = sum_j Q~_ij q_j with q_p = 1.
double pinned_row_sum(const PinnedQubo& pq, std::span<const std::uint8_t> bits, std::size_t i);

/// 2 (1 - 2 q_i) s_i. `bits` holds the N problem bits; i < N.
double delta_e_pinned(const PinnedQubo& pq, std::span<const std::uint8_t> bits, std::size_t i);

/// Sign-magnitude integer matrix: value = (negative ? -1 : 1) * magnitude,
/// magnitude < 2^(bits-1). Dequantized entry = value * scale.
struct QuantizedQubo {
  std::size_t n = 0;  // includes the pinned variable
  std::size_t pinned = 0;
  int bits = 8;
  double scale = 1.0;
  double offset = 0.0;
  std::vector<std::uint32_t> magnitude;
  std::vector<std::uint8_t> negative;

  std::size_t num_problem_vars() const { return pinned; }
  std::int64_t value(std::size_t i, std::size_t j) const {
    const std::size_t k = i * n + j;
    const auto m = static_cast<std::int64_t>(magnitude[k]);
    return negative[k] ? -m : m;
  }
  double dequantized(std::size_t i, std::size_t j) const {
    return static_cast<double>(value(i, j)) * scale;
  }
  std::uint32_t max_magnitude() const { return (std::uint32_t{1} << (bits - 1)) - 1U; }

  bool operator==(const QuantizedQubo&) const = default;
};

/// Per-matrix scale s = max|Q~| / (2^(bits-1) - 1); entries round half away
/// from zero. An all-zero matrix gets s = 1. bits in [2, 32].
QuantizedQubo quantize(const PinnedQubo& pq, int bits);

/// Lossless quantization: the scale is the coarsest power-of-two grid that
/// holds every entry and the width is whatever the largest entry needs plus a
/// sign bit. Throws std::domain_error if that would exceed 32 bits.
QuantizedQubo quantize_exact(const PinnedQubo& pq);

/// Dequantized copy as a PinnedQubo.
PinnedQubo dequantize(const QuantizedQubo& qq);

inline constexpr int kQuantizedFormatVersion = 1;

/// JSON header line (bits, scale, n, pinned, offset) then `i j value` integer
/// lines for every nonzero entry, full matrix (the stored array need not be
/// symmetric).
void write_quantized(std::ostream& out, const QuantizedQubo& qq);
QuantizedQubo read_quantized(std::istream& in);

}  // namespace bnnv

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
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bnnv {

/// Boolean vector, one byte per variable, values 0 or 1.
using BitVector = std::vector<std::uint8_t>;

/// xoshiro256** with its state filled by SplitMix64 from the seed.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) {
    for (auto& w : s_) {
      seed += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = seed;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      w = z ^ (z >> 31);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t out = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return out;
  }

  bool operator==(const Rng&) const = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Number of positions where the two vectors differ.
std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

std::size_t popcount(std::span<const std::uint8_t> bits);

/// Element-wise XOR of equal-length vectors.
BitVector xor_bits(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// "0110..." text form.
std::string to_bit_string(std::span<const std::uint8_t> bits);
BitVector from_bit_string(std::string_view text);

/// Packs bits LSB-first into bytes and renders each byte as two lowercase
/// hex digits. Bit i lives in byte i/8 at position i%8.
std::string to_hex(std::span<const std::uint8_t> bits);
BitVector from_hex(std::string_view hex, std::size_t length);

/// SplitMix64 finalizer; used for all seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// Seed of run `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

BitVector random_bits(std::size_t n, Rng& rng);

/// FNV-1a over a byte range, chained through `seed`.
std::uint64_t fnv1a(std::span<const std::uint8_t> bytes,
                    std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace bnnv

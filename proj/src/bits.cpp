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

#include "bnnv/bits.hpp"

#include <stdexcept>

namespace bnnv {

std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hamming: length mismatch");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += (a[i] != b[i]);
  }
  return d;
}

std::size_t popcount(std::span<const std::uint8_t> bits) {
  std::size_t c = 0;
  for (auto b : bits) c += (b != 0);
  return c;
}

BitVector xor_bits(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("xor_bits: length mismatch");
  }
  BitVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = static_cast<std::uint8_t>((a[i] ^ b[i]) & 1U);
  }
  return out;
}

std::string to_bit_string(std::span<const std::uint8_t> bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) s[i] = '1';
  }
  return s;
}

BitVector from_bit_string(std::string_view text) {
  BitVector out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      out[i] = 1;
    } else if (text[i] != '0') {
      throw std::invalid_argument("bit string contains a character other than 0/1");
    }
  }
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bits) {
  static constexpr char digits[] = "0123456789abcdef";
  const std::size_t bytes = (bits.size() + 7) / 8;
  std::string out;
  out.reserve(bytes * 2);
  for (std::size_t b = 0; b < bytes; ++b) {
    unsigned v = 0;
    for (std::size_t k = 0; k < 8 && b * 8 + k < bits.size(); ++k) {
      if (bits[b * 8 + k]) v |= 1U << k;
    }
    out.push_back(digits[v >> 4]);
    out.push_back(digits[v & 0xF]);
  }
  return out;
}

namespace {
unsigned hex_value(char c) {
  if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
  if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
  if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
  throw std::invalid_argument("invalid hex digit");
}
}  // namespace

BitVector from_hex(std::string_view hex, std::size_t length) {
  if (hex.size() != 2 * ((length + 7) / 8)) {
    throw std::invalid_argument("hex string length does not match bit count");
  }
  BitVector out(length);
  for (std::size_t b = 0; b * 2 < hex.size(); ++b) {
    const unsigned v = (hex_value(hex[2 * b]) << 4) | hex_value(hex[2 * b + 1]);
    for (std::size_t k = 0; k < 8 && b * 8 + k < length; ++k) {
      out[b * 8 + k] = static_cast<std::uint8_t>((v >> k) & 1U);
    }
  }
  return out;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ (index * 0xd1b54a32d192ed03ULL));
}

BitVector random_bits(std::size_t n, Rng& rng) {
  BitVector out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng() >> 63);
  return out;
}

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (auto c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace bnnv

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

#include "bnnv/ising.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace bnnv {

SpinVector bits_to_spins(std::span<const std::uint8_t> bits) {
  SpinVector s(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? 1 : -1;
  return s;
}

BitVector spins_to_bits(std::span<const std::int8_t> spins) {
  BitVector b(spins.size());
  for (std::size_t i = 0; i < spins.size(); ++i) b[i] = spins[i] > 0 ? 1 : 0;
  return b;
}

double ising_energy(const IsingInstance& inst, std::span<const std::int8_t> spins) {
  const std::size_t n = inst.size();
  if (spins.size() != n) throw std::invalid_argument("spin vector length mismatch");
  double pair = 0.0;
  double field = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = inst.j.row(i);
    double acc = 0.0;
    for (std::size_t k = i + 1; k < n; ++k) acc += row[k] * spins[k];
    pair += spins[i] * acc;
    field += inst.h[i] * spins[i];
  }
  return -pair - field + inst.c;
}

IsingInstance qubo_to_ising(const SquareMatrix& q, double offset) {
  const std::size_t n = q.size();
  IsingInstance out{SquareMatrix(n), std::vector<double>(n, 0.0), offset};
  for (std::size_t i = 0; i < n; ++i) {
    double lin = 0.5 * q(i, i);
    out.c += 0.5 * q(i, i);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      out.j(i, k) = -0.5 * q(i, k);
      lin += 0.5 * q(i, k);
      out.c += 0.25 * q(i, k);
    }
    out.h[i] = -lin;
  }
  return out;
}

QuboInstance ising_to_qubo(const IsingInstance& inst) {
  const std::size_t n = inst.size();
  SquareMatrix q(n);
  double offset = inst.c;
  for (std::size_t i = 0; i < n; ++i) {
    double diag = -2.0 * inst.h[i];
    offset += inst.h[i];
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      q(i, k) = -2.0 * inst.j(i, k);
      diag += 2.0 * inst.j(i, k);
      if (k > i) offset -= inst.j(i, k);
    }
    q(i, i) = diag;
  }
  return make_qubo(std::move(q), offset);
}

double delta_e_ising(const IsingInstance& inst, std::span<const std::int8_t> spins, std::size_t i) {
  const auto row = inst.j.row(i);
  double field = inst.h[i];
  for (std::size_t k = 0; k < inst.size(); ++k) {
    if (k != i) field += row[k] * spins[k];
  }
  return 2.0 * spins[i] * field;
}

double delta_e_qubo(const SquareMatrix& q, std::span<const std::uint8_t> bits, std::size_t i) {
  const auto row = q.row(i);
  double acc = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (k != i && bits[k]) acc += row[k];
  }
  return (1.0 - 2.0 * bits[i]) * (row[i] + 2.0 * acc);
}

PinnedQubo pin_embed(const SquareMatrix& q, double offset) {
  const std::size_t n = q.size();
  PinnedQubo out{SquareMatrix(n + 1), n, offset};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i) out.q(i, k) = q(i, k);
    }
    out.q(i, n) = 0.5 * q(i, i);
    out.q(n, i) = 0.5 * q(i, i);
  }
  return out;
}

double pinned_energy(const PinnedQubo& pq, std::span<const std::uint8_t> bits) {
  if (bits.size() != pq.pinned) throw std::invalid_argument("problem bit count mismatch");
  BitVector full(bits.begin(), bits.end());
  full.push_back(1);
  return qubo_energy(pq.q, pq.offset, full);
}

double pinned_row_sum(const PinnedQubo& pq, std::span<const std::uint8_t> bits, std::size_t i) {
  const auto row = pq.q.row(i);
  double s = row[pq.pinned];
  for (std::size_t k = 0; k < pq.pinned; ++k) {
    if (bits[k]) s += row[k];
  }
  return s;
}

double delta_e_pinned(const PinnedQubo& pq, std::span<const std::uint8_t> bits, std::size_t i) {
  if (i >= pq.pinned) throw std::invalid_argument("cannot flip the pinned variable");
  return 2.0 * (1.0 - 2.0 * bits[i]) * pinned_row_sum(pq, bits, i);
}

namespace {

QuantizedQubo quantize_with_scale(const PinnedQubo& pq, int bits, double scale) {
  QuantizedQubo out;
  out.n = pq.q.size();
  out.pinned = pq.pinned;
  out.bits = bits;
  out.scale = scale;
  out.offset = pq.offset;
  out.magnitude.resize(out.n * out.n);
  out.negative.resize(out.n * out.n);
  const double cap = static_cast<double>(out.max_magnitude());
  const auto data = pq.q.data();
  for (std::size_t k = 0; k < data.size(); ++k) {
    // std::round is half-away-from-zero
    const double r = std::min(std::round(std::abs(data[k]) / scale), cap);
    out.magnitude[k] = static_cast<std::uint32_t>(r);
    out.negative[k] = (data[k] < 0.0 && r > 0.0) ? 1 : 0;
  }
  return out;
}

}  // namespace

QuantizedQubo quantize(const PinnedQubo& pq, int bits) {
  if (bits < 2 || bits > 32) throw std::invalid_argument("quantization width must be in [2, 32]");
  const double peak = pq.q.max_abs();
  const double levels = static_cast<double>((std::uint64_t{1} << (bits - 1)) - 1);
  const double scale = peak == 0.0 ? 1.0 : peak / levels;
  return quantize_with_scale(pq, bits, scale);
}

QuantizedQubo quantize_exact(const PinnedQubo& pq) {
  const double peak = pq.q.max_abs();
  if (peak == 0.0) return quantize_with_scale(pq, 2, 1.0);
  // coarsest grid 2^e with every entry an integer multiple
  int e = static_cast<int>(std::floor(std::log2(peak)));
  auto fits = [&](int exp) {
    const double g = std::ldexp(1.0, exp);
    for (double v : pq.q.data()) {
      const double m = v / g;
      if (m != std::floor(m)) return false;
    }
    return true;
  };
  while (!fits(e)) {
    --e;
    if (std::ldexp(peak, -e) >= 0x1.0p31) {
      throw std::domain_error("matrix entries do not fit a 32-bit fixed-point grid");
    }
  }
  const double scale = std::ldexp(1.0, e);
  const auto top = static_cast<std::uint64_t>(peak / scale);
  const int bits = static_cast<int>(std::bit_width(top)) + 1;
  if (bits > 32) throw std::domain_error("matrix entries do not fit 32 bits");
  return quantize_with_scale(pq, std::max(bits, 2), scale);
}

PinnedQubo dequantize(const QuantizedQubo& qq) {
  PinnedQubo out{SquareMatrix(qq.n), qq.pinned, qq.offset};
  for (std::size_t i = 0; i < qq.n; ++i) {
    for (std::size_t k = 0; k < qq.n; ++k) out.q(i, k) = qq.dequantized(i, k);
  }
  return out;
}

void write_quantized(std::ostream& out, const QuantizedQubo& qq) {
  nlohmann::json h;
  h["format"] = "bnnv-quantized";
  h["format_version"] = kQuantizedFormatVersion;
  h["bits"] = qq.bits;
  h["scale"] = format_double(qq.scale);
  h["n"] = qq.n;
  h["pinned"] = qq.pinned;
  h["offset"] = format_double(qq.offset);
  std::size_t nnz = 0;
  for (auto m : qq.magnitude) nnz += (m != 0);
  h["nnz"] = nnz;
  out << h.dump() << '\n';
  for (std::size_t i = 0; i < qq.n; ++i) {
    for (std::size_t k = 0; k < qq.n; ++k) {
      const auto v = qq.value(i, k);
      if (v != 0) out << i << ' ' << k << ' ' << v << '\n';
    }
  }
}

QuantizedQubo read_quantized(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("quantized file is empty");
  const auto h = nlohmann::json::parse(line);
  if (h.value("format", "") != "bnnv-quantized" ||
      h.value("format_version", -1) != kQuantizedFormatVersion) {
    throw std::runtime_error("unsupported quantized format");
  }
  QuantizedQubo qq;
  qq.bits = h.at("bits").get<int>();
  qq.scale = parse_double(h.at("scale").get<std::string>());
  qq.n = h.at("n").get<std::size_t>();
  qq.pinned = h.at("pinned").get<std::size_t>();
  qq.offset = parse_double(h.at("offset").get<std::string>());
  qq.magnitude.assign(qq.n * qq.n, 0);
  qq.negative.assign(qq.n * qq.n, 0);
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t i = 0, k = 0;
    long long v = 0;
    if (!(ls >> i >> k >> v) || i >= qq.n || k >= qq.n) {
      throw std::runtime_error("malformed quantized entry: " + line);
    }
    const auto mag = static_cast<std::uint64_t>(v < 0 ? -v : v);
    if (mag > qq.max_magnitude()) throw std::runtime_error("quantized entry out of range");
    qq.magnitude[i * qq.n + k] = static_cast<std::uint32_t>(mag);
    qq.negative[i * qq.n + k] = v < 0 ? 1 : 0;
    ++seen;
  }
  if (seen != h.at("nnz").get<std::size_t>()) throw std::runtime_error("quantized file truncated");
  return qq;
}

}  // namespace bnnv

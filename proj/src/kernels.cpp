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

#include "bnnv/kernels.hpp"

#include <omp.h>

#include <stdexcept>

namespace bnnv::kernels {

namespace {

double row_dot(const SquareMatrix& q, std::span<const std::uint8_t> bits, std::size_t i) {
  const auto row = q.row(i);
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (bits[j]) acc += row[j];
  }
  return acc;
}

double row_delta(const SquareMatrix& q, std::span<const std::uint8_t> bits, std::size_t i) {
  const auto row = q.row(i);
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j != i && bits[j]) acc += row[j];
  }
  return (bits[i] ? -1.0 : 1.0) * (row[i] + 2.0 * acc);
}

void check(const SquareMatrix& q, std::span<const std::uint8_t> bits) {
  if (bits.size() != q.size()) throw std::invalid_argument("assignment length mismatch");
}

}  // namespace

std::vector<double> row_sums_serial(const SquareMatrix& q, std::span<const std::uint8_t> bits) {
  check(q, bits);
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = row_dot(q, bits, i);
  return out;
}

std::vector<double> row_sums_parallel(const SquareMatrix& q, std::span<const std::uint8_t> bits,
                                      int threads) {
  check(q, bits);
  const auto n = static_cast<std::ptrdiff_t>(q.size());
  std::vector<double> out(q.size());
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = row_dot(q, bits, static_cast<std::size_t>(i));
  }
  return out;
}

double quadratic_form_serial(const SquareMatrix& q, std::span<const std::uint8_t> bits) {
  const auto rows = row_sums_serial(q, bits);
  double e = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (bits[i]) e += rows[i];
  }
  return e;
}

double quadratic_form_parallel(const SquareMatrix& q, std::span<const std::uint8_t> bits, int threads) {
  const auto rows = row_sums_parallel(q, bits, threads);
  double e = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (bits[i]) e += rows[i];
  }
  return e;
}

std::vector<double> flip_deltas_serial(const SquareMatrix& q, std::span<const std::uint8_t> bits) {
  check(q, bits);
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = row_delta(q, bits, i);
  return out;
}

std::vector<double> flip_deltas_parallel(const SquareMatrix& q, std::span<const std::uint8_t> bits,
                                         int threads) {
  check(q, bits);
  const auto n = static_cast<std::ptrdiff_t>(q.size());
  std::vector<double> out(q.size());
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = row_delta(q, bits, static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace bnnv::kernels

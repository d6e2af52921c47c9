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

#include <cstdint>
#include <span>
#include <vector>

#include "bnnv/qubo.hpp"

namespace bnnv::kernels {

/// Serial references and OpenMP versions of the dense inner loops. The
/// parallel versions split work by row and reduce row partials in index
/// order, so they return bit-identical results for any thread count.

std::vector<double> row_sums_serial(const SquareMatrix& q, std::span<const std::uint8_t> bits);
std::vector<double> row_sums_parallel(const SquareMatrix& q, std::span<const std::uint8_t> bits,
                                      int threads);

double quadratic_form_serial(const SquareMatrix& q, std::span<const std::uint8_t> bits);
double quadratic_form_parallel(const SquareMatrix& q, std::span<const std::uint8_t> bits, int threads);

/// All N single-flip deltas (1 - 2q_i)(Q_ii + 2 sum_{j!=i} Q_ij q_j).
std::vector<double> flip_deltas_serial(const SquareMatrix& q, std::span<const std::uint8_t> bits);
std::vector<double> flip_deltas_parallel(const SquareMatrix& q, std::span<const std::uint8_t> bits,
                                         int threads);

}  // namespace bnnv::kernels

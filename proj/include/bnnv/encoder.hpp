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
#include <optional>
#include <span>

#include "bnnv/bits.hpp"
#include "bnnv/model.hpp"
#include "bnnv/poly.hpp"
#include "bnnv/qubo.hpp"

namespace bnnv {

struct EncodeOptions {
  int epsilon = 1;
  /// Defaults to 16 * lambda * max(epsilon, 1).
  std::optional<double> penalty;
  double lambda = 1.0;
};

/// Penalty polynomial of the verification problem, before matrix form.
struct EncodedPoly {
  PseudoBoolPoly poly;
  VariableRegistry registry;
  EncodingParams params;
  std::size_t num_constraints = 0;
};

/// Number of bits of the slack register for budget `epsilon`.
std::size_t slack_bits(int epsilon);

/// Builds the penalty polynomial for "find tau with |tau| <= epsilon that
/// flips the label of `input`".
///
/// Variables, in order: one perturbation bit per input, then for every
/// neuron (layer-major) the binary expansion of its XNOR match count (the
/// top bit is the neuron's activation), then the slack register. Neuron
/// inputs are affine in earlier variables: the perturbed input bit is
/// x_j XOR tau_j, a +1 weight passes its input and a -1 weight
/// complements it. Every layer input width must be 2^k - 1, which makes
/// the count fit exactly in k bits with the sign in the top bit.
///
/// Throws std::invalid_argument if the input is misclassified, a width is
/// not of the form 2^k - 1, epsilon < 0, or penalty <= lambda * epsilon.
EncodedPoly encode_poly(const BnnModel& model, std::span<const std::uint8_t> input, int label,
                        const EncodeOptions& opts);

/// encode_poly -> quadratize -> poly_to_matrix, with E_sat and E_min filled
/// in (E_min = E_sat + lambda).
QuboInstance encode(const BnnModel& model, std::span<const std::uint8_t> input, int label,
                    const EncodeOptions& opts);

/// Full assignment for perturbation `tau` with every internal bit set to the
/// value its penalty demands. Slack is epsilon - |tau| when that is
/// representable, otherwise 0.
BitVector consistent_assignment(const BnnModel& model, const QuboInstance& inst,
                                std::span<const std::uint8_t> tau);

}  // namespace bnnv

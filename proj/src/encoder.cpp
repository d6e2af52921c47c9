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

#include "bnnv/encoder.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace bnnv {

namespace {

// k with width == 2^k - 1, or 0 if width has another form.
std::size_t count_bits_for(std::size_t width) {
  if (width == 0 || !std::has_single_bit(width + 1)) return 0;
  return static_cast<std::size_t>(std::countr_zero(width + 1));
}

}  // namespace

std::size_t slack_bits(int epsilon) {
  if (epsilon <= 0) return 0;
  return static_cast<std::size_t>(std::bit_width(static_cast<unsigned>(epsilon)));
}

EncodedPoly encode_poly(const BnnModel& model, std::span<const std::uint8_t> input, int label,
                        const EncodeOptions& opts) {
  if (opts.epsilon < 0) throw std::invalid_argument("perturbation budget must be >= 0");
  if (label != 0 && label != 1) throw std::invalid_argument("label must be 0 or 1");
  if (model.forward(input) != label) {
    throw std::invalid_argument("input is misclassified by the model; only correctly "
                                "classified inputs can be verified");
  }
  const double lambda = opts.lambda;
  const double penalty = opts.penalty.value_or(16.0 * lambda * std::max(opts.epsilon, 1));
  if (!(lambda > 0.0)) throw std::invalid_argument("objective weight must be positive");
  if (!(penalty > lambda * opts.epsilon)) {
    throw std::invalid_argument("penalty must exceed lambda * epsilon");
  }
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    if (count_bits_for(model.layer(l).cols) == 0) {
      throw std::invalid_argument("layer " + std::to_string(l) + " input width " +
                                  std::to_string(model.layer(l).cols) +
                                  " is not of the form 2^k - 1");
    }
  }

  EncodedPoly out;
  out.params = {opts.epsilon, penalty, lambda};
  auto& reg = out.registry;
  auto& poly = out.poly;

  const std::size_t n0 = model.input_width();
  for (std::size_t j = 0; j < n0; ++j) {
    reg.add({VarRole::perturbation, -1, -1, -1, static_cast<int>(j)});
  }

  // activation variable of each neuron in the previous layer
  std::vector<std::uint32_t> prev_act;
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    const auto& w = model.layer(l);
    const std::size_t k = count_bits_for(w.cols);
    std::vector<std::uint32_t> act(w.rows);
    for (std::size_t r = 0; r < w.rows; ++r) {
      AffineExpr e;
      for (std::size_t c = 0; c < w.cols; ++c) {
        const bool plus = w.at(r, c) == 1;
        if (l == 0) {
          // xnor(w, x_c xor tau_c) = base + sign * tau_c
          const double base = plus ? input[c] : 1 - input[c];
          e.constant += base;
          e.add(static_cast<std::uint32_t>(c), base == 0.0 ? 1.0 : -1.0);
        } else if (plus) {
          e.add(prev_act[c], 1.0);
        } else {
          e.constant += 1.0;
          e.add(prev_act[c], -1.0);
        }
      }
      for (std::size_t i = 0; i < k; ++i) {
        const auto v = static_cast<std::uint32_t>(reg.add(
            {VarRole::activation_bit, static_cast<int>(l), static_cast<int>(r), static_cast<int>(i)}));
        e.add(v, -static_cast<double>(std::size_t{1} << i));
        if (i + 1 == k) act[r] = v;
      }
      poly.add_squared(e, penalty);
      ++out.num_constraints;
    }
    prev_act = std::move(act);
  }

  AffineExpr budget;
  budget.constant = -static_cast<double>(opts.epsilon);
  for (std::size_t j = 0; j < n0; ++j) budget.add(static_cast<std::uint32_t>(j), 1.0);
  for (std::size_t i = 0; i < slack_bits(opts.epsilon); ++i) {
    const auto v = static_cast<std::uint32_t>(reg.add({VarRole::slack, -1, -1, static_cast<int>(i)}));
    budget.add(v, static_cast<double>(std::size_t{1} << i));
  }
  poly.add_squared(budget, penalty);
  ++out.num_constraints;

  // output activation must equal the opposite label
  AffineExpr mis;
  mis.constant = -static_cast<double>(1 - label);
  mis.add(prev_act.front(), 1.0);
  poly.add_squared(mis, penalty);
  ++out.num_constraints;

  for (std::size_t j = 0; j < n0; ++j) poly.add_term({static_cast<std::uint32_t>(j)}, lambda);
  return out;
}

QuboInstance encode(const BnnModel& model, std::span<const std::uint8_t> input, int label,
                    const EncodeOptions& opts) {
  EncodedPoly ep = encode_poly(model, input, label, opts);
  PseudoBoolPoly quad = quadratize(ep.poly, ep.registry);
  auto [q, offset] = poly_to_matrix(quad, ep.registry.size());

  QuboInstance inst;
  inst.q = std::move(q);
  inst.offset = offset;
  inst.e_sat = 0.0;
  inst.e_min = inst.e_sat + ep.params.lambda;
  inst.registry = std::move(ep.registry);
  inst.params = ep.params;
  inst.provenance = {model.hash(), BitVector(input.begin(), input.end()), label};
  inst.num_constraints = ep.num_constraints;
  return inst;
}

BitVector consistent_assignment(const BnnModel& model, const QuboInstance& inst,
                                std::span<const std::uint8_t> tau) {
  const auto& x = inst.provenance.input;
  if (tau.size() != x.size()) throw std::invalid_argument("perturbation length mismatch");
  const auto perturbed = xor_bits(x, tau);
  const auto sums = model.preactivations(perturbed);
  const int h = static_cast<int>(popcount(tau));
  const int eps = inst.params.epsilon;
  const int slack = h <= eps ? eps - h : 0;

  BitVector q(inst.size(), 0);
  for (std::size_t v = 0; v < inst.size(); ++v) {
    const auto& info = inst.registry[v];
    switch (info.role) {
      case VarRole::perturbation: q[v] = tau[static_cast<std::size_t>(info.input_index)]; break;
      case VarRole::activation_bit: {
        const auto l = static_cast<std::size_t>(info.layer);
        const int n = static_cast<int>(model.layer(l).cols);
        const int matches = (sums[l][static_cast<std::size_t>(info.neuron)] + n) / 2;
        q[v] = static_cast<std::uint8_t>((matches >> info.bit) & 1);
        break;
      }
      case VarRole::slack: q[v] = static_cast<std::uint8_t>((slack >> info.bit) & 1); break;
      default: break;
    }
  }
  return q;
}

}  // namespace bnnv

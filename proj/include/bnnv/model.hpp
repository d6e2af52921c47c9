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
#include <string>
#include <vector>

#include "bnnv/bits.hpp"

namespace bnnv {

/// Row-major {-1,+1} matrix; `rows` outputs by `cols` inputs.
struct WeightMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int8_t> w;

  int at(std::size_t r, std::size_t c) const { return w[r * cols + c]; }
  std::span<const std::int8_t> row(std::size_t r) const {
    return {w.data() + r * cols, cols};
  }
};

/// Feed-forward binary network with sign activations and a single output.
///
/// Every layer input width must be odd so that no pre-activation sum is 0.
/// Construction validates shape chaining and weight values and throws
/// std::invalid_argument on any violation.
class BnnModel {
 public:
  explicit BnnModel(std::vector<WeightMatrix> layers);

  std::size_t input_width() const { return layers_.front().cols; }
  std::size_t num_layers() const { return layers_.size(); }
  const WeightMatrix& layer(std::size_t l) const { return layers_[l]; }
  const std::vector<WeightMatrix>& layers() const { return layers_; }

  /// Layer widths: input width followed by every layer's output count.
  std::vector<std::size_t> architecture() const;

  /// Predicted label for Boolean input bits (bipolar +1 maps to label 1).
  int forward(std::span<const std::uint8_t> bits) const;

  /// Bipolar pre-activation sums of every neuron, layer by layer.
  std::vector<std::vector<int>> preactivations(std::span<const std::uint8_t> bits) const;

  std::uint64_t hash() const;

 private:
  std::vector<WeightMatrix> layers_;
};

/// Seeded uniform random weights for the given architecture.
BnnModel random_model(const std::vector<std::size_t>& architecture, Rng& rng);

void write_model_json(std::ostream& out, const BnnModel& model);
BnnModel read_model_json(std::istream& in);
void save_model(const std::string& path, const BnnModel& model);
BnnModel load_model(const std::string& path);

inline constexpr int kModelFormatVersion = 1;

}  // namespace bnnv

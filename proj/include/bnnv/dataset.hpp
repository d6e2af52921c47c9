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
#include "bnnv/model.hpp"

namespace bnnv {

struct BinaryInput {
  BitVector bits;
  int label = 0;

  bool operator==(const BinaryInput&) const = default;
};

struct DatasetSource {
  std::size_t resolution = 28;
  std::size_t target = 28;
  double threshold = 0.5;
  std::size_t width = 0;  // after padding
  int class_a = 0;        // maps to label 0
  int class_b = 1;        // maps to label 1
};

struct Dataset {
  std::vector<BinaryInput> items;
  DatasetSource source;
};

/// Grayscale images and labels as read from an IDX pair, filtered to a class
/// pair. `labels` holds the remapped {0,1} label.
struct RawDataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::uint8_t>> images;
  std::vector<int> labels;
};

/// Reads MNIST IDX files (big-endian; image magic 0x00000803, label magic
/// 0x00000801). Only items whose digit is `class_a` or `class_b` are kept.
/// Throws std::runtime_error with "bad magic", "truncated" or
/// "dimension mismatch" in the message.
RawDataset load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                          int class_a = 0, int class_b = 1);
RawDataset parse_mnist_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels,
                           int class_a = 0, int class_b = 1);

/// Adaptive average pooling to target x target followed by thresholding at
/// threshold * 255. Cell boundaries sit at round(i * rows / target).
BitVector downsample_binarize(std::span<const std::uint8_t> image, std::size_t rows,
                              std::size_t cols, std::size_t target, double threshold);

/// Appends zero bits up to `width`.
BitVector pad_bits(std::span<const std::uint8_t> bits, std::size_t width);

/// Smallest 2^k - 1 that is >= n.
std::size_t mersenne_width(std::size_t n);

/// Collapses exact duplicates and drops every bit vector seen with both
/// labels. Keeps first-occurrence order.
std::vector<BinaryInput> dedupe(const std::vector<BinaryInput>& items);

/// Full ingestion: pool, threshold, pad to `width` (0 = mersenne width of
/// target^2), dedupe.
Dataset build_dataset(const RawDataset& raw, std::size_t target, double threshold,
                      std::size_t width = 0);

inline constexpr int kDatasetFormatVersion = 1;

void write_dataset_json(std::ostream& out, const Dataset& ds);
Dataset read_dataset_json(std::istream& in);

/// Fraction of items the model labels correctly.
double accuracy(const BnnModel& model, std::span<const BinaryInput> items);

/// Greedy single-weight-flip trainer. Starts from seeded random weights and
/// accepts any flip that strictly raises training accuracy; stops after
/// `max_passes` full passes or when a pass makes no change.
BnnModel train_greedy(std::span<const BinaryInput> items, const std::vector<std::size_t>& architecture,
                      std::uint64_t seed, std::size_t max_passes);

}  // namespace bnnv

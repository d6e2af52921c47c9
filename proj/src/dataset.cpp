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

#include "bnnv/dataset.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace bnnv {

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(std::span<const std::uint8_t> buf, std::size_t at, const char* what) {
  if (buf.size() < at + 4) {
    throw std::runtime_error(std::string(what) + ": truncated");
  }
  return (std::uint32_t{buf[at]} << 24) | (std::uint32_t{buf[at + 1]} << 16) |
         (std::uint32_t{buf[at + 2]} << 8) | std::uint32_t{buf[at + 3]};
}

}  // namespace

RawDataset parse_mnist_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels,
                           int class_a, int class_b) {
  if (be32(images, 0, "images") != 0x00000803U) {
    throw std::runtime_error("images: bad magic");
  }
  if (be32(labels, 0, "labels") != 0x00000801U) {
    throw std::runtime_error("labels: bad magic");
  }
  const std::size_t n_img = be32(images, 4, "images");
  const std::size_t rows = be32(images, 8, "images");
  const std::size_t cols = be32(images, 12, "images");
  const std::size_t n_lab = be32(labels, 4, "labels");
  if (n_img != n_lab) {
    throw std::runtime_error("dimension mismatch: " + std::to_string(n_img) + " images vs " +
                             std::to_string(n_lab) + " labels");
  }
  const std::size_t pixels = rows * cols;
  if (images.size() < 16 + n_img * pixels) throw std::runtime_error("images: truncated");
  if (labels.size() < 8 + n_lab) throw std::runtime_error("labels: truncated");

  RawDataset raw;
  raw.rows = rows;
  raw.cols = cols;
  for (std::size_t k = 0; k < n_img; ++k) {
    const int digit = labels[8 + k];
    if (digit != class_a && digit != class_b) continue;
    const auto* p = images.data() + 16 + k * pixels;
    raw.images.emplace_back(p, p + pixels);
    raw.labels.push_back(digit == class_b ? 1 : 0);
  }
  return raw;
}

RawDataset load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                          int class_a, int class_b) {
  const auto img = read_file(images_path);
  const auto lab = read_file(labels_path);
  return parse_mnist_idx(img, lab, class_a, class_b);
}

BitVector downsample_binarize(std::span<const std::uint8_t> image, std::size_t rows,
                              std::size_t cols, std::size_t target, double threshold) {
  if (target == 0 || target > rows || target > cols) {
    throw std::invalid_argument("pooling target must be in [1, image size]");
  }
  if (image.size() != rows * cols) {
    throw std::invalid_argument("image size does not match dimensions");
  }
  auto edge = [target](std::size_t i, std::size_t extent) {
    return static_cast<std::size_t>(
        std::lround(static_cast<double>(i) * static_cast<double>(extent) / static_cast<double>(target)));
  };
  BitVector out(target * target);
  const double cut = threshold * 255.0;
  for (std::size_t r = 0; r < target; ++r) {
    const std::size_t r0 = edge(r, rows), r1 = edge(r + 1, rows);
    for (std::size_t c = 0; c < target; ++c) {
      const std::size_t c0 = edge(c, cols), c1 = edge(c + 1, cols);
      double sum = 0.0;
      for (std::size_t y = r0; y < r1; ++y) {
        for (std::size_t x = c0; x < c1; ++x) sum += image[y * cols + x];
      }
      const double mean = sum / static_cast<double>((r1 - r0) * (c1 - c0));
      out[r * target + c] = mean >= cut ? 1 : 0;
    }
  }
  return out;
}

BitVector pad_bits(std::span<const std::uint8_t> bits, std::size_t width) {
  if (width < bits.size()) throw std::invalid_argument("pad width smaller than input");
  BitVector out(bits.begin(), bits.end());
  out.resize(width, 0);
  return out;
}

std::size_t mersenne_width(std::size_t n) {
  std::size_t w = 1;
  while (w < n) w = 2 * w + 1;
  return w;
}

std::vector<BinaryInput> dedupe(const std::vector<BinaryInput>& items) {
  // label mask per bit vector: bit 0 -> seen label 0, bit 1 -> seen label 1
  std::unordered_map<std::string, unsigned> seen;
  std::vector<std::string> keys;
  keys.reserve(items.size());
  for (const auto& it : items) {
    keys.push_back(to_bit_string(it.bits));
    seen[keys.back()] |= 1U << (it.label & 1);
  }
  std::vector<BinaryInput> out;
  std::unordered_map<std::string, bool> emitted;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (seen[keys[k]] == 3U) continue;
    if (emitted[keys[k]]) continue;
    emitted[keys[k]] = true;
    out.push_back(items[k]);
  }
  return out;
}

Dataset build_dataset(const RawDataset& raw, std::size_t target, double threshold, std::size_t width) {
  if (threshold <= 0.0 || threshold >= 1.0) {
    throw std::invalid_argument("binarization threshold must lie in (0, 1)");
  }
  Dataset ds;
  ds.source.resolution = raw.rows;
  ds.source.target = target;
  ds.source.threshold = threshold;
  ds.source.width = width == 0 ? mersenne_width(target * target) : width;
  std::vector<BinaryInput> items;
  items.reserve(raw.images.size());
  for (std::size_t k = 0; k < raw.images.size(); ++k) {
    auto bits = downsample_binarize(raw.images[k], raw.rows, raw.cols, target, threshold);
    items.push_back({pad_bits(bits, ds.source.width), raw.labels[k]});
  }
  ds.items = dedupe(items);
  return ds;
}

void write_dataset_json(std::ostream& out, const Dataset& ds) {
  nlohmann::json j;
  j["format_version"] = kDatasetFormatVersion;
  j["source"] = {{"resolution", ds.source.resolution}, {"target", ds.source.target},
                 {"threshold", ds.source.threshold},   {"width", ds.source.width},
                 {"class_a", ds.source.class_a},       {"class_b", ds.source.class_b}};
  auto items = nlohmann::json::array();
  for (const auto& it : ds.items) {
    items.push_back({{"bits", to_bit_string(it.bits)}, {"label", it.label}});
  }
  j["items"] = std::move(items);
  out << j.dump() << '\n';
}

Dataset read_dataset_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("dataset file is not valid JSON: ") + e.what());
  }
  if (j.value("format_version", -1) != kDatasetFormatVersion) {
    throw std::runtime_error("unsupported dataset format_version");
  }
  Dataset ds;
  const auto& s = j.at("source");
  ds.source.resolution = s.at("resolution").get<std::size_t>();
  ds.source.target = s.at("target").get<std::size_t>();
  ds.source.threshold = s.at("threshold").get<double>();
  ds.source.width = s.at("width").get<std::size_t>();
  ds.source.class_a = s.at("class_a").get<int>();
  ds.source.class_b = s.at("class_b").get<int>();
  for (const auto& it : j.at("items")) {
    ds.items.push_back({from_bit_string(it.at("bits").get<std::string>()), it.at("label").get<int>()});
  }
  return ds;
}

double accuracy(const BnnModel& model, std::span<const BinaryInput> items) {
  if (items.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& it : items) ok += (model.forward(it.bits) == it.label);
  return static_cast<double>(ok) / static_cast<double>(items.size());
}

}  // namespace bnnv

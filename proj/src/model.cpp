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

#include "bnnv/model.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace bnnv {

BnnModel::BnnModel(std::vector<WeightMatrix> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) {
    throw std::invalid_argument("model needs at least one layer");
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& m = layers_[l];
    if (m.rows == 0 || m.cols == 0 || m.w.size() != m.rows * m.cols) {
      throw std::invalid_argument("layer " + std::to_string(l) + " has inconsistent shape");
    }
    if (m.cols % 2 == 0) {
      throw std::invalid_argument("layer " + std::to_string(l) + " input width " +
                                  std::to_string(m.cols) + " is even");
    }
    if (l > 0 && layers_[l - 1].rows != m.cols) {
      throw std::invalid_argument("layer " + std::to_string(l) +
                                  " input width does not match previous layer output");
    }
    for (auto v : m.w) {
      if (v != 1 && v != -1) {
        throw std::invalid_argument("weights must be -1 or +1");
      }
    }
  }
  if (layers_.back().rows != 1) {
    throw std::invalid_argument("final layer must have a single output");
  }
}

std::vector<std::size_t> BnnModel::architecture() const {
  std::vector<std::size_t> arch{layers_.front().cols};
  for (const auto& m : layers_) arch.push_back(m.rows);
  return arch;
}

std::vector<std::vector<int>> BnnModel::preactivations(std::span<const std::uint8_t> bits) const {
  if (bits.size() != input_width()) {
    throw std::invalid_argument("input length " + std::to_string(bits.size()) +
                                " does not match model input width " +
                                std::to_string(input_width()));
  }
  std::vector<int> act(bits.size());
  for (std::size_t j = 0; j < bits.size(); ++j) act[j] = bits[j] ? 1 : -1;

  std::vector<std::vector<int>> sums;
  sums.reserve(layers_.size());
  for (const auto& m : layers_) {
    std::vector<int> s(m.rows, 0);
    for (std::size_t r = 0; r < m.rows; ++r) {
      int acc = 0;
      const auto row = m.row(r);
      for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * act[c];
      s[r] = acc;
    }
    act.resize(m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) act[r] = s[r] > 0 ? 1 : -1;
    sums.push_back(std::move(s));
  }
  return sums;
}

int BnnModel::forward(std::span<const std::uint8_t> bits) const {
  return preactivations(bits).back().front() > 0 ? 1 : 0;
}

std::uint64_t BnnModel::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& m : layers_) {
    const std::uint64_t dims[2] = {m.rows, m.cols};
    h = fnv1a({reinterpret_cast<const std::uint8_t*>(dims), sizeof(dims)}, h);
    h = fnv1a({reinterpret_cast<const std::uint8_t*>(m.w.data()), m.w.size()}, h);
  }
  return h;
}

BnnModel random_model(const std::vector<std::size_t>& architecture, Rng& rng) {
  if (architecture.size() < 2) {
    throw std::invalid_argument("architecture needs an input width and at least one layer");
  }
  std::vector<WeightMatrix> layers;
  for (std::size_t l = 0; l + 1 < architecture.size(); ++l) {
    WeightMatrix m{architecture[l + 1], architecture[l], {}};
    m.w.resize(m.rows * m.cols);
    for (auto& v : m.w) v = (rng() >> 63) ? 1 : -1;
    layers.push_back(std::move(m));
  }
  return BnnModel(std::move(layers));
}

void write_model_json(std::ostream& out, const BnnModel& model) {
  nlohmann::json j;
  j["format_version"] = kModelFormatVersion;
  j["architecture"] = model.architecture();
  auto layers = nlohmann::json::array();
  for (const auto& m : model.layers()) {
    std::vector<int> flat(m.w.begin(), m.w.end());
    layers.push_back(flat);
  }
  j["layers"] = std::move(layers);
  out << j.dump() << '\n';
}

BnnModel read_model_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.contains("format_version") || j["format_version"] != kModelFormatVersion) {
    throw std::runtime_error("unsupported model format_version");
  }
  const auto arch = j.at("architecture").get<std::vector<std::size_t>>();
  const auto& layers = j.at("layers");
  if (arch.size() != layers.size() + 1) {
    throw std::runtime_error("architecture and layer list disagree");
  }
  std::vector<WeightMatrix> ms;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    WeightMatrix m{arch[l + 1], arch[l], {}};
    for (int v : layers[l].get<std::vector<int>>()) m.w.push_back(static_cast<std::int8_t>(v));
    if (m.w.size() != m.rows * m.cols) {
      throw std::runtime_error("layer " + std::to_string(l) + " has wrong number of weights");
    }
    ms.push_back(std::move(m));
  }
  return BnnModel(std::move(ms));
}

void save_model(const std::string& path, const BnnModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_model_json(out, model);
}

BnnModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file " + path);
  return read_model_json(in);
}

}  // namespace bnnv

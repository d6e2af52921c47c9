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

#include <stdexcept>

#include "bnnv/dataset.hpp"

namespace bnnv {

namespace {

// Per-item activations caches: acts[l] is the bipolar input of layer l,
// sums[l] its pre-activation sums.
struct ItemCache {
  std::vector<std::vector<int>> acts;
  std::vector<std::vector<int>> sums;
};

ItemCache build_cache(const std::vector<WeightMatrix>& layers, std::span<const std::uint8_t> bits) {
  ItemCache c;
  std::vector<int> a(bits.size());
  for (std::size_t j = 0; j < bits.size(); ++j) a[j] = bits[j] ? 1 : -1;
  for (const auto& m : layers) {
    std::vector<int> s(m.rows, 0);
    for (std::size_t r = 0; r < m.rows; ++r) {
      const auto row = m.row(r);
      for (std::size_t k = 0; k < m.cols; ++k) s[r] += row[k] * a[k];
    }
    c.acts.push_back(a);
    a.assign(m.rows, 0);
    for (std::size_t r = 0; r < m.rows; ++r) a[r] = s[r] > 0 ? 1 : -1;
    c.sums.push_back(std::move(s));
  }
  return c;
}

bool final_positive(const ItemCache& c) { return c.sums.back().front() > 0; }

// Output sign when weight (l, r, k) is negated, using the cached state.
bool output_after_flip(const std::vector<WeightMatrix>& layers, const ItemCache& c, std::size_t l,
                       std::size_t r, std::size_t k) {
  const int delta = -2 * layers[l].at(r, k) * c.acts[l][k];
  const int new_sum = c.sums[l][r] + delta;
  if ((new_sum > 0) == (c.sums[l][r] > 0)) return final_positive(c);
  if (l + 1 == layers.size()) return new_sum > 0;

  std::vector<int> a(layers[l].rows);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = c.sums[l][i] > 0 ? 1 : -1;
  a[r] = new_sum > 0 ? 1 : -1;
  for (std::size_t m = l + 1; m < layers.size(); ++m) {
    const auto& w = layers[m];
    std::vector<int> next(w.rows);
    for (std::size_t i = 0; i < w.rows; ++i) {
      int s = 0;
      const auto row = w.row(i);
      for (std::size_t j = 0; j < w.cols; ++j) s += row[j] * a[j];
      next[i] = s > 0 ? 1 : -1;
    }
    a = std::move(next);
  }
  return a.front() > 0;
}

}  // namespace

BnnModel train_greedy(std::span<const BinaryInput> items, const std::vector<std::size_t>& architecture,
                      std::uint64_t seed, std::size_t max_passes) {
  Rng rng(seed);
  BnnModel init = random_model(architecture, rng);
  if (max_passes == 0 || items.empty()) return init;

  std::vector<WeightMatrix> layers = init.layers();
  std::vector<ItemCache> cache;
  cache.reserve(items.size());
  std::size_t correct = 0;
  for (const auto& it : items) {
    if (it.bits.size() != architecture.front()) {
      throw std::invalid_argument("training item width does not match architecture");
    }
    cache.push_back(build_cache(layers, it.bits));
    correct += (final_positive(cache.back()) == (it.label == 1));
  }

  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    bool changed = false;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      for (std::size_t r = 0; r < layers[l].rows; ++r) {
        for (std::size_t k = 0; k < layers[l].cols; ++k) {
          std::size_t trial = 0;
          for (std::size_t n = 0; n < items.size(); ++n) {
            trial += (output_after_flip(layers, cache[n], l, r, k) == (items[n].label == 1));
          }
          if (trial <= correct) continue;
          auto& w = layers[l].w[r * layers[l].cols + k];
          w = static_cast<std::int8_t>(-w);
          correct = trial;
          changed = true;
          for (std::size_t n = 0; n < items.size(); ++n) cache[n] = build_cache(layers, items[n].bits);
        }
      }
    }
    if (!changed) break;
  }
  return BnnModel(std::move(layers));
}

}  // namespace bnnv

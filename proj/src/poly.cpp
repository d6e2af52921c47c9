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

#include "bnnv/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bnnv {

void PseudoBoolPoly::add_term(Monomial vars, double coef) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (coef == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(vars), coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void PseudoBoolPoly::add_affine(const AffineExpr& expr, double weight) {
  add_constant(weight * expr.constant);
  for (const auto& [v, c] : expr.terms) add_term({v}, weight * c);
}

void PseudoBoolPoly::add_squared(const AffineExpr& expr, double weight) {
  // merge repeated variables first so the cross terms stay exact
  std::map<std::uint32_t, double> lin;
  for (const auto& [v, c] : expr.terms) lin[v] += c;
  std::vector<std::pair<std::uint32_t, double>> t;
  for (const auto& [v, c] : lin) {
    if (c != 0.0) t.emplace_back(v, c);
  }
  const double c0 = expr.constant;
  add_constant(weight * c0 * c0);
  for (std::size_t a = 0; a < t.size(); ++a) {
    const auto [va, ca] = t[a];
    add_term({va}, weight * (ca * ca + 2.0 * c0 * ca));
    for (std::size_t b = a + 1; b < t.size(); ++b) {
      add_term({va, t[b].first}, weight * 2.0 * ca * t[b].second);
    }
  }
}

std::size_t PseudoBoolPoly::degree() const {
  std::size_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.size());
  return d;
}

double PseudoBoolPoly::constant() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? 0.0 : it->second;
}

std::size_t PseudoBoolPoly::num_vars() const {
  std::size_t n = 0;
  for (const auto& [m, c] : terms_) {
    if (!m.empty()) n = std::max<std::size_t>(n, m.back() + 1);
  }
  return n;
}

double PseudoBoolPoly::evaluate(std::span<const std::uint8_t> bits) const {
  double e = 0.0;
  for (const auto& [m, c] : terms_) {
    bool on = true;
    for (auto v : m) {
      if (v >= bits.size()) throw std::invalid_argument("assignment shorter than polynomial");
      if (!bits[v]) {
        on = false;
        break;
      }
    }
    if (on) e += c;
  }
  return e;
}

PseudoBoolPoly quadratize(const PseudoBoolPoly& poly, VariableRegistry& registry) {
  if (poly.degree() <= 2) return poly;
  if (registry.size() < poly.num_vars()) {
    throw std::invalid_argument("registry does not cover polynomial variables");
  }
  std::map<Monomial, double> terms = poly.terms();
  for (;;) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> freq;
    for (const auto& [m, c] : terms) {
      if (m.size() <= 2) continue;
      for (std::size_t a = 0; a < m.size(); ++a) {
        for (std::size_t b = a + 1; b < m.size(); ++b) ++freq[{m[a], m[b]}];
      }
    }
    if (freq.empty()) break;
    auto best = std::max_element(freq.begin(), freq.end(),
                                 [](const auto& l, const auto& r) { return l.second < r.second; });
    const auto [x, y] = best->first;
    const auto w = static_cast<std::uint32_t>(registry.add({VarRole::auxiliary}));

    std::map<Monomial, double> next;
    double touched = 0.0;
    for (const auto& [m, c] : terms) {
      const bool has = m.size() > 2 && std::binary_search(m.begin(), m.end(), x) &&
                       std::binary_search(m.begin(), m.end(), y);
      if (!has) {
        next[m] += c;
        continue;
      }
      touched += std::abs(c);
      Monomial r;
      for (auto v : m) {
        if (v != x && v != y) r.push_back(v);
      }
      r.push_back(w);
      std::sort(r.begin(), r.end());
      next[r] += c;
    }
    const double big = touched + 1.0;
    next[Monomial{x, y}] += big;
    next[Monomial{x, w}] += -2.0 * big;
    next[Monomial{y, w}] += -2.0 * big;
    next[Monomial{w}] += 3.0 * big;
    std::erase_if(next, [](const auto& kv) { return kv.second == 0.0; });
    terms = std::move(next);
  }
  PseudoBoolPoly out;
  for (auto& [m, c] : terms) out.add_term(m, c);
  return out;
}

std::pair<SquareMatrix, double> poly_to_matrix(const PseudoBoolPoly& poly, std::size_t n) {
  if (poly.degree() > 2) throw std::invalid_argument("poly_to_matrix needs degree <= 2");
  if (poly.num_vars() > n) throw std::invalid_argument("matrix too small for polynomial");
  SquareMatrix q(n);
  double offset = 0.0;
  for (const auto& [m, c] : poly.terms()) {
    switch (m.size()) {
      case 0: offset += c; break;
      case 1: q(m[0], m[0]) += c; break;
      default:
        q(m[0], m[1]) += 0.5 * c;
        q(m[1], m[0]) += 0.5 * c;
        break;
    }
  }
  return {std::move(q), offset};
}

}  // namespace bnnv

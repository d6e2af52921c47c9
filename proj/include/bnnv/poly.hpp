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
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "bnnv/qubo.hpp"

namespace bnnv {

using Monomial = std::vector<std::uint32_t>;

/// Affine form constant + sum(coef * q_var).
struct AffineExpr {
  double constant = 0.0;
  std::vector<std::pair<std::uint32_t, double>> terms;

  void add(std::uint32_t var, double coef) { terms.emplace_back(var, coef); }
};

/// Multilinear polynomial over Boolean variables. Monomials are kept sorted
/// and duplicate-free (q^2 = q); the empty monomial is the constant term.
class PseudoBoolPoly {
 public:
  void add_term(Monomial vars, double coef);
  void add_constant(double c) { add_term({}, c); }
  /// Adds weight * (expr)^2 expanded with q^2 = q.
  void add_squared(const AffineExpr& expr, double weight);
  void add_affine(const AffineExpr& expr, double weight);

  const std::map<Monomial, double>& terms() const { return terms_; }
  std::size_t degree() const;
  double constant() const;
  /// One past the largest variable index mentioned.
  std::size_t num_vars() const;
  double evaluate(std::span<const std::uint8_t> bits) const;

 private:
  std::map<Monomial, double> terms_;
};

/// Rosenberg reduction: while a term of degree > 2 exists, picks the most
/// frequent variable pair among such terms, replaces it by a fresh auxiliary
/// w in every term containing it, and adds M(xy - 2xw - 2yw + 3w) with M one
/// above the total |coef| of the rewritten terms. New variables are
/// appended to `registry` as auxiliary.
PseudoBoolPoly quadratize(const PseudoBoolPoly& poly, VariableRegistry& registry);

/// Linear terms on the diagonal, pair terms split evenly across (i,j) and
/// (j,i), constant into the offset. Throws if degree > 2.
std::pair<SquareMatrix, double> poly_to_matrix(const PseudoBoolPoly& poly, std::size_t n);

}  // namespace bnnv

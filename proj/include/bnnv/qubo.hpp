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

/// Dense square matrix, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), v_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {v_.data() + i * n_, n_}; }
  std::span<const double> data() const { return v_; }

  double max_abs() const;
  bool is_symmetric(double tol = 0.0) const;

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> v_;
};

enum class VarRole { perturbation, activation_bit, slack, auxiliary, pinned };

const char* role_name(VarRole role);
VarRole role_from_name(const std::string& name);

/// Per-variable metadata. `layer`/`neuron`/`bit` apply to activation bits,
/// `bit` to slack bits, `input_index` to perturbations.
struct VarInfo {
  VarRole role = VarRole::auxiliary;
  int layer = -1;
  int neuron = -1;
  int bit = -1;
  int input_index = -1;

  bool operator==(const VarInfo&) const = default;
};

class VariableRegistry {
 public:
  std::size_t add(const VarInfo& info) {
    vars_.push_back(info);
    return vars_.size() - 1;
  }
  std::size_t size() const { return vars_.size(); }
  const VarInfo& operator[](std::size_t i) const { return vars_[i]; }
  const std::vector<VarInfo>& vars() const { return vars_; }
  std::vector<std::size_t> indices_of(VarRole role) const;
  std::size_t count(VarRole role) const;

  bool operator==(const VariableRegistry&) const = default;

 private:
  std::vector<VarInfo> vars_;
};

struct EncodingParams {
  int epsilon = 0;
  double penalty = 0.0;
  double lambda = 1.0;

  bool operator==(const EncodingParams&) const = default;
};

struct Provenance {
  std::uint64_t model_hash = 0;
  BitVector input;
  int label = 0;

  bool operator==(const Provenance&) const = default;
};

/// Energy is q^T Q q + offset over q in {0,1}^N with a full symmetric Q.
struct QuboInstance {
  SquareMatrix q;
  double offset = 0.0;
  /// Energy of any assignment whose penalties all vanish, minus the objective.
  double e_sat = 0.0;
  /// Reference minimum used by the good-solution cutoff.
  double e_min = 0.0;
  VariableRegistry registry;
  EncodingParams params;
  Provenance provenance;
  std::size_t num_constraints = 0;

  std::size_t size() const { return q.size(); }
  double energy(std::span<const std::uint8_t> bits) const;

  bool operator==(const QuboInstance&) const = default;
};

/// q^T Q q + offset, summed row by row.
double qubo_energy(const SquareMatrix& q, double offset, std::span<const std::uint8_t> bits);

/// Generic instance wrapping a bare matrix; every variable is auxiliary.
QuboInstance make_qubo(SquareMatrix q, double offset = 0.0);

inline constexpr int kQuboFormatVersion = 1;

/// Text format: line 1 is a JSON header, then one `i j value` line per
/// nonzero upper-triangle entry (i <= j). Off-diagonal lines carry the
/// symmetric entry Q_ij (= Q_ji). Values use shortest round-trip decimals.
void write_qubo(std::ostream& out, const QuboInstance& inst);
QuboInstance read_qubo(std::istream& in);
void save_qubo(const std::string& path, const QuboInstance& inst);
QuboInstance load_qubo(const std::string& path);

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(std::string_view s);

std::size_t count_nonzero_upper(const SquareMatrix& q);

}  // namespace bnnv

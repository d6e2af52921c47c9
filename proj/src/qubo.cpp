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

#include "bnnv/qubo.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bnnv {

double SquareMatrix::max_abs() const {
  double m = 0.0;
  for (double v : v_) m = std::max(m, std::abs(v));
  return m;
}

bool SquareMatrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    }
  }
  return true;
}

const char* role_name(VarRole role) {
  switch (role) {
    case VarRole::perturbation: return "perturbation";
    case VarRole::activation_bit: return "activation_bit";
    case VarRole::slack: return "slack";
    case VarRole::auxiliary: return "auxiliary";
    case VarRole::pinned: return "pinned";
  }
  return "auxiliary";
}

VarRole role_from_name(const std::string& name) {
  if (name == "perturbation") return VarRole::perturbation;
  if (name == "activation_bit") return VarRole::activation_bit;
  if (name == "slack") return VarRole::slack;
  if (name == "auxiliary") return VarRole::auxiliary;
  if (name == "pinned") return VarRole::pinned;
  throw std::runtime_error("unknown variable role '" + name + "'");
}

std::vector<std::size_t> VariableRegistry::indices_of(VarRole role) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].role == role) out.push_back(i);
  }
  return out;
}

std::size_t VariableRegistry::count(VarRole role) const {
  std::size_t c = 0;
  for (const auto& v : vars_) c += (v.role == role);
  return c;
}

double qubo_energy(const SquareMatrix& q, double offset, std::span<const std::uint8_t> bits) {
  if (bits.size() != q.size()) {
    throw std::invalid_argument("assignment length does not match QUBO size");
  }
  double e = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!bits[i]) continue;
    const auto row = q.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (bits[j]) acc += row[j];
    }
    e += acc;
  }
  return e + offset;
}

double QuboInstance::energy(std::span<const std::uint8_t> bits) const {
  return qubo_energy(q, offset, bits);
}

QuboInstance make_qubo(SquareMatrix q, double offset) {
  QuboInstance inst;
  const std::size_t n = q.size();
  inst.q = std::move(q);
  inst.offset = offset;
  for (std::size_t i = 0; i < n; ++i) inst.registry.add({});
  return inst;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("invalid number '" + std::string(s) + "'");
  }
  return v;
}

std::size_t count_nonzero_upper(const SquareMatrix& q) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = i; j < q.size(); ++j) c += (q(i, j) != 0.0);
  }
  return c;
}

void write_qubo(std::ostream& out, const QuboInstance& inst) {
  nlohmann::json h;
  h["format"] = "bnnv-qubo";
  h["format_version"] = kQuboFormatVersion;
  h["n"] = inst.size();
  // doubles travel as strings so the header round-trips bit-exactly
  h["offset"] = format_double(inst.offset);
  h["e_sat"] = format_double(inst.e_sat);
  h["e_min"] = format_double(inst.e_min);
  h["epsilon"] = inst.params.epsilon;
  h["penalty"] = format_double(inst.params.penalty);
  h["lambda"] = format_double(inst.params.lambda);
  h["num_constraints"] = inst.num_constraints;
  h["convention"] = "energy = sum_ij Q_ij q_i q_j + offset, Q symmetric";
  h["nnz"] = count_nonzero_upper(inst.q);
  auto roles = nlohmann::json::array();
  for (const auto& v : inst.registry.vars()) {
    roles.push_back({role_name(v.role), v.layer, v.neuron, v.bit, v.input_index});
  }
  h["registry"] = std::move(roles);
  std::ostringstream hash;
  hash << std::hex << inst.provenance.model_hash;
  h["provenance"] = {{"model_hash", hash.str()},
                     {"input", to_bit_string(inst.provenance.input)},
                     {"label", inst.provenance.label}};
  out << h.dump() << '\n';
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::size_t j = i; j < inst.size(); ++j) {
      const double v = inst.q(i, j);
      if (v != 0.0) out << i << ' ' << j << ' ' << format_double(v) << '\n';
    }
  }
}

QuboInstance read_qubo(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("QUBO file is empty");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("QUBO header is not valid JSON: ") + e.what());
  }
  if (h.value("format", "") != "bnnv-qubo" || h.value("format_version", -1) != kQuboFormatVersion) {
    throw std::runtime_error("unsupported QUBO format");
  }
  QuboInstance inst;
  const auto n = h.at("n").get<std::size_t>();
  inst.q = SquareMatrix(n);
  inst.offset = parse_double(h.at("offset").get<std::string>());
  inst.e_sat = parse_double(h.at("e_sat").get<std::string>());
  inst.e_min = parse_double(h.at("e_min").get<std::string>());
  inst.params.epsilon = h.at("epsilon").get<int>();
  inst.params.penalty = parse_double(h.at("penalty").get<std::string>());
  inst.params.lambda = parse_double(h.at("lambda").get<std::string>());
  inst.num_constraints = h.at("num_constraints").get<std::size_t>();
  for (const auto& r : h.at("registry")) {
    inst.registry.add({role_from_name(r.at(0).get<std::string>()), r.at(1).get<int>(),
                       r.at(2).get<int>(), r.at(3).get<int>(), r.at(4).get<int>()});
  }
  if (inst.registry.size() != n) throw std::runtime_error("QUBO registry size does not match n");
  const auto& p = h.at("provenance");
  inst.provenance.model_hash = std::stoull(p.at("model_hash").get<std::string>(), nullptr, 16);
  inst.provenance.input = from_bit_string(p.at("input").get<std::string>());
  inst.provenance.label = p.at("label").get<int>();

  const auto nnz = h.at("nnz").get<std::size_t>();
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t i = 0, j = 0;
    std::string value;
    if (!(ls >> i >> j >> value) || i > j || j >= n) {
      throw std::runtime_error("malformed QUBO entry line: " + line);
    }
    const double v = parse_double(value);
    inst.q(i, j) = v;
    inst.q(j, i) = v;
    ++seen;
  }
  if (seen != nnz) throw std::runtime_error("QUBO file truncated: entry count mismatch");
  return inst;
}

void save_qubo(const std::string& path, const QuboInstance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_qubo(out, inst);
}

QuboInstance load_qubo(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open QUBO file " + path);
  return read_qubo(in);
}

}  // namespace bnnv

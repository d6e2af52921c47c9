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

#include "bnnv/ppa.hpp"

#include <stdexcept>

namespace bnnv {

PpaBlock ppa_project(const PpaInputs& in) {
  if (in.bits < 1) throw std::invalid_argument("bit width must be >= 1");
  if (!(in.cell_area_um2 > 0.0)) throw std::invalid_argument("cell area must be positive");
  if (!(in.array_fraction > 0.0 && in.array_fraction <= 1.0)) {
    throw std::invalid_argument("array fraction must lie in (0, 1]");
  }
  if (!(in.baseline_time_s > 0.0 && in.dcim_time_s > 0.0 && in.dcim_power_w > 0.0) ||
      in.baseline_energy_j < 0.0) {
    throw std::invalid_argument("times and power must be positive");
  }
  PpaBlock out;
  const std::uint64_t side = in.spins + 1;
  out.stored_bits = side * side * static_cast<std::uint64_t>(in.bits);
  out.array_area_mm2 = static_cast<double>(out.stored_bits) * in.cell_area_um2 * 1e-6;
  out.total_area_mm2 = out.array_area_mm2 / in.array_fraction;
  out.speedup = in.baseline_time_s / in.dcim_time_s;
  out.baseline_power_w = in.baseline_energy_j / in.baseline_time_s;
  out.power_efficiency = out.baseline_power_w / in.dcim_power_w;
  out.dcim_energy_j = in.dcim_power_w * in.dcim_time_s;
  out.energy_ratio = in.baseline_energy_j / out.dcim_energy_j;
  return out;
}

}  // namespace bnnv

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

#include <cstdint>

namespace bnnv {

/// First-order area/time/power projection of a DCIM annealer macro.
/// Defaults describe a 1066-spin instance on 8-bit cells of 0.7 x 2.43 um.
struct PpaInputs {
  std::uint64_t spins = 1066;
  int bits = 8;
  double cell_area_um2 = 1.701;
  double array_fraction = 0.487;
  double baseline_time_s = 20.29;
  double baseline_energy_j = 1660.37;
  double dcim_time_s = 0.11385;
  double dcim_power_w = 0.053194;
};

struct PpaBlock {
  std::uint64_t stored_bits = 0;  // (spins + 1)^2 * bits, pinned row included
  double array_area_mm2 = 0.0;
  double total_area_mm2 = 0.0;
  double speedup = 0.0;            // baseline time / dcim time
  double baseline_power_w = 0.0;   // baseline energy / baseline time
  double power_efficiency = 0.0;   // baseline power / dcim power
  double dcim_energy_j = 0.0;      // dcim power * dcim time
  double energy_ratio = 0.0;       // baseline energy / dcim energy per solution
};

/// Throws std::invalid_argument on non-positive times, power, area or a
/// fraction outside (0, 1].
PpaBlock ppa_project(const PpaInputs& in);

}  // namespace bnnv

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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bnnv/encoder.hpp"
#include "bnnv/pipeline.hpp"
#include "bnnv/ppa.hpp"

namespace bnnv::cli {

inline constexpr int kConfigFormatVersion = 1;

struct Paths {
  std::string images;
  std::string labels;
  std::string dataset;
  std::string weights;
  std::string qubo;
  std::string output;
};

struct IngestParams {
  std::size_t target = 7;
  double threshold = 0.5;
  int class_a = 0;
  int class_b = 1;
  std::size_t width = 0;  // 0 = smallest 2^k - 1 holding target^2 bits
};

struct TrainParams {
  std::vector<std::size_t> architecture;  // empty = {input width, 7, 1}
  std::size_t max_passes = 20;
};

struct EncodeParams {
  EncodeOptions options;
  std::optional<std::size_t> sample;  // unset = first correctly classified
};

/// Noise curve overrides; unset fields follow NoiseModel::defaults for the
/// configured voltage range.
struct NoiseSpec {
  std::optional<double> p01_max, p01_vth, p01_width;
  std::optional<double> p10_max, p10_vth, p10_width;
};

NoiseModel resolve_noise(const NoiseSpec& spec, const AnnealSchedule& schedule);

/// Everything a run of the tool depends on. Loaded from a strict JSON file
/// and then overridden by command-line flags.
struct Config {
  int format_version = kConfigFormatVersion;
  std::optional<std::uint64_t> seed;
  Paths paths;
  IngestParams ingest;
  TrainParams train;
  EncodeParams encode;
  SolverConfig solver;  // solver.dcim.noise is derived from `noise`
  NoiseSpec noise;
  CampaignConfig campaign;
  PpaInputs ppa;
};

/// Parses a config document. Unknown keys anywhere, a missing seed or a
/// foreign format version are errors (std::invalid_argument).
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Canonical JSON of the settings that influence results. Paths and the
/// thread count are left out so that outputs do not depend on them.
std::string config_echo(const Config& cfg);

/// Checks an emitted artifact against the schema of `kind` ("model",
/// "dataset", "qubo", "report", "records", "ppa"). Throws std::runtime_error
/// naming the first violation.
void validate_artifact(const std::string& kind, const std::string& text);

std::string ppa_json(const PpaInputs& in, const PpaBlock& out);

/// Entry point of the command-line tool. Returns the process exit code.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bnnv::cli

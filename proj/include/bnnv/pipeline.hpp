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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bnnv/baseline.hpp"
#include "bnnv/dcim.hpp"
#include "bnnv/model.hpp"
#include "bnnv/qubo.hpp"

namespace bnnv {

/// E_min + band * |E_min|, or band * penalty when E_min is exactly 0.
double cutoff_energy(double e_min, double penalty, double band = 0.05);
inline double cutoff_energy(const QuboInstance& inst, double band = 0.05) {
  return cutoff_energy(inst.e_min, inst.params.penalty, band);
}

/// Perturbation bits of `q`, ordered by input index.
BitVector extract_perturbation(const QuboInstance& inst, std::span<const std::uint8_t> q);

enum class AttackOutcome { success, budget_violation, no_flip };
const char* outcome_name(AttackOutcome o);

/// success: label flips with |tau| <= epsilon; budget_violation: label
/// flips but |tau| > epsilon; no_flip otherwise.
AttackOutcome validate_attack(const BnnModel& model, std::span<const std::uint8_t> input, int label,
                              std::span<const std::uint8_t> tau, int epsilon);

enum class SolverKind { dcim, sa };
const char* solver_name(SolverKind k);
SolverKind solver_from_name(const std::string& name);

struct SampleRecord {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  SolverKind solver = SolverKind::dcim;
  /// Energy under the source QUBO.
  double energy = 0.0;
  /// Energy reported by the solver (golden quantized matrix for dcim).
  double solver_energy = 0.0;
  BitVector q;
  BitVector tau;
  std::size_t hamming_weight = 0;
  bool is_good = false;
  AttackOutcome outcome = AttackOutcome::no_flip;
  bool attack_success = false;
  double wall_clock_s = 0.0;
};

/// Distinct perturbations among records with attack_success.
std::size_t unique_count(std::span<const SampleRecord> records);

struct DcimConfig {
  AnnealSchedule schedule;
  NoiseModel noise = NoiseModel::defaults(0.40, 0.90);
  /// Quantization width; 0 selects lossless full precision.
  int precision_bits = 8;
};

struct SaConfig {
  std::optional<double> t_start;  // default max|Q|
  std::optional<double> t_end;    // default 1e-3 * t_start
  std::size_t sweeps = 1000;
  Cooling cooling = Cooling::geometric;
};

struct SolverConfig {
  std::vector<SolverKind> solvers{SolverKind::dcim};
  DcimConfig dcim;
  SaConfig sa;
};

struct CampaignConfig {
  std::size_t samples = 0;  // per solver
  std::uint64_t master_seed = 0;
  int threads = 1;
  double band = 0.05;
  std::size_t histogram_bins = 50;
  std::size_t gallery_limit = 8;
};

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
};

/// Uniform bins over [lo, hi]; lo is the smallest energy and hi is
/// 4 * cutoff. If that range is empty hi falls back to the largest energy
/// (or lo + 1). Out-of-range values land in the edge bins.
Histogram energy_histogram(std::span<const double> energies, double cutoff, std::size_t bins);

struct TraceStats {
  std::vector<double> mean;
  std::vector<double> min;
  std::vector<double> max;
};

struct SolverSummary {
  std::size_t samples = 0;
  std::size_t good = 0;
  std::size_t attacks = 0;
  std::size_t unique_attacks = 0;
  std::size_t unbudgeted_flips = 0;
  double mean_energy = 0.0;
  double min_energy = 0.0;
  double max_energy = 0.0;
  double energy_variance = 0.0;
  Histogram histogram;
  TraceStats trace;
};

struct CampaignReport {
  std::size_t samples = 0;
  std::size_t good = 0;
  std::size_t attacks = 0;
  std::size_t unique_attacks = 0;
  std::size_t unbudgeted_flips = 0;
  double cutoff = 0.0;
  std::map<SolverKind, SolverSummary> per_solver;
};

struct CampaignResult {
  std::vector<SampleRecord> records;  // sorted by run id
  CampaignReport report;
};

/// Runs `samples` independent solves per configured solver. Run r uses seed
/// derive_seed(master_seed, r); runs of solver s take ids
/// s * samples .. (s + 1) * samples - 1. With threads > 1 the runs fan out
/// over OpenMP; results do not depend on the thread count.
CampaignResult run_campaign(const QuboInstance& inst, const BnnModel& model, const SolverConfig& solver,
                            const CampaignConfig& cfg);

/// One solver run as used inside a campaign.
SampleRecord run_single(const QuboInstance& inst, const BnnModel& model, const SolverConfig& solver,
                        SolverKind kind, const QuantizedQubo* quantized, std::size_t run_id,
                        std::uint64_t seed, double cutoff);

/// Quantized pinned matrix the dcim runs of a campaign operate on.
QuantizedQubo campaign_matrix(const QuboInstance& inst, int precision_bits);

/// Recomputes counts from records and re-validates every successful attack
/// through forward inference; throws std::logic_error on disagreement.
CampaignReport finalize_report(const QuboInstance& inst, const BnnModel& model,
                               std::span<const SampleRecord> records, const CampaignConfig& cfg,
                               const std::map<SolverKind, TraceStats>& traces);

inline constexpr int kReportFormatVersion = 1;

/// Writes report.json, records.json, trace_<solver>.csv,
/// histogram_<solver>.csv, timing.csv and gallery/*.pbm into `dir`. The
/// gallery holds the first `gallery_limit` distinct attacks by run id.
/// Everything except timing.csv is a pure function of the inputs.
void write_campaign(const std::filesystem::path& dir, const QuboInstance& inst,
                    const CampaignResult& result, const std::string& config_echo_json,
                    std::size_t gallery_limit = 8);

std::string report_json(const CampaignReport& report, const QuboInstance& inst,
                        const std::string& config_echo_json);
std::string records_json(std::span<const SampleRecord> records);
std::vector<SampleRecord> parse_records_json(const std::string& text);
std::string trace_csv(const TraceStats& t);
std::string histogram_csv(const Histogram& h);

/// Plain PBM (P1) of the first side*side bits, side = floor(sqrt(size)).
std::string to_pbm(std::span<const std::uint8_t> bits);

}  // namespace bnnv

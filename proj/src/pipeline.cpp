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

#include "bnnv/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bnnv {

double cutoff_energy(double e_min, double penalty, double band) {
  if (e_min == 0.0) return band * penalty;
  return e_min + band * std::abs(e_min);
}

BitVector extract_perturbation(const QuboInstance& inst, std::span<const std::uint8_t> q) {
  if (q.size() != inst.size()) throw std::invalid_argument("assignment length mismatch");
  const auto idx = inst.registry.indices_of(VarRole::perturbation);
  BitVector tau(idx.size(), 0);
  for (auto v : idx) {
    const auto j = static_cast<std::size_t>(inst.registry[v].input_index);
    if (j >= tau.size()) throw std::runtime_error("perturbation registry is not contiguous");
    tau[j] = q[v];
  }
  return tau;
}

const char* outcome_name(AttackOutcome o) {
  switch (o) {
    case AttackOutcome::success: return "success";
    case AttackOutcome::budget_violation: return "budget_violation";
    case AttackOutcome::no_flip: return "no_flip";
  }
  return "no_flip";
}

AttackOutcome validate_attack(const BnnModel& model, std::span<const std::uint8_t> input, int label,
                              std::span<const std::uint8_t> tau, int epsilon) {
  const auto perturbed = xor_bits(input, tau);
  if (model.forward(perturbed) == label) return AttackOutcome::no_flip;
  if (popcount(tau) > static_cast<std::size_t>(std::max(epsilon, 0))) {
    return AttackOutcome::budget_violation;
  }
  return AttackOutcome::success;
}

const char* solver_name(SolverKind k) { return k == SolverKind::dcim ? "dcim" : "sa"; }

SolverKind solver_from_name(const std::string& name) {
  if (name == "dcim") return SolverKind::dcim;
  if (name == "sa") return SolverKind::sa;
  throw std::invalid_argument("unknown solver '" + name + "'");
}

std::size_t unique_count(std::span<const SampleRecord> records) {
  std::set<BitVector> seen;
  for (const auto& r : records) {
    if (r.attack_success) seen.insert(r.tau);
  }
  return seen.size();
}

Histogram energy_histogram(std::span<const double> energies, double cutoff, std::size_t bins) {
  Histogram h;
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  h.counts.assign(bins, 0);
  if (energies.empty()) return h;
  const auto [mn, mx] = std::minmax_element(energies.begin(), energies.end());
  h.lo = *mn;
  h.hi = 4.0 * cutoff;
  if (!(h.hi > h.lo)) h.hi = *mx;
  if (!(h.hi > h.lo)) h.hi = h.lo + 1.0;
  const double width = (h.hi - h.lo) / static_cast<double>(bins);
  for (double e : energies) {
    auto b = static_cast<std::ptrdiff_t>(std::floor((e - h.lo) / width));
    b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

QuantizedQubo campaign_matrix(const QuboInstance& inst, int precision_bits) {
  const auto pinned = pin_embed(inst);
  return precision_bits == 0 ? quantize_exact(pinned) : quantize(pinned, precision_bits);
}

namespace {

struct RunOutput {
  SampleRecord record;
  std::vector<double> trace;
};

RunOutput run_one(const QuboInstance& inst, const BnnModel& model, const SolverConfig& solver,
                  SolverKind kind, const QuantizedQubo* quantized, std::size_t run_id, std::uint64_t seed,
                  double cutoff) {
  const auto t0 = std::chrono::steady_clock::now();
  AnnealResult res;
  if (kind == SolverKind::dcim) {
    if (!quantized) throw std::invalid_argument("dcim run needs a quantized matrix");
    res = anneal(*quantized, solver.dcim.schedule, solver.dcim.noise, seed);
  } else {
    SaSchedule s = SaSchedule::defaults(inst.q, seed);
    if (solver.sa.t_start) s.t_start = *solver.sa.t_start;
    s.t_end = solver.sa.t_end ? *solver.sa.t_end : 1e-3 * s.t_start;
    s.sweeps = solver.sa.sweeps;
    s.cooling = solver.sa.cooling;
    res = sa_solve(inst, s);
  }
  const auto t1 = std::chrono::steady_clock::now();

  RunOutput out;
  auto& r = out.record;
  r.run_id = run_id;
  r.seed = seed;
  r.solver = kind;
  r.solver_energy = res.energy;
  r.energy = inst.energy(res.q);
  r.tau = extract_perturbation(inst, res.q);
  r.q = std::move(res.q);
  r.hamming_weight = popcount(r.tau);
  r.is_good = r.energy <= cutoff;
  r.outcome = validate_attack(model, inst.provenance.input, inst.provenance.label, r.tau,
                              inst.params.epsilon);
  r.attack_success = r.outcome == AttackOutcome::success;
  r.wall_clock_s = std::chrono::duration<double>(t1 - t0).count();
  out.trace = std::move(res.trace);
  return out;
}

SolverSummary summarize(std::span<const SampleRecord> all, SolverKind kind, double cutoff,
                        std::size_t bins) {
  SolverSummary s;
  std::vector<SampleRecord> mine;
  std::vector<double> energies;
  for (const auto& r : all) {
    if (r.solver != kind) continue;
    mine.push_back(r);
    energies.push_back(r.energy);
    s.good += r.is_good;
    s.attacks += r.attack_success;
    s.unbudgeted_flips += (r.outcome == AttackOutcome::budget_violation);
  }
  s.samples = mine.size();
  s.unique_attacks = unique_count(mine);
  if (!energies.empty()) {
    double sum = 0.0;
    for (double e : energies) sum += e;
    s.mean_energy = sum / static_cast<double>(energies.size());
    double sq = 0.0;
    for (double e : energies) sq += (e - s.mean_energy) * (e - s.mean_energy);
    s.energy_variance = sq / static_cast<double>(energies.size());
    s.min_energy = *std::min_element(energies.begin(), energies.end());
    s.max_energy = *std::max_element(energies.begin(), energies.end());
  }
  s.histogram = energy_histogram(energies, cutoff, bins);
  return s;
}

}  // namespace

SampleRecord run_single(const QuboInstance& inst, const BnnModel& model, const SolverConfig& solver,
                        SolverKind kind, const QuantizedQubo* quantized, std::size_t run_id,
                        std::uint64_t seed, double cutoff) {
  return run_one(inst, model, solver, kind, quantized, run_id, seed, cutoff).record;
}

CampaignReport finalize_report(const QuboInstance& inst, const BnnModel& model,
                               std::span<const SampleRecord> records, const CampaignConfig& cfg,
                               const std::map<SolverKind, TraceStats>& traces) {
  CampaignReport rep;
  rep.cutoff = cutoff_energy(inst, cfg.band);
  for (const auto& r : records) {
    if (r.attack_success) {
      const auto again = validate_attack(model, inst.provenance.input, inst.provenance.label, r.tau,
                                         inst.params.epsilon);
      if (again != AttackOutcome::success) {
        throw std::logic_error("run " + std::to_string(r.run_id) +
                               " claims an attack that forward inference rejects");
      }
    }
    if (r.is_good != (r.energy <= rep.cutoff)) {
      throw std::logic_error("run " + std::to_string(r.run_id) + " has an inconsistent good flag");
    }
  }
  std::set<SolverKind> kinds;
  for (const auto& r : records) kinds.insert(r.solver);
  for (auto k : kinds) {
    auto s = summarize(records, k, rep.cutoff, cfg.histogram_bins);
    if (auto it = traces.find(k); it != traces.end()) s.trace = it->second;
    rep.samples += s.samples;
    rep.good += s.good;
    rep.attacks += s.attacks;
    rep.unbudgeted_flips += s.unbudgeted_flips;
    rep.per_solver.emplace(k, std::move(s));
  }
  rep.unique_attacks = unique_count(records);
  if (rep.unique_attacks > rep.attacks || rep.attacks > rep.samples || rep.good > rep.samples) {
    throw std::logic_error("campaign counts violate unique <= attacks <= samples");
  }
  return rep;
}

CampaignResult run_campaign(const QuboInstance& inst, const BnnModel& model, const SolverConfig& solver,
                            const CampaignConfig& cfg) {
  if (model.hash() != inst.provenance.model_hash) {
    throw std::invalid_argument("model does not match the QUBO provenance hash");
  }
  if (cfg.threads < 1) throw std::invalid_argument("thread count must be >= 1");
  const double cutoff = cutoff_energy(inst, cfg.band);

  std::optional<QuantizedQubo> quantized;
  if (std::find(solver.solvers.begin(), solver.solvers.end(), SolverKind::dcim) != solver.solvers.end()) {
    quantized = campaign_matrix(inst, solver.dcim.precision_bits);
  }

  const std::size_t total = cfg.samples * solver.solvers.size();
  std::vector<RunOutput> outputs(total);
  auto job = [&](std::size_t r) {
    const auto kind = solver.solvers[r / cfg.samples];
    outputs[r] = run_one(inst, model, solver, kind, quantized ? &*quantized : nullptr, r,
                         derive_seed(cfg.master_seed, r), cutoff);
  };

  if (cfg.threads == 1) {
    for (std::size_t r = 0; r < total; ++r) job(r);
  } else {
    // exceptions may not cross the parallel region; keep the first by run id
    std::vector<std::string> errors(total);
    const auto n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for num_threads(cfg.threads) schedule(dynamic, 1)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
      try {
        job(static_cast<std::size_t>(r));
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(r)] = e.what();
      }
    }
    for (std::size_t r = 0; r < total; ++r) {
      if (!errors[r].empty()) {
        throw std::runtime_error("run " + std::to_string(r) + " failed: " + errors[r]);
      }
    }
  }

  CampaignResult result;
  std::map<SolverKind, TraceStats> traces;
  std::map<SolverKind, std::size_t> trace_runs;
  for (auto& o : outputs) {
    const auto k = o.record.solver;
    auto& t = traces[k];
    if (t.mean.empty()) {
      t.mean.assign(o.trace.size(), 0.0);
      t.min.assign(o.trace.size(), std::numeric_limits<double>::infinity());
      t.max.assign(o.trace.size(), -std::numeric_limits<double>::infinity());
    }
    for (std::size_t s = 0; s < o.trace.size() && s < t.mean.size(); ++s) {
      t.mean[s] += o.trace[s];
      t.min[s] = std::min(t.min[s], o.trace[s]);
      t.max[s] = std::max(t.max[s], o.trace[s]);
    }
    ++trace_runs[k];
    result.records.push_back(std::move(o.record));
  }
  for (auto& [k, t] : traces) {
    for (auto& m : t.mean) m /= static_cast<double>(trace_runs[k]);
  }
  result.report = finalize_report(inst, model, result.records, cfg, traces);
  return result;
}

std::string report_json(const CampaignReport& report, const QuboInstance& inst,
                        const std::string& config_echo_json) {
  nlohmann::ordered_json j;
  j["format"] = "bnnv-report";
  j["format_version"] = kReportFormatVersion;
  j["instance"] = {{"n", inst.size()},
                   {"epsilon", inst.params.epsilon},
                   {"penalty", inst.params.penalty},
                   {"lambda", inst.params.lambda},
                   {"e_min", inst.e_min},
                   {"label", inst.provenance.label}};
  j["cutoff"] = report.cutoff;
  j["counts"] = {{"samples", report.samples},
                 {"good", report.good},
                 {"attacks", report.attacks},
                 {"unique_attacks", report.unique_attacks},
                 {"unbudgeted_flips", report.unbudgeted_flips}};
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [k, s] : report.per_solver) {
    per[solver_name(k)] = {{"samples", s.samples},
                           {"good", s.good},
                           {"attacks", s.attacks},
                           {"unique_attacks", s.unique_attacks},
                           {"unbudgeted_flips", s.unbudgeted_flips},
                           {"mean_energy", s.mean_energy},
                           {"min_energy", s.min_energy},
                           {"max_energy", s.max_energy},
                           {"energy_variance", s.energy_variance},
                           {"histogram", {{"lo", s.histogram.lo},
                                          {"hi", s.histogram.hi},
                                          {"counts", s.histogram.counts}}}};
  }
  j["per_solver"] = std::move(per);
  j["config"] = config_echo_json.empty() ? nlohmann::ordered_json::object()
                                         : nlohmann::ordered_json::parse(config_echo_json);
  return j.dump(2) + "\n";
}

std::string records_json(std::span<const SampleRecord> records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    arr.push_back({{"run_id", r.run_id},
                   {"seed", r.seed},
                   {"solver", solver_name(r.solver)},
                   {"energy", r.energy},
                   {"solver_energy", r.solver_energy},
                   {"n", r.q.size()},
                   {"q", to_hex(r.q)},
                   {"tau", to_bit_string(r.tau)},
                   {"hamming_weight", r.hamming_weight},
                   {"is_good", r.is_good},
                   {"outcome", outcome_name(r.outcome)},
                   {"attack_success", r.attack_success}});
  }
  nlohmann::ordered_json j;
  j["format"] = "bnnv-records";
  j["format_version"] = kReportFormatVersion;
  j["records"] = std::move(arr);
  return j.dump() + "\n";
}

std::vector<SampleRecord> parse_records_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("format", "") != "bnnv-records" || j.value("format_version", -1) != kReportFormatVersion) {
    throw std::runtime_error("unsupported records format");
  }
  std::vector<SampleRecord> out;
  for (const auto& e : j.at("records")) {
    SampleRecord r;
    r.run_id = e.at("run_id").get<std::size_t>();
    r.seed = e.at("seed").get<std::uint64_t>();
    r.solver = solver_from_name(e.at("solver").get<std::string>());
    r.energy = e.at("energy").get<double>();
    r.solver_energy = e.at("solver_energy").get<double>();
    r.q = from_hex(e.at("q").get<std::string>(), e.at("n").get<std::size_t>());
    r.tau = from_bit_string(e.at("tau").get<std::string>());
    r.hamming_weight = e.at("hamming_weight").get<std::size_t>();
    r.is_good = e.at("is_good").get<bool>();
    const auto o = e.at("outcome").get<std::string>();
    r.outcome = o == "success" ? AttackOutcome::success
                : o == "budget_violation" ? AttackOutcome::budget_violation
                                          : AttackOutcome::no_flip;
    r.attack_success = e.at("attack_success").get<bool>();
    out.push_back(std::move(r));
  }
  return out;
}

std::string trace_csv(const TraceStats& t) {
  std::ostringstream out;
  out << "sweep,mean,min,max\n";
  for (std::size_t s = 0; s < t.mean.size(); ++s) {
    out << s << ',' << format_double(t.mean[s]) << ',' << format_double(t.min[s]) << ','
        << format_double(t.max[s]) << '\n';
  }
  return out.str();
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "bin_lo,bin_hi,count\n";
  const double width = h.counts.empty() ? 0.0 : (h.hi - h.lo) / static_cast<double>(h.counts.size());
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out << format_double(h.lo + width * static_cast<double>(b)) << ','
        << format_double(h.lo + width * static_cast<double>(b + 1)) << ',' << h.counts[b] << '\n';
  }
  return out.str();
}

std::string to_pbm(std::span<const std::uint8_t> bits) {
  const auto side = static_cast<std::size_t>(std::sqrt(static_cast<double>(bits.size())));
  std::ostringstream out;
  out << "P1\n" << side << ' ' << side << '\n';
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      out << (c ? " " : "") << (bits[r * side + c] ? '1' : '0');
    }
    out << '\n';
  }
  return out.str();
}

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + p.string());
}

}  // namespace

void write_campaign(const std::filesystem::path& dir, const QuboInstance& inst,
                    const CampaignResult& result, const std::string& config_echo_json,
                    std::size_t gallery_limit) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", report_json(result.report, inst, config_echo_json));
  write_text(dir / "records.json", records_json(result.records));
  for (const auto& [k, s] : result.report.per_solver) {
    write_text(dir / ("trace_" + std::string(solver_name(k)) + ".csv"), trace_csv(s.trace));
    write_text(dir / ("histogram_" + std::string(solver_name(k)) + ".csv"), histogram_csv(s.histogram));
  }
  std::ostringstream timing;
  timing << "run_id,solver,wall_clock_s\n";
  for (const auto& r : result.records) {
    timing << r.run_id << ',' << solver_name(r.solver) << ',' << format_double(r.wall_clock_s) << '\n';
  }
  write_text(dir / "timing.csv", timing.str());

  const auto gallery = dir / "gallery";
  std::filesystem::create_directories(gallery);
  std::set<BitVector> shown;
  const auto& x = inst.provenance.input;
  for (const auto& r : result.records) {
    if (shown.size() >= gallery_limit) break;
    if (!r.attack_success || !shown.insert(r.tau).second) continue;
    const std::string stem = "attack_" + std::to_string(r.run_id);
    write_text(gallery / (stem + "_original.pbm"), to_pbm(x));
    write_text(gallery / (stem + "_mask.pbm"), to_pbm(r.tau));
    write_text(gallery / (stem + "_perturbed.pbm"), to_pbm(xor_bits(x, r.tau)));
  }
}

}  // namespace bnnv

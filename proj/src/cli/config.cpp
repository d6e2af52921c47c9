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

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bnnv/cli.hpp"
#include "bnnv/dataset.hpp"
#include "bnnv/model.hpp"
#include "json.hpp"

namespace bnnv::cli {

using nlohmann::json;

namespace {

/// Reads keys out of one JSON object and complains about anything left over.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw std::invalid_argument(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  void get(const std::string& key, T& dst) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      dst = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw std::invalid_argument(where_ + "." + key + ": wrong type");
    }
  }

  template <class T>
  void get(const std::string& key, std::optional<T>& dst) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    if (j_.at(key).is_null()) {
      dst.reset();
      return;
    }
    T v{};
    try {
      v = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw std::invalid_argument(where_ + "." + key + ": wrong type");
    }
    dst = v;
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    return Section(j_.at(key), where_ + "." + key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw std::invalid_argument("unknown key " + where_ + "." + it.key());
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

ScanOrder scan_from_name(const std::string& s) {
  if (s == "fixed") return ScanOrder::fixed;
  if (s == "permuted") return ScanOrder::permuted;
  throw std::invalid_argument("scan_order must be fixed or permuted");
}

NoiseGranularity granularity_from_name(const std::string& s) {
  if (s == "sweep") return NoiseGranularity::sweep;
  if (s == "spin") return NoiseGranularity::spin;
  throw std::invalid_argument("noise_granularity must be sweep or spin");
}

Cooling cooling_from_name(const std::string& s) {
  if (s == "geometric") return Cooling::geometric;
  if (s == "linear") return Cooling::linear;
  throw std::invalid_argument("cooling must be geometric or linear");
}

const char* scan_name(ScanOrder o) { return o == ScanOrder::fixed ? "fixed" : "permuted"; }
const char* granularity_name(NoiseGranularity g) { return g == NoiseGranularity::sweep ? "sweep" : "spin"; }
const char* cooling_name(Cooling c) { return c == Cooling::geometric ? "geometric" : "linear"; }

void read_curve(Section s, std::optional<double>& p_max, std::optional<double>& v_th,
                std::optional<double>& width) {
  s.get("p_max", p_max);
  s.get("v_th", v_th);
  s.get("width", width);
  s.finish();
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

NoiseModel resolve_noise(const NoiseSpec& spec, const AnnealSchedule& schedule) {
  auto m = NoiseModel::defaults(schedule.v_start, schedule.v_end);
  if (spec.p01_max) m.p01.p_max = *spec.p01_max;
  if (spec.p01_vth) m.p01.v_th = *spec.p01_vth;
  if (spec.p01_width) m.p01.width = *spec.p01_width;
  if (spec.p10_max) m.p10.p_max = *spec.p10_max;
  if (spec.p10_vth) m.p10.v_th = *spec.p10_vth;
  if (spec.p10_width) m.p10.width = *spec.p10_width;
  for (const auto* c : {&m.p01, &m.p10}) {
    if (c->p_max < 0.0 || c->p_max > 1.0) throw std::invalid_argument("noise p_max must lie in [0, 1]");
    if (!(c->width > 0.0)) throw std::invalid_argument("noise width must be positive");
  }
  return m;
}

Config parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  Config cfg;
  Section root(j, "config");
  if (!root.has("format_version")) throw std::invalid_argument("config.format_version is required");
  root.get("format_version", cfg.format_version);
  if (cfg.format_version != kConfigFormatVersion) {
    throw std::invalid_argument("unsupported config format_version " + std::to_string(cfg.format_version));
  }
  if (!root.has("seed")) throw std::invalid_argument("config.seed is required");
  std::uint64_t seed = 0;
  root.get("seed", seed);
  cfg.seed = seed;

  if (root.has("paths")) {
    auto s = root.sub("paths");
    s.get("images", cfg.paths.images);
    s.get("labels", cfg.paths.labels);
    s.get("dataset", cfg.paths.dataset);
    s.get("weights", cfg.paths.weights);
    s.get("qubo", cfg.paths.qubo);
    s.get("output", cfg.paths.output);
    s.finish();
  }
  if (root.has("ingest")) {
    auto s = root.sub("ingest");
    s.get("target", cfg.ingest.target);
    s.get("threshold", cfg.ingest.threshold);
    std::vector<int> classes{cfg.ingest.class_a, cfg.ingest.class_b};
    s.get("classes", classes);
    if (classes.size() != 2) throw std::invalid_argument("config.ingest.classes needs two digits");
    cfg.ingest.class_a = classes[0];
    cfg.ingest.class_b = classes[1];
    s.get("width", cfg.ingest.width);
    s.finish();
  }
  if (root.has("train")) {
    auto s = root.sub("train");
    s.get("architecture", cfg.train.architecture);
    s.get("max_passes", cfg.train.max_passes);
    s.finish();
  }
  if (root.has("encode")) {
    auto s = root.sub("encode");
    s.get("epsilon", cfg.encode.options.epsilon);
    s.get("penalty", cfg.encode.options.penalty);
    s.get("lambda", cfg.encode.options.lambda);
    s.get("sample", cfg.encode.sample);
    s.finish();
  }
  if (root.has("solver")) {
    auto s = root.sub("solver");
    std::vector<std::string> names;
    s.get("solvers", names);
    if (s.has("solvers")) {
      cfg.solver.solvers.clear();
      for (const auto& n : names) cfg.solver.solvers.push_back(solver_from_name(n));
    }
    if (s.has("dcim")) {
      auto d = s.sub("dcim");
      auto& sch = cfg.solver.dcim.schedule;
      d.get("v_start", sch.v_start);
      d.get("v_end", sch.v_end);
      d.get("steps", sch.steps);
      d.get("refresh_period", sch.refresh_period);
      std::string order = scan_name(sch.order);
      d.get("scan_order", order);
      sch.order = scan_from_name(order);
      std::string gran = granularity_name(sch.granularity);
      d.get("noise_granularity", gran);
      sch.granularity = granularity_from_name(gran);
      d.get("precision_bits", cfg.solver.dcim.precision_bits);
      if (d.has("noise")) {
        auto n = d.sub("noise");
        if (n.has("p01")) read_curve(n.sub("p01"), cfg.noise.p01_max, cfg.noise.p01_vth, cfg.noise.p01_width);
        if (n.has("p10")) read_curve(n.sub("p10"), cfg.noise.p10_max, cfg.noise.p10_vth, cfg.noise.p10_width);
        n.finish();
      }
      d.finish();
    }
    if (s.has("sa")) {
      auto a = s.sub("sa");
      a.get("t_start", cfg.solver.sa.t_start);
      a.get("t_end", cfg.solver.sa.t_end);
      a.get("sweeps", cfg.solver.sa.sweeps);
      std::string cooling = cooling_name(cfg.solver.sa.cooling);
      a.get("cooling", cooling);
      cfg.solver.sa.cooling = cooling_from_name(cooling);
      a.finish();
    }
    s.finish();
  }
  if (root.has("campaign")) {
    auto s = root.sub("campaign");
    s.get("samples", cfg.campaign.samples);
    s.get("threads", cfg.campaign.threads);
    s.get("band", cfg.campaign.band);
    s.get("histogram_bins", cfg.campaign.histogram_bins);
    s.get("gallery_limit", cfg.campaign.gallery_limit);
    s.finish();
  }
  if (root.has("ppa")) {
    auto s = root.sub("ppa");
    s.get("spins", cfg.ppa.spins);
    s.get("bits", cfg.ppa.bits);
    s.get("cell_area_um2", cfg.ppa.cell_area_um2);
    s.get("array_fraction", cfg.ppa.array_fraction);
    s.get("baseline_time_s", cfg.ppa.baseline_time_s);
    s.get("baseline_energy_j", cfg.ppa.baseline_energy_j);
    s.get("dcim_time_s", cfg.ppa.dcim_time_s);
    s.get("dcim_power_w", cfg.ppa.dcim_power_w);
    s.finish();
  }
  root.finish();
  cfg.solver.dcim.noise = resolve_noise(cfg.noise, cfg.solver.dcim.schedule);
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_echo(const Config& cfg) {
  nlohmann::ordered_json j;
  j["format_version"] = cfg.format_version;
  j["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  std::vector<std::string> names;
  for (auto k : cfg.solver.solvers) names.push_back(solver_name(k));
  const auto& sch = cfg.solver.dcim.schedule;
  const auto& nm = cfg.solver.dcim.noise;
  auto curve = [](const SigmoidCurve& c) {
    return nlohmann::ordered_json{{"p_max", c.p_max}, {"v_th", c.v_th}, {"width", c.width}};
  };
  j["solver"] = {{"solvers", names},
                 {"dcim", {{"v_start", sch.v_start},
                           {"v_end", sch.v_end},
                           {"steps", sch.steps},
                           {"refresh_period", sch.refresh_period},
                           {"scan_order", scan_name(sch.order)},
                           {"noise_granularity", granularity_name(sch.granularity)},
                           {"precision_bits", cfg.solver.dcim.precision_bits},
                           {"noise", {{"p01", curve(nm.p01)}, {"p10", curve(nm.p10)}}}}},
                 {"sa", {{"t_start", opt_json(cfg.solver.sa.t_start)},
                         {"t_end", opt_json(cfg.solver.sa.t_end)},
                         {"sweeps", cfg.solver.sa.sweeps},
                         {"cooling", cooling_name(cfg.solver.sa.cooling)}}}};
  j["campaign"] = {{"samples", cfg.campaign.samples},
                   {"band", cfg.campaign.band},
                   {"histogram_bins", cfg.campaign.histogram_bins},
                   {"gallery_limit", cfg.campaign.gallery_limit}};
  return j.dump();
}

namespace {

void require(const json& j, std::initializer_list<const char*> keys, const std::string& kind) {
  for (const char* k : keys) {
    if (!j.contains(k)) throw std::runtime_error(kind + " artifact lacks '" + k + "'");
  }
}

void require_format(const json& j, const std::string& format, int version) {
  if (j.value("format", "") != format) throw std::runtime_error("artifact is not " + format);
  if (j.value("format_version", -1) != version) {
    throw std::runtime_error(format + " artifact has the wrong format_version");
  }
}

}  // namespace

void validate_artifact(const std::string& kind, const std::string& text) {
  std::istringstream in(text);
  if (kind == "model") {
    (void)read_model_json(in);
  } else if (kind == "dataset") {
    (void)read_dataset_json(in);
  } else if (kind == "qubo") {
    (void)read_qubo(in);
  } else if (kind == "records") {
    (void)parse_records_json(text);
  } else if (kind == "report") {
    const auto j = json::parse(text);
    require_format(j, "bnnv-report", kReportFormatVersion);
    require(j, {"instance", "cutoff", "counts", "per_solver", "config"}, kind);
    const auto& c = j.at("counts");
    require(c, {"samples", "good", "attacks", "unique_attacks", "unbudgeted_flips"}, kind);
    const auto samples = c.at("samples").get<std::size_t>();
    const auto attacks = c.at("attacks").get<std::size_t>();
    if (c.at("unique_attacks").get<std::size_t>() > attacks || attacks > samples ||
        c.at("good").get<std::size_t>() > samples) {
      throw std::runtime_error("report counts violate unique <= attacks <= samples");
    }
    for (const auto& [name, s] : j.at("per_solver").items()) {
      (void)solver_from_name(name);
      require(s, {"samples", "histogram"}, kind);
      std::size_t sum = 0;
      for (const auto& b : s.at("histogram").at("counts")) sum += b.get<std::size_t>();
      if (sum != s.at("samples").get<std::size_t>()) {
        throw std::runtime_error("histogram of " + name + " does not sum to its sample count");
      }
    }
  } else if (kind == "ppa") {
    const auto j = json::parse(text);
    require_format(j, "bnnv-ppa", 1);
    require(j, {"inputs", "outputs"}, kind);
    require(j.at("outputs"), {"stored_bits", "array_area_mm2", "total_area_mm2", "speedup",
                              "power_efficiency", "energy_ratio"}, kind);
  } else {
    throw std::invalid_argument("unknown artifact kind '" + kind + "'");
  }
}

std::string ppa_json(const PpaInputs& in, const PpaBlock& out) {
  nlohmann::ordered_json j;
  j["format"] = "bnnv-ppa";
  j["format_version"] = 1;
  j["inputs"] = {{"spins", in.spins},
                 {"bits", in.bits},
                 {"cell_area_um2", in.cell_area_um2},
                 {"array_fraction", in.array_fraction},
                 {"baseline_time_s", in.baseline_time_s},
                 {"baseline_energy_j", in.baseline_energy_j},
                 {"dcim_time_s", in.dcim_time_s},
                 {"dcim_power_w", in.dcim_power_w}};
  j["outputs"] = {{"stored_bits", out.stored_bits},
                  {"array_area_mm2", out.array_area_mm2},
                  {"total_area_mm2", out.total_area_mm2},
                  {"speedup", out.speedup},
                  {"baseline_power_w", out.baseline_power_w},
                  {"power_efficiency", out.power_efficiency},
                  {"dcim_energy_j", out.dcim_energy_j},
                  {"energy_ratio", out.energy_ratio}};
  return j.dump(2) + "\n";
}

}  // namespace bnnv::cli

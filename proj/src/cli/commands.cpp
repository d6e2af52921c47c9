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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "bnnv/cli.hpp"
#include "bnnv/dataset.hpp"
#include "bnnv/model.hpp"
#include "json.hpp"

namespace bnnv::cli {

namespace {

namespace fs = std::filesystem;

/// Flags that overlay the loaded config once parsing is done.
class Overrides {
 public:
  template <class T, class Get>
  CLI::Option* add(CLI::App* app, const std::string& name, const std::string& desc, Get get) {
    auto holder = std::make_shared<T>();
    auto* opt = app->add_option(name, *holder, desc);
    apply_.push_back([opt, holder, get](Config& c) {
      if (opt->count()) get(c) = *holder;
    });
    return opt;
  }

  template <class T>
  CLI::Option* add_fn(CLI::App* app, const std::string& name, const std::string& desc,
                      std::function<void(Config&, const T&)> fn) {
    auto holder = std::make_shared<T>();
    auto* opt = app->add_option(name, *holder, desc);
    apply_.push_back([opt, holder, fn](Config& c) {
      if (opt->count()) fn(c, *holder);
    });
    return opt;
  }

  void apply(Config& c) const {
    for (const auto& f : apply_) f(c);
  }

 private:
  std::vector<std::function<void(Config&)>> apply_;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::string& require_file(const std::string& path, const std::string& flag) {
  if (path.empty()) throw std::invalid_argument("missing " + flag);
  if (!fs::is_regular_file(path)) throw std::runtime_error("file not found: " + path);
  return path;
}

const std::string& require_out(const std::string& path, const std::string& flag) {
  if (path.empty()) throw std::invalid_argument("missing " + flag);
  return path;
}

std::uint64_t require_seed(const Config& cfg) {
  if (!cfg.seed) throw std::invalid_argument("a master seed is required (--seed or config seed)");
  return *cfg.seed;
}

/// Writes `text` to `path`, reads it back and checks it against its schema.
void write_validated(const fs::path& path, const std::string& kind, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
  }
  validate_artifact(kind, read_file(path));
}

std::string arch_name(const std::vector<std::size_t>& arch) {
  std::string s;
  for (std::size_t i = 0; i < arch.size(); ++i) s += (i ? "x" : "") + std::to_string(arch[i]);
  return s;
}

struct ReferenceSize {
  const char* arch;
  int epsilon;
  std::size_t constraints[2];  // by label
  std::size_t variables;
};

constexpr ReferenceSize kReferenceSizes[] = {
    {"63x7x1", 16, {4492, 4304}, 183},
    {"127x7x1", 32, {15944, 19291}, 319},
    {"1023x3x1", 256, {498700, 487771}, 1066},
};

int cmd_ingest(const Config& cfg, std::ostream& out) {
  const auto& images = require_file(cfg.paths.images, "--images");
  const auto& labels = require_file(cfg.paths.labels, "--labels");
  const auto& dest = require_out(cfg.paths.dataset, "--out");
  const auto raw = load_mnist_idx(images, labels, cfg.ingest.class_a, cfg.ingest.class_b);
  auto ds = build_dataset(raw, cfg.ingest.target, cfg.ingest.threshold, cfg.ingest.width);
  ds.source.class_a = cfg.ingest.class_a;
  ds.source.class_b = cfg.ingest.class_b;
  std::ostringstream text;
  write_dataset_json(text, ds);
  write_validated(dest, "dataset", text.str());
  std::size_t ones = 0;
  for (const auto& it : ds.items) ones += it.label == 1;
  out << "images kept: " << raw.images.size() << " (digits " << cfg.ingest.class_a << "/"
      << cfg.ingest.class_b << ")\n"
      << "items after dedupe: " << ds.items.size() << " (label 0: " << ds.items.size() - ones
      << ", label 1: " << ones << ")\n"
      << "input width: " << ds.source.width << " (" << cfg.ingest.target << "x" << cfg.ingest.target
      << " pooled)\n"
      << "wrote " << dest << "\n";
  return 0;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_dataset_json(in);
}

int cmd_train(const Config& cfg, std::ostream& out) {
  const auto ds = load_dataset(require_file(cfg.paths.dataset, "--dataset"));
  const auto& dest = require_out(cfg.paths.weights, "--out");
  const auto seed = require_seed(cfg);
  if (ds.items.empty()) throw std::runtime_error("dataset is empty");
  auto arch = cfg.train.architecture;
  if (arch.empty()) arch = {ds.items.front().bits.size(), 7, 1};
  if (arch.front() != ds.items.front().bits.size()) {
    throw std::invalid_argument("architecture input width " + std::to_string(arch.front()) +
                                " does not match dataset width " +
                                std::to_string(ds.items.front().bits.size()));
  }
  const auto model = train_greedy(ds.items, arch, seed, cfg.train.max_passes);
  std::ostringstream text;
  write_model_json(text, model);
  write_validated(dest, "model", text.str());
  out << "architecture: " << arch_name(arch) << "\n"
      << "training accuracy: " << std::fixed << std::setprecision(4) << accuracy(model, ds.items)
      << "\nwrote " << dest << "\n";
  return 0;
}

int cmd_encode(const Config& cfg, std::ostream& out) {
  const auto model = load_model(require_file(cfg.paths.weights, "--weights"));
  const auto ds = load_dataset(require_file(cfg.paths.dataset, "--dataset"));
  const auto& dest = require_out(cfg.paths.qubo, "--out");

  std::size_t index = 0;
  if (cfg.encode.sample) {
    index = *cfg.encode.sample;
    if (index >= ds.items.size()) throw std::invalid_argument("sample index out of range");
    if (model.forward(ds.items[index].bits) != ds.items[index].label) {
      throw std::invalid_argument("sample " + std::to_string(index) + " is misclassified");
    }
  } else {
    while (index < ds.items.size() && model.forward(ds.items[index].bits) != ds.items[index].label) ++index;
    if (index == ds.items.size()) throw std::runtime_error("no correctly classified sample");
  }
  const auto& item = ds.items[index];
  const auto inst = encode(model, item.bits, item.label, cfg.encode.options);
  std::ostringstream text;
  write_qubo(text, inst);
  write_validated(dest, "qubo", text.str());

  const auto arch = arch_name(model.architecture());
  out << "sample: " << index << " (label " << item.label << ")\n"
      << "architecture: " << arch << ", epsilon " << inst.params.epsilon << ", penalty "
      << format_double(inst.params.penalty) << "\n"
      << "variables: " << inst.size() << " (perturbation "
      << inst.registry.count(VarRole::perturbation) << ", activation bits "
      << inst.registry.count(VarRole::activation_bit) << ", slack " << inst.registry.count(VarRole::slack)
      << ", auxiliary " << inst.registry.count(VarRole::auxiliary) << ")\n"
      << "constraint groups: " << inst.num_constraints << "\n"
      << "nonzero couplings: " << count_nonzero_upper(inst.q) << "\n";
  for (const auto& ref : kReferenceSizes) {
    if (arch == ref.arch) {
      out << "reference encoding at epsilon " << ref.epsilon << ": " << ref.variables << " variables, "
          << ref.constraints[item.label] << " constraints\n";
    }
  }
  out << "wrote " << dest << "\n";
  return 0;
}

int cmd_solve(const Config& cfg, std::ostream& out) {
  const auto inst = load_qubo(require_file(cfg.paths.qubo, "--qubo"));
  const auto model = load_model(require_file(cfg.paths.weights, "--weights"));
  const fs::path dir = require_out(cfg.paths.output, "--out");
  CampaignConfig camp = cfg.campaign;
  camp.master_seed = require_seed(cfg);
  if (cfg.solver.solvers.empty()) throw std::invalid_argument("no solver selected");

  const auto result = run_campaign(inst, model, cfg.solver, camp);
  write_campaign(dir, inst, result, config_echo(cfg), camp.gallery_limit);
  validate_artifact("report", read_file(dir / "report.json"));
  validate_artifact("records", read_file(dir / "records.json"));

  const auto& r = result.report;
  out << "variables: " << inst.size() << ", cutoff " << format_double(r.cutoff) << "\n";
  for (const auto& [kind, s] : r.per_solver) {
    out << solver_name(kind) << ": samples " << s.samples << ", good " << s.good << ", attacks "
        << s.attacks << ", unique " << s.unique_attacks << ", unbudgeted flips " << s.unbudgeted_flips
        << ", mean energy " << format_double(s.mean_energy) << "\n";
  }
  out << "wrote " << dir.string() << "\n";
  return 0;
}

int cmd_report(const Config& cfg, std::ostream& out) {
  const fs::path dir = require_out(cfg.paths.output, "--results");
  const auto inst = load_qubo(require_file(cfg.paths.qubo, "--qubo"));
  const auto model = load_model(require_file(cfg.paths.weights, "--weights"));
  const auto report_text = read_file(dir / "report.json");
  validate_artifact("report", report_text);
  const auto stored = nlohmann::json::parse(report_text);
  const auto records = parse_records_json(read_file(dir / "records.json"));

  CampaignConfig camp = cfg.campaign;
  if (stored.contains("config") && stored["config"].contains("campaign")) {
    camp.band = stored["config"]["campaign"].value("band", camp.band);
    camp.histogram_bins = stored["config"]["campaign"].value("histogram_bins", camp.histogram_bins);
  }
  const auto rep = finalize_report(inst, model, records, camp, {});
  const auto& c = stored.at("counts");
  if (c.at("samples").get<std::size_t>() != rep.samples || c.at("good").get<std::size_t>() != rep.good ||
      c.at("attacks").get<std::size_t>() != rep.attacks ||
      c.at("unique_attacks").get<std::size_t>() != rep.unique_attacks) {
    throw std::runtime_error("report.json counts disagree with records.json");
  }

  out << std::left << std::setw(8) << "solver" << std::right << std::setw(9) << "samples" << std::setw(8)
      << "good" << std::setw(9) << "attacks" << std::setw(8) << "unique" << std::setw(12) << "unbudgeted"
      << std::setw(14) << "mean E" << std::setw(14) << "min E" << "\n";
  auto row = [&](const std::string& name, const auto& s, double mean, double mn) {
    out << std::left << std::setw(8) << name << std::right << std::setw(9) << s.samples << std::setw(8)
        << s.good << std::setw(9) << s.attacks << std::setw(8) << s.unique_attacks << std::setw(12)
        << s.unbudgeted_flips << std::setw(14) << format_double(mean) << std::setw(14) << format_double(mn)
        << "\n";
  };
  for (const auto& [kind, s] : rep.per_solver) row(solver_name(kind), s, s.mean_energy, s.min_energy);
  out << "cutoff " << format_double(rep.cutoff) << "; " << rep.attacks
      << " budget-compliant attacks re-validated by forward inference\n";
  if (rep.attacks > 0) {
    out << "model is not robust at this input for epsilon " << inst.params.epsilon << "\n";
  }
  return 0;
}

int cmd_ppa(const Config& cfg, const std::string& dest, std::ostream& out) {
  const auto block = ppa_project(cfg.ppa);
  const auto text = ppa_json(cfg.ppa, block);
  if (dest.empty()) {
    validate_artifact("ppa", text);
    out << text;
  } else {
    write_validated(dest, "ppa", text);
    out << "stored bits: " << block.stored_bits << "\nwrote " << dest << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"BNN robustness verification on a simulated compute-in-memory Ising annealer", "bnnv"};
  app.require_subcommand(1);
  std::string config_path;
  std::string ppa_out;
  Overrides ov;

  auto common = [&](CLI::App* sub, bool seeded) {
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
    if (seeded) {
      ov.add<std::uint64_t>(sub, "--seed", "master seed", [](Config& c) -> auto& { return c.seed; });
    }
  };

  auto* ingest = app.add_subcommand("ingest", "MNIST IDX files to a binarized dataset cache");
  common(ingest, false);
  ov.add<std::string>(ingest, "--images", "IDX image file", [](Config& c) -> auto& { return c.paths.images; });
  ov.add<std::string>(ingest, "--labels", "IDX label file", [](Config& c) -> auto& { return c.paths.labels; });
  ov.add<std::string>(ingest, "--out", "dataset JSON to write", [](Config& c) -> auto& { return c.paths.dataset; });
  ov.add<std::size_t>(ingest, "--target", "pooled side length", [](Config& c) -> auto& { return c.ingest.target; });
  ov.add<double>(ingest, "--threshold", "binarization threshold in (0,1)",
                 [](Config& c) -> auto& { return c.ingest.threshold; });
  ov.add<int>(ingest, "--class-a", "digit mapped to label 0", [](Config& c) -> auto& { return c.ingest.class_a; });
  ov.add<int>(ingest, "--class-b", "digit mapped to label 1", [](Config& c) -> auto& { return c.ingest.class_b; });
  ov.add<std::size_t>(ingest, "--width", "padded input width (0 = next 2^k-1)",
                      [](Config& c) -> auto& { return c.ingest.width; });

  auto* train = app.add_subcommand("train", "greedy single-flip BNN training");
  common(train, true);
  ov.add<std::string>(train, "--dataset", "dataset JSON", [](Config& c) -> auto& { return c.paths.dataset; });
  ov.add<std::string>(train, "--out", "model JSON to write", [](Config& c) -> auto& { return c.paths.weights; });
  ov.add<std::vector<std::size_t>>(train, "--arch", "layer widths, e.g. 63,7,1",
                                   [](Config& c) -> auto& { return c.train.architecture; })
      ->delimiter(',');
  ov.add<std::size_t>(train, "--max-passes", "passes over all weights",
                      [](Config& c) -> auto& { return c.train.max_passes; });

  auto* enc = app.add_subcommand("encode", "build the verification QUBO for one sample");
  common(enc, false);
  ov.add<std::string>(enc, "--weights", "model JSON", [](Config& c) -> auto& { return c.paths.weights; });
  ov.add<std::string>(enc, "--dataset", "dataset JSON", [](Config& c) -> auto& { return c.paths.dataset; });
  ov.add<std::string>(enc, "--out", "QUBO file to write", [](Config& c) -> auto& { return c.paths.qubo; });
  ov.add<std::size_t>(enc, "--sample", "dataset index (default: first correctly classified)",
                      [](Config& c) -> auto& { return c.encode.sample; });
  ov.add<int>(enc, "--epsilon", "perturbation budget", [](Config& c) -> auto& { return c.encode.options.epsilon; });
  ov.add<double>(enc, "--penalty", "penalty weight", [](Config& c) -> auto& { return c.encode.options.penalty; });
  ov.add<double>(enc, "--lambda", "objective weight", [](Config& c) -> auto& { return c.encode.options.lambda; });

  auto* solve = app.add_subcommand("solve", "run a sampling campaign");
  common(solve, true);
  ov.add<std::string>(solve, "--qubo", "QUBO file", [](Config& c) -> auto& { return c.paths.qubo; });
  ov.add<std::string>(solve, "--weights", "model JSON", [](Config& c) -> auto& { return c.paths.weights; });
  ov.add<std::string>(solve, "--out", "results directory", [](Config& c) -> auto& { return c.paths.output; });
  ov.add_fn<std::vector<std::string>>(solve, "--solver", "dcim, sa or both (comma separated)",
                                      [](Config& c, const std::vector<std::string>& v) {
                                        c.solver.solvers.clear();
                                        for (const auto& n : v) c.solver.solvers.push_back(solver_from_name(n));
                                      })
      ->delimiter(',');
  ov.add<std::size_t>(solve, "--samples", "runs per solver", [](Config& c) -> auto& { return c.campaign.samples; });
  ov.add<int>(solve, "--threads", "worker threads", [](Config& c) -> auto& { return c.campaign.threads; });
  ov.add<double>(solve, "--band", "good-solution band fraction", [](Config& c) -> auto& { return c.campaign.band; });
  ov.add<std::size_t>(solve, "--bins", "histogram bins", [](Config& c) -> auto& { return c.campaign.histogram_bins; });
  ov.add<std::size_t>(solve, "--gallery", "attacks rendered as PBM",
                      [](Config& c) -> auto& { return c.campaign.gallery_limit; });
  ov.add<std::size_t>(solve, "--steps", "annealing sweeps", [](Config& c) -> auto& { return c.solver.dcim.schedule.steps; });
  ov.add<double>(solve, "--v-start", "initial supply voltage",
                 [](Config& c) -> auto& { return c.solver.dcim.schedule.v_start; });
  ov.add<double>(solve, "--v-end", "final supply voltage", [](Config& c) -> auto& { return c.solver.dcim.schedule.v_end; });
  ov.add<std::size_t>(solve, "--refresh-period", "sweeps between weight refreshes",
                      [](Config& c) -> auto& { return c.solver.dcim.schedule.refresh_period; });
  ov.add_fn<std::string>(solve, "--scan-order", "fixed or permuted", [](Config& c, const std::string& v) {
    if (v != "fixed" && v != "permuted") throw std::invalid_argument("--scan-order must be fixed or permuted");
    c.solver.dcim.schedule.order = v == "fixed" ? ScanOrder::fixed : ScanOrder::permuted;
  });
  ov.add_fn<std::string>(solve, "--noise-granularity", "sweep or spin", [](Config& c, const std::string& v) {
    if (v != "sweep" && v != "spin") throw std::invalid_argument("--noise-granularity must be sweep or spin");
    c.solver.dcim.schedule.granularity = v == "sweep" ? NoiseGranularity::sweep : NoiseGranularity::spin;
  });
  ov.add<int>(solve, "--precision-bits", "quantization width (0 = full precision)",
              [](Config& c) -> auto& { return c.solver.dcim.precision_bits; });
  ov.add<double>(solve, "--p01-max", "peak 0->1 flip rate", [](Config& c) -> auto& { return c.noise.p01_max; });
  ov.add<double>(solve, "--p10-max", "peak 1->0 flip rate", [](Config& c) -> auto& { return c.noise.p10_max; });
  ov.add<std::size_t>(solve, "--sa-sweeps", "SA sweeps", [](Config& c) -> auto& { return c.solver.sa.sweeps; });
  ov.add<double>(solve, "--sa-t-start", "SA start temperature", [](Config& c) -> auto& { return c.solver.sa.t_start; });
  ov.add<double>(solve, "--sa-t-end", "SA end temperature", [](Config& c) -> auto& { return c.solver.sa.t_end; });
  ov.add_fn<std::string>(solve, "--cooling", "geometric or linear", [](Config& c, const std::string& v) {
    if (v != "geometric" && v != "linear") throw std::invalid_argument("--cooling must be geometric or linear");
    c.solver.sa.cooling = v == "geometric" ? Cooling::geometric : Cooling::linear;
  });

  auto* report = app.add_subcommand("report", "re-validate and summarize a results directory");
  common(report, false);
  ov.add<std::string>(report, "--results", "results directory", [](Config& c) -> auto& { return c.paths.output; });
  ov.add<std::string>(report, "--qubo", "QUBO file", [](Config& c) -> auto& { return c.paths.qubo; });
  ov.add<std::string>(report, "--weights", "model JSON", [](Config& c) -> auto& { return c.paths.weights; });

  auto* ppa = app.add_subcommand("ppa", "area/speed/power projection of the annealer macro");
  common(ppa, false);
  ppa->add_option("--out", ppa_out, "write JSON here instead of stdout");
  ov.add<std::uint64_t>(ppa, "--spins", "problem variables", [](Config& c) -> auto& { return c.ppa.spins; });
  ov.add<int>(ppa, "--bits", "bits per coefficient", [](Config& c) -> auto& { return c.ppa.bits; });
  ov.add<double>(ppa, "--cell-area", "bitcell area in um^2", [](Config& c) -> auto& { return c.ppa.cell_area_um2; });
  ov.add<double>(ppa, "--array-fraction", "array share of macro area",
                 [](Config& c) -> auto& { return c.ppa.array_fraction; });
  ov.add<double>(ppa, "--baseline-time", "baseline seconds per solution",
                 [](Config& c) -> auto& { return c.ppa.baseline_time_s; });
  ov.add<double>(ppa, "--baseline-energy", "baseline joules per solution",
                 [](Config& c) -> auto& { return c.ppa.baseline_energy_j; });
  ov.add<double>(ppa, "--dcim-time", "annealer seconds per solution",
                 [](Config& c) -> auto& { return c.ppa.dcim_time_s; });
  ov.add<double>(ppa, "--dcim-power", "annealer watts", [](Config& c) -> auto& { return c.ppa.dcim_power_w; });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg = load_config(require_file(config_path, "--config"));
    ov.apply(cfg);
    cfg.solver.dcim.noise = resolve_noise(cfg.noise, cfg.solver.dcim.schedule);

    if (ingest->parsed()) return cmd_ingest(cfg, out);
    if (train->parsed()) return cmd_train(cfg, out);
    if (enc->parsed()) return cmd_encode(cfg, out);
    if (solve->parsed()) return cmd_solve(cfg, out);
    if (report->parsed()) return cmd_report(cfg, out);
    if (ppa->parsed()) return cmd_ppa(cfg, ppa_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace bnnv::cli

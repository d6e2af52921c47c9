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

// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnnv/cli.hpp"
#include "bnnv/dcim.hpp"
#include "bnnv/encoder.hpp"
#include "bnnv/ising.hpp"
#include "bnnv/pipeline.hpp"
#include "bnnv/poly.hpp"
#include "oracles.hpp"

using namespace bnnv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void note(Outcome& o, bool cond, const std::string& what) {
  if (!cond) o.ok = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what + (cond ? "" : " [x]");
}

bool within_rel(double got, double want, double tol) { return std::abs(got - want) <= tol * std::abs(want); }

// Every campaign run anywhere in the suite lands here.
std::vector<std::string> accounting_failures;
std::size_t campaigns_checked = 0;

void audit(const CampaignReport& r, const std::string& tag) {
  ++campaigns_checked;
  std::size_t samples = 0, good = 0, attacks = 0, unique = 0;
  bool ok = r.unique_attacks <= r.attacks && r.attacks <= r.samples && r.good <= r.samples;
  for (const auto& [k, s] : r.per_solver) {
    samples += s.samples;
    good += s.good;
    attacks += s.attacks;
    unique = std::max(unique, s.unique_attacks);
    ok = ok && s.unique_attacks <= s.attacks && s.attacks <= s.samples && s.good <= s.samples;
    std::size_t hist = 0;
    for (auto c : s.histogram.counts) hist += c;
    ok = ok && hist == s.samples;
  }
  ok = ok && samples == r.samples && good == r.good && attacks == r.attacks && unique <= r.unique_attacks;
  if (!ok) accounting_failures.push_back(tag);
}

SquareMatrix random_symmetric(std::size_t n, double range, Rng& rng) {
  SquareMatrix q(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = (2.0 * uniform01(rng) - 1.0) * range;
      q(i, j) = v;
      q(j, i) = v;
    }
  }
  return q;
}

// ---------------------------------------------------------------- 1

Outcome ppa_arithmetic() {
  std::ostringstream out, err;
  const int rc = cli::run_cli({"ppa", "--spins", "1066", "--bits", "8", "--cell-area", "1.701", "--array-fraction",
                               "0.487", "--baseline-time", "20.29", "--baseline-energy", "1660.37", "--dcim-time",
                               "0.11385", "--dcim-power", "0.053194"},
                              out, err);
  Outcome o;
  if (rc != 0) {
    note(o, false, "ppa exited " + std::to_string(rc) + ": " + err.str());
    return o;
  }
  const auto j = nlohmann::json::parse(out.str())["outputs"];
  const auto bits = j["stored_bits"].get<std::uint64_t>();
  note(o, bits == 9'112'712, "bits " + std::to_string(bits) + " (target 9112712; 1067^2*8 = 9107912)");
  const double arr = j["array_area_mm2"], tot = j["total_area_mm2"];
  const double speed = j["speedup"], eff = j["power_efficiency"];
  note(o, within_rel(arr, 15.5, 0.005), "array " + fmt("%.3f", arr) + " mm2");
  note(o, within_rel(tot, 31.8, 0.005), "total " + fmt("%.3f", tot) + " mm2");
  note(o, within_rel(speed, 178.0, 0.01), "speedup " + fmt("%.1f", speed) + "x");
  note(o, within_rel(eff, 1538.0, 0.01), "power efficiency " + fmt("%.1f", eff) + "x");
  return o;
}

// ---------------------------------------------------------------- 2

Outcome transform_exactness() {
  constexpr double tol = 1e-9;
  double worst = 0.0;
  auto track = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };

  Rng rng(2);
  std::size_t states = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + k % 12;
    const auto q = random_symmetric(n, 3.0, rng);
    const double offset = 2.0 * uniform01(rng) - 1.0;
    const auto is = qubo_to_ising(q, offset);
    const auto back = ising_to_qubo(is);
    const std::uint64_t total = std::uint64_t{1} << n;
    std::vector<double> e(total);
    for (std::uint64_t c = 0; c < total; ++c) e[c] = oracle::energy(q, offset, oracle::bits_of(c, n));
    for (std::uint64_t c = 0; c < total; ++c) {
      const auto x = oracle::bits_of(c, n);
      const auto s = bits_to_spins(x);
      track(oracle::ising(is, s), e[c]);
      track(oracle::energy(back.q, back.offset, x), e[c]);
      for (std::size_t i = 0; i < n; ++i) {
        const double direct = e[c ^ (std::uint64_t{1} << i)] - e[c];
        track(delta_e_qubo(q, x, i), direct);
        track(delta_e_ising(is, s, i), direct);
      }
      ++states;
    }
  }

  // large instance, sampled states
  const std::size_t big = 1067;
  const auto q = random_symmetric(big, 1.0, rng);
  const auto is = qubo_to_ising(q, 0.25);
  const auto back = ising_to_qubo(is);
  const auto pq = pin_embed(q, 0.25);
  auto pinned_direct = [&](const oracle::Bits& x) {
    oracle::Bits full = x;
    full.push_back(1);
    return oracle::energy(pq.q, pq.offset, full);
  };
  double big_worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto x = random_bits(big, rng);
    const auto s = bits_to_spins(x);
    const double e = oracle::energy(q, 0.25, x);
    big_worst = std::max(big_worst, std::abs(oracle::ising(is, s) - e));
    big_worst = std::max(big_worst, std::abs(oracle::energy(back.q, back.offset, x) - e));
    const auto i = static_cast<std::size_t>(rng() % big);
    auto y = x;
    y[i] ^= 1U;
    const double direct = oracle::energy(q, 0.25, y) - e;
    big_worst = std::max(big_worst, std::abs(delta_e_qubo(q, x, i) - direct));
    big_worst = std::max(big_worst, std::abs(delta_e_ising(is, s, i) - direct));
    big_worst = std::max(big_worst, std::abs(delta_e_pinned(pq, x, i) - (pinned_direct(y) - pinned_direct(x))));
  }
  Outcome o;
  note(o, worst <= tol, std::to_string(states) + " exhaustive states, max error " + fmt("%.2e", worst));
  note(o, big_worst <= tol, "1067-var x 1000 states, max error " + fmt("%.2e", big_worst));
  return o;
}

// ---------------------------------------------------------------- 3

Outcome pinned_embedding() {
  double worst = 0.0;
  bool layout = true;
  std::size_t checks = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng r(seed);
    const std::size_t n = 1 + seed % 12;
    const auto q = random_symmetric(n, 4.0, r);
    const double offset = uniform01(r);
    const auto pq = pin_embed(q, offset);
    layout = layout && pq.pinned == n && pq.q.size() == n + 1 && pq.q.is_symmetric();
    for (std::size_t i = 0; i < n; ++i) {
      layout = layout && pq.q(i, i) == 0.0 && pq.q(i, n) == q(i, i) / 2.0;
    }
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
      const auto x = oracle::bits_of(c, n);
      auto full = x;
      full.push_back(1);
      const double src = oracle::energy(q, offset, x);
      worst = std::max(worst, std::abs(oracle::energy(pq.q, pq.offset, full) - src));
      for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(delta_e_pinned(pq, x, i) - delta_e_qubo(q, x, i)));
        ++checks;
      }
    }
  }
  Outcome o;
  note(o, layout, "pinned layout invariants");
  note(o, worst <= 1e-9, std::to_string(checks) + " state/index pairs, max error " + fmt("%.2e", worst));
  return o;
}

// ---------------------------------------------------------------- 4

struct EncoderTally {
  std::size_t instances = 0;
  std::size_t satisfied = 0;
  std::size_t unsound = 0;
  std::size_t feasible = 0;
  std::size_t floor_missed = 0;
  std::size_t ground_mismatch = 0;
};

void check_encoding(const BnnModel& m, const BitVector& x, int eps, EncoderTally& t) {
  const int label = oracle::forward(m, x);
  const auto inst = encode(m, x, label, {.epsilon = eps});
  const std::size_t n = inst.size();
  const std::size_t n0 = x.size();
  const double lambda = inst.params.lambda;
  ++t.instances;

  // Gray-code walk over every assignment; tau occupies the first n0 bits.
  oracle::Bits q(n, 0);
  std::vector<double> field(n, 0.0);
  double e = inst.offset;
  std::size_t weight = 0;
  double ground = e;
  auto visit = [&]() {
    ground = std::min(ground, e);
    if (std::abs(e - (inst.e_sat + lambda * static_cast<double>(weight))) > 1e-7) return;
    ++t.satisfied;
    oracle::Bits tau(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(n0));
    oracle::Bits xp(n0);
    for (std::size_t j = 0; j < n0; ++j) xp[j] = x[j] ^ tau[j];
    if (!(static_cast<int>(weight) <= eps && oracle::forward(m, xp) != label)) ++t.unsound;
  };
  visit();
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    const auto i = static_cast<std::size_t>(__builtin_ctzll(k));
    const double d = inst.q(i, i) + 2.0 * field[i];
    e += q[i] ? -d : d;
    q[i] ^= 1U;
    if (i < n0) {
      if (q[i]) ++weight; else --weight;
    }
    const double s = q[i] ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) field[j] += s * inst.q(j, i);
    }
    visit();
  }

  // every feasible perturbation, and the best floor reachable from them
  int best = -1;
  bool constructed_ok = true;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n0); ++c) {
    const auto tau = oracle::bits_of(c, n0);
    int h = 0;
    for (auto b : tau) h += b;
    if (h > eps) continue;
    oracle::Bits xp(n0);
    for (std::size_t j = 0; j < n0; ++j) xp[j] = x[j] ^ tau[j];
    if (oracle::forward(m, xp) == label) continue;
    const auto full = consistent_assignment(m, inst, tau);
    const double ef = oracle::energy(inst.q, inst.offset, full);
    if (std::abs(ef - (inst.e_sat + lambda * h)) > 1e-7) constructed_ok = false;
    if (best < 0 || h < best) best = h;
  }
  if (best >= 0) {
    ++t.feasible;
    if (!constructed_ok) ++t.floor_missed;
    if (std::abs(ground - (inst.e_sat + lambda * best)) > 1e-7) ++t.ground_mismatch;
  }
}

Outcome encoder_properties() {
  const std::vector<std::vector<std::size_t>> shapes = {{3, 1}, {7, 1}, {7, 3, 1}};
  EncoderTally t;
  for (int k = 0; k < 50; ++k) {
    Rng rng(4000 + static_cast<std::uint64_t>(k));
    const auto m = random_model(shapes[k % 3], rng);
    const auto x = random_bits(m.input_width(), rng);
    for (int eps : {1, 2, 4}) check_encoding(m, x, eps, t);
  }
  Outcome o;
  note(o, t.unsound == 0,
       std::to_string(t.satisfied) + " penalty-free assignments over " + std::to_string(t.instances) +
           " encodings, " + std::to_string(t.unsound) + " unsound");
  note(o, t.floor_missed == 0,
       std::to_string(t.feasible) + " feasible encodings, floor missed " + std::to_string(t.floor_missed));
  note(o, t.ground_mismatch == 0, "enumerated minimum off the floor " + std::to_string(t.ground_mismatch));
  return o;
}

// ---------------------------------------------------------------- 5

Outcome quadratization() {
  constexpr std::size_t vars = 5;
  std::size_t cases = 0, bad = 0;
  for (std::uint64_t mask = 0; mask < (1U << vars); ++mask) {
    const int deg = __builtin_popcountll(mask);
    if (deg != 3 && deg != 4) continue;
    Monomial mono;
    for (std::uint32_t v = 0; v < vars; ++v) {
      if ((mask >> v) & 1U) mono.push_back(v);
    }
    for (double c : {1.0, -1.0, 5.0, -5.0}) {
      ++cases;
      PseudoBoolPoly p;
      p.add_term(mono, c);
      VariableRegistry reg;
      for (std::size_t i = 0; i < vars; ++i) reg.add({});
      const auto out = quadratize(p, reg);
      const std::size_t total = reg.size();
      const std::size_t aux = total - vars;
      bool ok = out.degree() <= 2 && aux >= 1;
      double min_in = 1e300, min_out = 1e300;
      std::vector<double> best(std::size_t{1} << vars, 1e300);
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << total); ++code) {
        const auto b = oracle::bits_of(code, total);
        const std::uint64_t orig = code & ((1U << vars) - 1U);
        best[orig] = std::min(best[orig], out.evaluate(b));
      }
      std::vector<std::uint64_t> argmin_in, argmin_out;
      for (std::uint64_t x = 0; x < best.size(); ++x) {
        const double f = p.evaluate(oracle::bits_of(x, vars));
        ok = ok && std::abs(best[x] - f) < 1e-9;
        min_in = std::min(min_in, f);
        min_out = std::min(min_out, best[x]);
      }
      for (std::uint64_t x = 0; x < best.size(); ++x) {
        if (std::abs(p.evaluate(oracle::bits_of(x, vars)) - min_in) < 1e-9) argmin_in.push_back(x);
        if (std::abs(best[x] - min_out) < 1e-9) argmin_out.push_back(x);
      }
      ok = ok && argmin_in == argmin_out;
      if (!ok) ++bad;
    }
  }
  Outcome o;
  note(o, bad == 0, std::to_string(cases) + " monomials of degree 3 and 4, " + std::to_string(bad) + " broken");
  return o;
}

// ---------------------------------------------------------------- 6

QuantizedQubo striped_array(std::size_t n, Rng& rng) {
  QuantizedQubo qq;
  qq.n = n;
  qq.pinned = n - 1;
  qq.bits = 8;
  qq.magnitude.resize(n * n);
  qq.negative.resize(n * n);
  for (std::size_t c = 0; c < n * n; ++c) {
    qq.magnitude[c] = c % 2 ? 0U : qq.max_magnitude();
    qq.negative[c] = static_cast<std::uint8_t>(rng() >> 63);
  }
  return qq;
}

Outcome noise_fidelity() {
  Rng rng(6);
  const auto qq = striped_array(535, rng);
  const auto noise = NoiseModel::defaults(0.40, 0.90);
  const int mbits = 7;
  Outcome o;
  bool all = true;
  std::string worst;
  double worst_z = 0.0;
  for (double v : {0.40, 0.56, 0.65, 0.74, 0.90}) {
    BitSlicedArray a(qq);
    pseudo_read(a, noise, v, rng);
    std::uint64_t ones = 0, zeros = 0, f10 = 0, f01 = 0;
    for (std::size_t c = 0; c < a.cells(); ++c) {
      for (int b = 0; b < mbits; ++b) {
        const bool was = (qq.magnitude[c] >> b) & 1U;
        const bool now = a.bit(b, c / qq.n, c % qq.n);
        (was ? ones : zeros) += 1;
        if (was != now) (was ? f10 : f01) += 1;
      }
    }
    auto z = [](std::uint64_t k, std::uint64_t n, double p) {
      const double sd = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
      const double d = std::abs(static_cast<double>(k) - static_cast<double>(n) * p);
      return sd > 0.0 ? d / sd : (d == 0.0 ? 0.0 : 1e9);
    };
    const double z10 = z(f10, ones, noise.p10.at(v));
    const double z01 = z(f01, zeros, noise.p01.at(v));
    all = all && z10 <= 3.0 && z01 <= 3.0 && ones >= 1'000'000 && zeros >= 1'000'000;
    if (std::max(z10, z01) >= worst_z) {
      worst_z = std::max(z10, z01);
      worst = fmt("V=%.2f", v);
    }
  }
  note(o, all, "5 voltages x 1e6 bits per polarity, worst |z| " + fmt("%.2f", worst_z) + " at " + worst);

  // sign plane under a harsh read
  NoiseModel harsh{{0.5, 10.0, 0.01}, {0.5, 10.0, 0.01}};
  const auto big = striped_array(1000, rng);
  BitSlicedArray a(big);
  std::uint64_t reads = 0;
  bool intact = true;
  for (int k = 0; k < 10; ++k) {
    pseudo_read(a, harsh, 0.0, rng);
    intact = intact && a.sign_plane_intact();
    reads += a.cells();
  }
  note(o, intact && reads >= 10'000'000, std::to_string(reads) + " sign-bit reads, none flipped");
  return o;
}

// ---------------------------------------------------------------- 7

QuantizedQubo random_quantized(std::size_t problem, Rng& rng) {
  QuantizedQubo qq;
  qq.n = problem + 1;
  qq.pinned = problem;
  qq.bits = 8;
  qq.scale = 0.5 + uniform01(rng);
  qq.offset = uniform01(rng);
  qq.magnitude.assign(qq.n * qq.n, 0U);
  qq.negative.assign(qq.n * qq.n, 0U);
  for (std::size_t i = 0; i < qq.n; ++i) {
    for (std::size_t j = i + 1; j < qq.n; ++j) {
      const auto mag = static_cast<std::uint32_t>(rng() % 128);
      const auto neg = static_cast<std::uint8_t>(mag != 0 && (rng() >> 63));
      qq.magnitude[i * qq.n + j] = qq.magnitude[j * qq.n + i] = mag;
      qq.negative[i * qq.n + j] = qq.negative[j * qq.n + i] = neg;
    }
  }
  return qq;
}

Outcome noise_free_degeneracy() {
  Rng rng(7);
  NoiseModel mute = NoiseModel::defaults(0.40, 0.90);
  mute.p01.p_max = 0.0;
  mute.p10.p_max = 0.0;
  constexpr std::size_t sweeps = 12;
  std::size_t mismatches = 0, compared = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 39);
    const auto qq = random_quantized(n, rng);
    const auto init = random_bits(n, rng);
    const auto want = oracle::greedy_trajectory(qq, init, sweeps);
    for (std::size_t t = 1; t <= sweeps; ++t) {
      AnnealSchedule s;
      s.steps = t;
      const auto got = anneal(qq, s, mute, 1000 + static_cast<std::uint64_t>(k), init);
      ++compared;
      if (got.q != want[t - 1]) ++mismatches;
      if (t == sweeps) {
        for (std::size_t u = 0; u < sweeps; ++u) {
          if (std::abs(got.trace[u] - oracle::quantized_energy(qq, want[u])) > 1e-6) ++mismatches;
        }
      }
    }
  }
  Outcome o;
  note(o, mismatches == 0,
       "100 instances, " + std::to_string(compared) + " sweep states, " + std::to_string(mismatches) + " mismatches");
  return o;
}

// ---------------------------------------------------------------- 8

bool attack_exists(const BnnModel& m, const BitVector& x, int label, int eps) {
  const std::size_t n0 = x.size();
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n0); ++c) {
    if (__builtin_popcountll(c) > eps) continue;
    auto xp = x;
    for (std::size_t j = 0; j < n0; ++j) xp[j] ^= static_cast<std::uint8_t>((c >> j) & 1U);
    if (oracle::forward(m, xp) != label) return true;
  }
  return false;
}

Outcome solver_quality() {
  Outcome o;
  double worst_dcim = 1.0, worst_sa = 1.0;
  std::size_t nmin = ~std::size_t{0}, nmax = 0;
  bool attacks_ok = true;
  int with_attack = 0;
  const int eps_set[] = {1, 2, 4};
  std::string rows;
  for (int k = 0; k < 6; ++k) {
    Rng rng(8000 + static_cast<std::uint64_t>(k));
    const auto m = random_model({7, 3, 1}, rng);
    const auto x = random_bits(7, rng);
    const int label = m.forward(x);
    const int eps = eps_set[k % 3];
    auto inst = encode(m, x, label, {.epsilon = eps});
    nmin = std::min(nmin, inst.size());
    nmax = std::max(nmax, inst.size());
    const auto g = oracle::ground_state(inst.q, inst.offset);
    inst.e_min = g.energy;

    SolverConfig solver;
    solver.solvers = {SolverKind::dcim, SolverKind::sa};
    solver.dcim.precision_bits = 0;
    CampaignConfig cfg;
    cfg.samples = 200;
    cfg.master_seed = 808 + static_cast<std::uint64_t>(k);
    const auto res = run_campaign(inst, m, solver, cfg);
    audit(res.report, "quality " + std::to_string(k));

    const auto& d = res.report.per_solver.at(SolverKind::dcim);
    const auto& s = res.report.per_solver.at(SolverKind::sa);
    worst_dcim = std::min(worst_dcim, static_cast<double>(d.good) / 200.0);
    worst_sa = std::min(worst_sa, static_cast<double>(s.good) / 200.0);
    if (attack_exists(m, x, label, eps)) {
      ++with_attack;
      attacks_ok = attacks_ok && d.attacks >= 1 && s.attacks >= 1;
    }
    rows += (rows.empty() ? "" : " ") + std::to_string(d.good) + "/" + std::to_string(s.good);
  }
  note(o, worst_dcim >= 0.9 && worst_sa >= 0.9,
       "N " + std::to_string(nmin) + ".." + std::to_string(nmax) + ", good dcim/sa per instance " + rows +
           " of 200 (need 180)");
  note(o, attacks_ok, std::to_string(with_attack) + " attackable instances, both solvers found attacks");
  return o;
}

// ---------------------------------------------------------------- 9

Outcome quantization_study() {
  // deep narrow network: coefficient range fits an 8-bit array
  Rng rng(9);
  std::vector<std::size_t> arch(15, 7);
  arch.push_back(1);
  const auto m = random_model(arch, rng);
  const auto x = random_bits(7, rng);
  const auto inst = encode(m, x, m.forward(x), {.epsilon = 2});

  std::map<int, SolverSummary> by_bits;
  for (int bits : {8, 0}) {
    SolverConfig solver;
    solver.dcim.precision_bits = bits;
    solver.dcim.schedule.steps = 200;
    CampaignConfig cfg;
    cfg.samples = 2000;
    cfg.master_seed = 909;
    const auto res = run_campaign(inst, m, solver, cfg);
    audit(res.report, "quantization " + std::to_string(bits));
    by_bits[bits] = res.report.per_solver.at(SolverKind::dcim);
  }
  const auto& q8 = by_bits[8];
  const auto& full = by_bits[0];
  const double gap = std::abs(q8.mean_energy - full.mean_energy) / std::abs(full.mean_energy);
  Outcome o;
  note(o, inst.size() >= 300, "N " + std::to_string(inst.size()));
  note(o, gap <= 0.10,
       "mean 8-bit " + fmt("%.1f", q8.mean_energy) + " vs full " + fmt("%.1f", full.mean_energy) + ", gap " +
           fmt("%.1f", 100.0 * gap) + "%");
  note(o, q8.energy_variance >= full.energy_variance,
       "variance 8-bit " + fmt("%.4g", q8.energy_variance) + " vs full " + fmt("%.4g", full.energy_variance));
  return o;
}

// ---------------------------------------------------------------- 10

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "timing.csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

Outcome pipeline_accounting() {
  Rng rng(10);
  const auto m = random_model({15, 3, 1}, rng);
  const auto x = random_bits(15, rng);
  const auto inst = encode(m, x, m.forward(x), {.epsilon = 4});
  SolverConfig solver;
  solver.solvers = {SolverKind::dcim, SolverKind::sa};
  solver.dcim.schedule.steps = 300;
  solver.sa.sweeps = 300;

  const fs::path root = fs::temp_directory_path() / "bnnv-acceptance";
  fs::remove_all(root);
  std::vector<std::map<std::string, std::string>> outputs;
  std::vector<std::string> labels;
  for (int threads : {1, 1, 4, 16}) {
    CampaignConfig cfg;
    cfg.samples = 32;
    cfg.master_seed = 1010;
    cfg.threads = threads;
    const auto res = run_campaign(inst, m, solver, cfg);
    audit(res.report, "determinism t" + std::to_string(threads));
    const fs::path dir = root / ("run" + std::to_string(outputs.size()));
    write_campaign(dir, inst, res, R"({"master_seed":1010})");
    outputs.push_back(snapshot(dir));
    labels.push_back(std::to_string(threads));
  }
  fs::remove_all(root);
  bool same = !outputs.front().empty();
  for (const auto& o : outputs) same = same && o == outputs.front();

  Outcome o;
  note(o, same,
       std::to_string(outputs.front().size()) + " output files identical across rerun and 1/4/16 threads");
  note(o, accounting_failures.empty(),
       "identities held on " + std::to_string(campaigns_checked) + " campaigns" +
           (accounting_failures.empty() ? "" : ", broken: " + accounting_failures.front()));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> suite = {
      {1, "PPA arithmetic", ppa_arithmetic},
      {2, "transform exactness", transform_exactness},
      {3, "pinned embedding", pinned_embedding},
      {4, "encoder soundness and completeness", encoder_properties},
      {5, "quadratization", quadratization},
      {6, "noise model fidelity", noise_fidelity},
      {7, "noise-free degeneracy", noise_free_degeneracy},
      {8, "solver quality at desk scale", solver_quality},
      {9, "quantization study", quantization_study},
      {10, "pipeline accounting", pipeline_accounting},
  };
  // optional arguments pick criteria by number
  std::vector<int> picked;
  for (int a = 1; a < argc; ++a) picked.push_back(std::atoi(argv[a]));
  int failed = 0;
  for (const auto& c : suite) {
    if (!picked.empty() && std::find(picked.begin(), picked.end(), c.id) == picked.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail << " ("
              << fmt("%.1f", secs) << " s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

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

#include <catch_amalgamated.hpp>

#include <numeric>

#include "bnnv/dcim.hpp"
#include "oracles.hpp"

using namespace bnnv;

namespace {

/// Integer QUBO whose pinned embedding is already on the 8-bit grid.
SquareMatrix grid_qubo(std::size_t n, Rng& rng) {
  SquareMatrix q(n);
  for (std::size_t i = 0; i < n; ++i) {
    q(i, i) = 2.0 * (static_cast<double>(rng() % 255) - 127.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      q(i, j) = q(j, i) = static_cast<double>(rng() % 255) - 127.0;
    }
  }
  q(0, 1) = q(1, 0) = 127.0;
  return q;
}

QuantizedQubo random_array(std::size_t n, int bits, Rng& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  SquareMatrix q(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) q(i, j) = q(j, i) = u(rng);
  }
  return quantize(pin_embed(q, 0.0), bits);
}

std::vector<std::size_t> ascending(std::size_t n) {
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), std::size_t{0});
  return o;
}

}  // namespace

TEST_CASE("sigmoid noise curve", "[dcim]") {
  const SigmoidCurve c{0.08, 0.65, 0.025};
  CHECK(c.at(0.65) == Catch::Approx(0.04));
  CHECK(c.at(0.40) <= 0.08);
  CHECK(c.at(0.40) > c.at(0.90));
  const auto d = NoiseModel::defaults(0.4, 0.9);
  CHECK(d.p10.p_max == 0.08);
  CHECK(d.p01.p_max == 0.03);
  CHECK(d.p01.v_th == Catch::Approx(0.65));
  CHECK(d.p10.width == Catch::Approx(0.025));
  double prev = 1.0;
  for (double v = 0.4; v <= 0.9; v += 0.01) {
    REQUIRE(d.p10.at(v) <= prev);
    prev = d.p10.at(v);
  }
}

TEST_CASE("silent pseudo-read leaves the array alone", "[dcim]") {
  Rng rng(1);
  BitSlicedArray a(random_array(20, 8, rng));
  const auto before = a.effective_hash();
  CHECK(pseudo_read(a, NoiseModel::silent(), 0.4, rng) == 0);
  CHECK(a.effective_hash() == before);
  CHECK(a.matches_nominal());
}

TEST_CASE("empirical flip rates match the configured curves", "[dcim][statistical]") {
  Rng rng(42);
  // 378 x 378 cells x 7 magnitude bits ~ 1e6 bits
  BitSlicedArray a(random_array(377, 8, rng));
  NoiseModel noise{{0.03, 0.6, 0.05}, {0.08, 0.6, 0.05}};
  for (double v : {0.45, 0.6, 0.75}) {
    a.refresh();
    std::size_t ones = 0, zeros = 0;
    for (std::size_t c = 0; c < a.cells(); ++c) {
      for (int b = 0; b < a.magnitude_bits(); ++b) {
        (a.bit(b, c / a.dim(), c % a.dim()) ? ones : zeros)++;
      }
    }
    pseudo_read(a, noise, v, rng);
    std::size_t f10 = 0, f01 = 0;
    for (std::size_t c = 0; c < a.cells(); ++c) {
      const auto was = a.nominal().magnitude[c];
      for (int b = 0; b < a.magnitude_bits(); ++b) {
        const bool before = (was >> b) & 1U;
        const bool after = a.bit(b, c / a.dim(), c % a.dim());
        if (before && !after) ++f10;
        if (!before && after) ++f01;
      }
    }
    const double p1 = noise.p10.at(v), p0 = noise.p01.at(v);
    const double s1 = std::sqrt(ones * p1 * (1 - p1)), s0 = std::sqrt(zeros * p0 * (1 - p0));
    CHECK(std::abs(static_cast<double>(f10) - ones * p1) <= 3 * s1);
    CHECK(std::abs(static_cast<double>(f01) - zeros * p0) <= 3 * s0);
    CHECK(a.sign_plane_intact());
  }
}

TEST_CASE("flip rate per pseudo-read falls along the voltage ramp", "[dcim][statistical]") {
  Rng rng(8);
  BitSlicedArray a(random_array(200, 8, rng));
  const auto noise = NoiseModel::defaults(0.4, 0.9);
  std::size_t prev = SIZE_MAX;
  for (double v = 0.40; v <= 0.901; v += 0.05) {
    a.refresh();
    const auto flips = pseudo_read(a, noise, v, rng);
    // allow binomial jitter where the curve is flat
    REQUIRE(static_cast<double>(flips) <= static_cast<double>(prev) + 4.0 * std::sqrt(static_cast<double>(prev)) + 4.0);
    prev = flips;
  }
}

TEST_CASE("refresh restores the golden copy", "[dcim]") {
  Rng rng(3);
  BitSlicedArray a(random_array(30, 8, rng));
  const auto noise = NoiseModel::defaults(0.4, 0.9);
  for (int k = 0; k < 5; ++k) pseudo_read(a, noise, 0.4, rng);
  CHECK_FALSE(a.matches_nominal());
  CHECK(a.sign_plane_intact());
  refresh(a);
  CHECK(a.effective_hash() == a.nominal_hash());
  refresh(a);
  CHECK(a.effective_hash() == a.nominal_hash());

  // drift after a refresh starts from nominal, not from earlier drift
  BitSlicedArray fresh(a.nominal());
  for (int k = 0; k < 3; ++k) pseudo_read(a, noise, 0.5, rng);
  refresh(a);
  Rng r1(77), r2(77);
  pseudo_read(a, noise, 0.5, r1);
  pseudo_read(fresh, noise, 0.5, r2);
  CHECK(a.effective_hash() == fresh.effective_hash());
}

TEST_CASE("sign plane survives 1e7 perturbed reads", "[dcim]") {
  Rng rng(10);
  // 1e7 bit reads: 100 pseudo-reads over 378^2 cells x 7 planes
  BitSlicedArray a(random_array(377, 8, rng));
  NoiseModel worst{{1.0, 10.0, 1.0}, {1.0, 10.0, 1.0}};
  std::size_t reads = 0;
  for (int k = 0; k < 10; ++k) {
    reads += a.cells() * static_cast<std::size_t>(a.magnitude_bits());
    pseudo_read(a, worst, 0.0, rng);
    REQUIRE(a.sign_plane_intact());
  }
  CHECK(reads >= 10'000'000);
}

TEST_CASE("two-variable greedy fixed point", "[dcim]") {
  SquareMatrix q(2);
  q(0, 0) = -1;
  q(1, 1) = -1;
  q(0, 1) = q(1, 0) = 1.5;
  const auto qq = quantize_exact(pin_embed(q, 0.0));
  BitSlicedArray a(qq);
  BitVector x{0, 0};
  Rng rng(0);
  const auto order = ascending(2);
  // q0: row sum -0.5 -> flip; q1: -0.5 + 1.5 > 0 -> stay
  CHECK(sweep(a, x, order, nullptr, 0.9, rng) == 1);
  CHECK(x == BitVector{1, 0});
  CHECK(sweep(a, x, order, nullptr, 0.9, rng) == 0);
  CHECK(x == BitVector{1, 0});
}

TEST_CASE("zero matrix never moves", "[dcim]") {
  const auto qq = quantize(pin_embed(SquareMatrix(5), 0.0), 8);
  BitSlicedArray a(qq);
  Rng rng(1);
  BitVector x{1, 0, 1, 1, 0};
  const auto before = x;
  sweep(a, x, ascending(5), nullptr, 0.5, rng);
  CHECK(x == before);
}

TEST_CASE("noise-free anneal equals sequential greedy descent", "[dcim]") {
  Rng rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    const auto qq = random_array(12, 8, rng);
    const auto x0 = random_bits(12, rng);
    AnnealSchedule s;
    s.steps = 15;
    const auto res = anneal(qq, s, NoiseModel::silent(), 5, x0);
    const auto ref = oracle::greedy_trajectory(qq, x0, 15);
    CHECK(res.q == ref.back());
    for (std::size_t t = 0; t < 15; ++t) {
      REQUIRE(res.trace[t] == Catch::Approx(oracle::quantized_energy(qq, ref[t])).margin(1e-9));
      if (t) REQUIRE(res.trace[t] <= res.trace[t - 1] + 1e-12);
    }
  }
}

TEST_CASE("incremental row sums track the MAC under noise", "[dcim]") {
  Rng rng(33);
  const auto qq = random_array(16, 8, rng);
  const auto x0 = random_bits(16, rng);
  const auto noise = NoiseModel::defaults(0.4, 0.9);
  DcimAnnealer engine(qq, x0);
  BitSlicedArray array(qq);
  BitVector x = x0;
  Rng r1(5), r2(5);
  const auto order = ascending(16);
  for (int t = 0; t < 30; ++t) {
    if (t % 7 == 0) {
      engine.refresh();
      array.refresh();
    }
    const double v = 0.4 + 0.015 * t;
    engine.sweep(order, &noise, v, r1);
    sweep(array, x, order, &noise, v, r2);
    REQUIRE(engine.state() == x);
    REQUIRE(engine.array().effective_hash() == array.effective_hash());
    REQUIRE(engine.nominal_energy() == Catch::Approx(oracle::quantized_energy(qq, x)).margin(1e-9));
  }
}

TEST_CASE("anneal is deterministic and records nominal energies", "[dcim]") {
  Rng rng(2);
  const auto qq = random_array(24, 8, rng);
  AnnealSchedule s;
  s.steps = 200;
  const auto noise = NoiseModel::defaults(s.v_start, s.v_end);
  const auto a = anneal(qq, s, noise, 99);
  const auto b = anneal(qq, s, noise, 99);
  CHECK(a == b);
  CHECK(a.trace.size() == 200);
  CHECK(a.sweeps == 200);
  CHECK(a.energy == Catch::Approx(oracle::quantized_energy(qq, a.q)).margin(1e-9));
  CHECK(a.trace.back() == a.energy);
  s.order = ScanOrder::permuted;
  s.granularity = NoiseGranularity::spin;
  CHECK(anneal(qq, s, noise, 4) == anneal(qq, s, noise, 4));
  AnnealSchedule bad;
  bad.v_start = 1.0;
  CHECK_THROWS(anneal(qq, bad, noise, 1));
}

TEST_CASE("default schedule finds the 8-variable ground state band", "[dcim][statistical]") {
  Rng rng(808);
  const auto q = grid_qubo(8, rng);
  const auto qq = quantize(pin_embed(q, 0.0), 8);
  REQUIRE(qq.scale == 1.0);
  const auto g = oracle::ground_state(q, 0.0);
  const double cutoff = g.energy + 0.05 * std::abs(g.energy);
  const AnnealSchedule s;
  const auto noise = NoiseModel::defaults(s.v_start, s.v_end);
  int good = 0;
  for (std::uint64_t r = 0; r < 200; ++r) {
    good += anneal(qq, s, noise, derive_seed(1, r)).energy <= cutoff;
  }
  CHECK(good >= 190);
}

// Copyright 2026 The fdtrinicon Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "fdtrinicon/activity.hpp"
#include "fdtrinicon/error.hpp"
#include "test_util.hpp"

using namespace fdtrinicon;

namespace {

std::vector<BlockSpectra> random_blocks(std::size_t count, std::size_t bins,
                                        std::uint64_t seed, double sigma = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<BlockSpectra> out(count);
  for (auto& b : out)
    for (auto& ch : b) {
      ch.resize(bins);
      for (auto& v : ch) v = {g(rng), g(rng)};
    }
  return out;
}

BlockPowers powers_of(std::vector<double> ex, std::vector<double> e1,
                      std::vector<double> e2) {
  BlockPowers p;
  p.ex = std::move(ex);
  p.ey1 = std::move(e1);
  p.ey2 = std::move(e2);
  return p;
}

DetectorConfig small_cfg() {
  DetectorConfig c;
  c.k_lo = 1;
  c.k_hi = 8;
  return c;
}

}  // namespace

TEST_SUITE("activity") {

TEST_CASE("block powers on zero and single-bin input") {
  auto zero = random_blocks(3, 9, 1, 0.0);
  const auto p = block_powers(zero, zero, 1, 8);
  for (std::size_t m = 0; m < 3; ++m) {
    CHECK(p.ex[m] == 0.0);
    CHECK(p.ey1[m] == 0.0);
    CHECK(p.ey2[m] == 0.0);
  }
  auto x = zero;
  x[0][0][4] = {0.0, 2.0};
  const auto q = block_powers(x, zero, 4, 4);
  CHECK(q.ex[0] == doctest::Approx(2.0));
}

TEST_CASE("block powers match a brute-force sum") {
  const auto x = random_blocks(5, 33, 2);
  const auto y = random_blocks(5, 33, 3, 0.5);
  const std::size_t lo = 3, hi = 20;
  const auto p = block_powers(x, y, lo, hi);
  for (std::size_t m = 0; m < 5; ++m) {
    double sx = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t k = lo; k <= hi; ++k)
        sx += std::pow(std::abs(x[m][c][k]), 2);
    for (std::size_t k = lo; k <= hi; ++k) {
      s1 += std::pow(std::abs(y[m][0][k]), 2);
      s2 += std::pow(std::abs(y[m][1][k]), 2);
    }
    const double w = static_cast<double>(hi - lo + 1);
    CHECK(p.ex[m] == doctest::Approx(sx / (2 * w)).epsilon(1e-12));
    CHECK(p.ey1[m] == doctest::Approx(s1 / w).epsilon(1e-12));
    CHECK(p.ey2[m] == doctest::Approx(s2 / w).epsilon(1e-12));
    CHECK(p.ex[m] >= 0.0);
  }
}

TEST_CASE("block powers reject bad ranges") {
  const auto x = random_blocks(2, 9, 4);
  const auto y = random_blocks(3, 9, 5);
  CHECK_THROWS_AS(block_powers(x, y, 1, 4), InvalidArgument);
  CHECK_THROWS_AS(block_powers(x, x, 5, 4), InvalidArgument);
  CHECK_THROWS_AS(block_powers(x, x, 1, 9), InvalidArgument);
}

TEST_CASE("noise floor of a constant sequence") {
  const std::vector<double> ex(40, 0.37);
  for (std::size_t win : {1u, 7u, 40u}) {
    const auto f = estimate_noise_floor(ex, win);
    for (double v : f) CHECK(v == doctest::Approx(1.5 * 0.37).epsilon(1e-12));
  }
  CHECK_THROWS_AS(estimate_noise_floor(std::vector<double>(9, 1.0), 4), InvalidArgument);
  const auto z = estimate_noise_floor(std::vector<double>(12, 0.0), 4);
  for (double v : z) CHECK(v == 1e-12);
}

TEST_CASE("noise floor window stays inside the signal") {
  // Quiet only at the very end: a signal-length window must still find it
  // from the first block.
  std::vector<double> ex(100, 1.0);
  for (std::size_t m = 90; m < 100; ++m) ex[m] = 0.01;
  const auto whole = estimate_noise_floor(ex, 100, 0.0);
  for (double v : whole) CHECK(v == doctest::Approx(0.015));
  const auto part = estimate_noise_floor(ex, 20, 0.0);
  CHECK(part[0] == doctest::Approx(1.5));
  CHECK(part[85] == doctest::Approx(0.015));
  CHECK(part[99] == doctest::Approx(0.015));
}

TEST_CASE("noise floor is homogeneous") {
  std::mt19937_64 rng(6);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> ex(200);
  for (double& v : ex) v = e(rng);
  const auto a = estimate_noise_floor(ex, 50);
  for (double gamma : {1e-3, 7.5}) {
    std::vector<double> s = ex;
    for (double& v : s) v *= gamma;
    const auto b = estimate_noise_floor(s, 50);
    for (std::size_t m = 0; m < ex.size(); ++m)
      CHECK(b[m] == doctest::Approx(gamma * a[m]).epsilon(1e-12));
  }
}

TEST_CASE("noise floor of speech over noise brackets the noise power") {
  // Each E_x value averages many squared bins, so noise-only blocks
  // scatter mildly around p; speech bursts sit well above it.
  const double p = 2e-3;
  std::mt19937_64 rng(7);
  std::gamma_distribution<double> chi(200.0, 1.0 / 200.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> ex(1500);
  for (std::size_t m = 0; m < ex.size(); ++m) {
    const bool speech = (m / 60) % 3 != 0;
    ex[m] = p * chi(rng) + (speech ? 50.0 * p * (0.2 + u(rng)) : 0.0);
  }
  for (std::size_t win : {375u, 1500u}) {
    const auto f = estimate_noise_floor(ex, win);
    for (double v : f) {
      CHECK(v >= p);
      CHECK(v <= 3.0 * p);
    }
  }
}

TEST_CASE("classification rules") {
  DetectorConfig c = small_cfg();
  const double en = 0.1;
  const std::vector<double> floor(4, en);
  const auto p = powers_of({0.5 * c.alpha * en, 1.0, 1.0, 1.0},
                           {0.0, 0.1, 0.6, 0.9},
                           {0.0, 0.9, 0.7, 0.1});
  const auto l = classify_blocks(p, floor, c);
  REQUIRE(l.size() == 4);
  CHECK(l[0] == Label{0, 0});
  CHECK(l[1] == Label{1, 0});
  CHECK(l[2] == Label{1, 1});
  CHECK(l[3] == Label{0, 1});
  // Both outputs suppressed is not a single-source decision.
  const auto both = classify_blocks(powers_of({1.0}, {0.1}, {0.1}), std::vector<double>{en}, c);
  CHECK(both[0] == Label{1, 1});
  // Confident mode tightens the ratio.
  const auto mid = powers_of({1.0}, {0.2}, {0.9});
  CHECK(classify_blocks(mid, std::vector<double>{en}, c)[0] == Label{1, 0});
  c.confident = true;
  CHECK(classify_blocks(mid, std::vector<double>{en}, c)[0] == Label{1, 1});
}

TEST_CASE("classification is scale invariant") {
  std::mt19937_64 rng(8);
  std::exponential_distribution<double> e(1.0);
  const std::size_t n = 300;
  BlockPowers p;
  std::vector<double> floor(n);
  for (std::size_t m = 0; m < n; ++m) {
    p.ex.push_back(e(rng));
    p.ey1.push_back(e(rng) * p.ex.back() * 0.5);
    p.ey2.push_back(e(rng) * p.ex.back() * 0.5);
    floor[m] = 0.3 * e(rng);
  }
  const auto c = small_cfg();
  const auto base = classify_blocks(p, floor, c);
  for (double gamma : {1e-6, 0.5, 3e4}) {
    BlockPowers s = p;
    std::vector<double> f = floor;
    for (std::size_t m = 0; m < n; ++m) {
      s.ex[m] *= gamma;
      s.ey1[m] *= gamma;
      s.ey2[m] *= gamma;
      f[m] *= gamma;
    }
    CHECK(classify_blocks(s, f, c) == base);
  }
  for (const auto& l : base) {
    CHECK(l[0] <= 1);
    CHECK(l[1] <= 1);
  }
}

TEST_CASE("weight matrices") {
  const auto b = build_weight_matrices({{1, 0}, {0, 0}, {1, 1}, {0, 1}}, 4);
  CHECK(b[0][0] == 0.25);
  CHECK(b[0][1] == 0.0);
  CHECK(b[1][0] == 0.0);
  CHECK(b[1][1] == 0.0);

  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.4);
  const std::size_t n = 97;
  ActivityLabels labels(n);
  std::size_t n1 = 0, n2 = 0;
  for (auto& l : labels) {
    l = {static_cast<std::uint8_t>(coin(rng)), static_cast<std::uint8_t>(coin(rng))};
    n1 += l[0];
    n2 += l[1];
  }
  const auto w = build_weight_matrices(labels, n);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& d : w) {
    for (double v : d) CHECK((v == 0.0 || v == 1.0 / n));
    s1 += d[0];
    s2 += d[1];
  }
  CHECK(s1 == doctest::Approx(static_cast<double>(n1) / n).epsilon(1e-12));
  CHECK(s2 == doctest::Approx(static_cast<double>(n2) / n).epsilon(1e-12));

  const auto r = build_weight_matrices(labels, n, true);
  double r1 = 0.0;
  for (const auto& d : r) r1 += d[0];
  CHECK(r1 == doctest::Approx(1.0));
  CHECK_THROWS_AS(build_weight_matrices(labels, n + 1), InvalidArgument);
}

TEST_CASE("detector band defaults and validation") {
  const auto c = DetectorConfig::for_band(16000.0, 512);
  // Bin spacing fs / 4L = 7.8125 Hz.
  CHECK(c.k_lo == 26);
  CHECK(c.k_hi == 896);
  CHECK_NOTHROW(c.validate(512));
  CHECK(c.alpha == 3.0);
  CHECK(c.rho == 0.25);
  CHECK(c.rho_confident == 0.15);

  DetectorConfig bad = c;
  bad.k_lo = 0;
  CHECK_THROWS_AS(bad.validate(512), InvalidArgument);
  bad = c;
  bad.k_hi = 1025;
  CHECK_THROWS_AS(bad.validate(512), InvalidArgument);
  bad = c;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(bad.validate(512), InvalidArgument);
  bad = c;
  bad.rho_confident = 0.3;
  CHECK_THROWS_AS(bad.validate(512), InvalidArgument);
  bad = c;
  bad.rho = 1.0;
  CHECK_THROWS_AS(bad.validate(512), InvalidArgument);
}

TEST_CASE("detection on constructed block spectra") {
  // Source 1 alone, source 2 alone, both, silence; output p suppresses
  // source p.
  const std::size_t bins = 33, per = 20;
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 1.0);
  auto draw = [&](double s) { return Complex{s * g(rng), s * g(rng)}; };
  std::vector<BlockSpectra> x, y;
  ActivityLabels truth;
  const std::array<Label, 4> states{Label{1, 0}, Label{0, 1}, Label{1, 1}, Label{0, 0}};
  for (int rep = 0; rep < 3; ++rep)
    for (const auto& st : states)
      for (std::size_t b = 0; b < per; ++b) {
        BlockSpectra xb, yb;
        for (auto& ch : xb) ch.assign(bins, {});
        for (auto& ch : yb) ch.assign(bins, {});
        for (std::size_t k = 0; k < bins; ++k) {
          const Complex s1 = st[0] ? draw(1.0) : Complex{};
          const Complex s2 = st[1] ? draw(1.0) : Complex{};
          const Complex n0 = draw(0.01), n1 = draw(0.01);
          xb[0][k] = s1 + 0.5 * s2 + n0;
          xb[1][k] = 0.5 * s1 + s2 + n1;
          yb[0][k] = s2 + 0.05 * s1 + n0;
          yb[1][k] = s1 + 0.05 * s2 + n1;
        }
        x.push_back(std::move(xb));
        y.push_back(std::move(yb));
        truth.push_back(st);
      }
  DetectorConfig c = small_cfg();
  c.k_hi = 32;
  const auto labels = detect_activity(x, y, c, 16000.0, 16);
  CHECK(labels == truth);
}

TEST_CASE("label csv round trip") {
  testutil::TempDir dir("labels");
  const ActivityLabels l{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  save_labels_csv(dir / "labels.csv", l);
  CHECK(load_labels_csv(dir / "labels.csv") == l);
  std::ifstream in(dir / "labels.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "block,eps1,eps2");
}

}  // TEST_SUITE

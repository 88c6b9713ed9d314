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
#include <numbers>

#include "doctest.h"
#include "fdtrinicon/error.hpp"
#include "fdtrinicon/filter_io.hpp"
#include "fdtrinicon/trinicon.hpp"
#include "test_util.hpp"

using namespace fdtrinicon;

namespace {

DemixingFilter random_filter(std::size_t len, std::uint64_t seed) {
  DemixingFilter f(len);
  for (std::size_t pq = 0; pq < 4; ++pq) {
    const auto t = testutil::white(len, seed * 4 + pq);
    std::copy(t.begin(), t.end(), f.w(pq / 2, pq % 2).begin());
  }
  return f;
}

// y_q = sum_p w_pq * x_p, truncated to the input length.
std::array<std::vector<double>, 2> direct_demix(const DemixingFilter& f,
                                                const MultichannelSignal& x) {
  std::array<std::vector<double>, 2> y;
  for (std::size_t q = 0; q < 2; ++q) {
    y[q].assign(x.num_samples(), 0.0);
    for (std::size_t p = 0; p < 2; ++p) {
      const auto c = testutil::direct_convolve(x.channel(p), f.w(p, q));
      for (std::size_t n = 0; n < y[q].size(); ++n) y[q][n] += c[n];
    }
  }
  return y;
}

MultichannelSignal mixed_noise(std::size_t n, std::uint64_t seed, double a12, double a21) {
  const auto s1 = testutil::white(n, seed);
  const auto s2 = testutil::white(n, seed + 1000);
  std::vector<double> x1(n), x2(n);
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = s1[i] + a12 * s2[i];
    x2[i] = a21 * s1[i] + s2[i];
  }
  return MultichannelSignal({x1, x2});
}

}  // namespace

TEST_SUITE("trinicon") {

TEST_CASE("init filters") {
  const auto f = init_filters(512, 10);
  CHECK(f.length() == 512);
  CHECK(f.init_shift() == 10);
  for (std::size_t n = 0; n < 512; ++n) {
    CHECK(f.w(0, 0)[n] == (n == 10 ? 1.0 : 0.0));
    CHECK(f.w(1, 1)[n] == (n == 10 ? 1.0 : 0.0));
    CHECK(f.w(0, 1)[n] == 0.0);
    CHECK(f.w(1, 0)[n] == 0.0);
  }
  CHECK_THROWS_AS(init_filters(16, 16), InvalidArgument);
  // Maximum inter-mic delay for 10 cm at 16 kHz stays below the default shift.
  CHECK(0.1 / 343.0 * 16000.0 < 10.0);
}

TEST_CASE("identity and delay filters") {
  const auto x = mixed_noise(1000, 1, 0.3, 0.2);
  const auto y0 = forward_filter(init_filters(16, 0), x);
  CHECK(testutil::rel_err(y0.channel(0), x.channel(0)) < 1e-12);
  CHECK(testutil::rel_err(y0.channel(1), x.channel(1)) < 1e-12);
  const auto y10 = forward_filter(init_filters(16, 10), x);
  for (std::size_t n = 10; n < 1000; ++n) {
    CHECK(y10(0, n) == doctest::Approx(x(0, n - 10)).epsilon(1e-12));
    CHECK(y10(1, n) == doctest::Approx(x(1, n - 10)).epsilon(1e-12));
  }
}

TEST_CASE("overlap-save equals direct convolution") {
  for (std::size_t len : {16u, 512u}) {
    const auto f = random_filter(len, len);
    const auto x = mixed_noise(5 * len + 37, len + 1, 0.5, -0.25);
    const auto y = forward_filter(f, x);
    const auto ref = direct_demix(f, x);
    REQUIRE(y.num_samples() == x.num_samples());
    CHECK(testutil::rel_err(y.channel(0), ref[0]) < 1e-8);
    CHECK(testutil::rel_err(y.channel(1), ref[1]) < 1e-8);
  }
}

TEST_CASE("filtering is linear in the input") {
  const auto f = random_filter(32, 3);
  const auto x = mixed_noise(400, 4, 0.1, 0.1);
  auto scaled = x;
  for (std::size_t p = 0; p < 2; ++p)
    for (double& v : scaled.channel(p)) v *= -2.5;
  const auto a = forward_filter(f, x);
  const auto b = forward_filter(f, scaled);
  for (std::size_t n = 0; n < 400; ++n) CHECK(b(1, n) == doctest::Approx(-2.5 * a(1, n)));
}

TEST_CASE("psd of a single block") {
  BlockSpectra b{std::vector<Complex>{1.0}, std::vector<Complex>{0.0}};
  const std::vector<BlockSpectra> blocks{b};
  const std::vector<double> w{0.7};
  const auto psd = estimate_psd(blocks, w);
  CHECK(psd.weight_sum == 0.7);
  CHECK(psd.bins[0](0, 0) == Complex(0.7));
  CHECK(psd.bins[0](0, 1) == Complex(0.0));
  CHECK(psd.bins[0](1, 1) == Complex(0.0));
}

TEST_CASE("psd of two blocks with half weights is the identity") {
  const std::vector<BlockSpectra> blocks{
      {std::vector<Complex>{1.0}, std::vector<Complex>{1.0}},
      {std::vector<Complex>{1.0}, std::vector<Complex>{-1.0}}};
  const std::vector<double> w{0.5, 0.5};
  const auto phi = estimate_psd(blocks, w).bins[0];
  CHECK(std::abs(phi(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(phi(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(phi(0, 1)) < 1e-15);
  CHECK_THROWS_AS(estimate_psd(std::span<const BlockSpectra>{}, std::span<const double>{}),
                  InvalidArgument);
}

TEST_CASE("psd is hermitian with a real non-negative diagonal") {
  std::vector<BlockSpectra> blocks(5);
  std::vector<double> w(5);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (std::size_t i = 0; i < 5; ++i) {
    for (auto& ch : blocks[i]) {
      ch.resize(9);
      for (auto& v : ch) v = Complex(g(rng), g(rng));
    }
    w[i] = std::abs(g(rng));
  }
  for (const auto& phi : estimate_psd(blocks, w).bins) {
    CHECK((phi - phi.adjoint()).norm() < 1e-12 * phi.norm());
    CHECK(phi(0, 0).imag() == 0.0);
    CHECK(phi(0, 0).real() >= 0.0);
    CHECK(phi(1, 1).real() >= 0.0);
  }
}

TEST_CASE("natural gradient examples") {
  const Matrix2c eye = Matrix2c::Identity();
  Matrix2c diag = Matrix2c::Zero();
  diag(0, 0) = 3.0;
  diag(1, 1) = 0.5;
  CHECK(natural_gradient_bin(eye, diag).norm() == 0.0);

  Matrix2c phi;
  phi << 2.0, 1.0, 1.0, 2.0;
  const Matrix2c g = natural_gradient_bin(eye, phi);
  CHECK(std::abs(g(0, 0)) < 1e-15);
  CHECK(std::abs(g(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(g(1, 0) - 1.0) < 1e-15);
  CHECK(std::abs(g(1, 1)) < 1e-15);

  Matrix2c w;
  w << Complex(1, 2), Complex(0.5, -1), Complex(-0.3, 0.2), Complex(2, 0);
  const Matrix2c full = natural_gradient_bin(w, phi);
  const Matrix2c col0 = natural_gradient_bin(w, phi, Eigen::Vector2d(1.0, 0.0));
  CHECK((col0.col(0) - full.col(0)).norm() < 1e-15);
  CHECK(col0.col(1).norm() == 0.0);
}

TEST_CASE("gradient vanishes exactly when every bin is diagonal") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    Matrix2c w;
    w << Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng)),
        Complex(g(rng), g(rng));
    Matrix2c phi = Matrix2c::Zero();
    phi(0, 0) = 1.0 + std::abs(g(rng));
    phi(1, 1) = 1.0 + std::abs(g(rng));
    CHECK(natural_gradient_bin(w, phi).norm() == 0.0);
    phi(0, 1) = Complex(0.1, 0.05);
    phi(1, 0) = std::conj(phi(0, 1));
    CHECK(natural_gradient_bin(w, phi).norm() > 0.0);
  }
}

TEST_CASE("bin cost") {
  Matrix2c d = Matrix2c::Zero();
  d(0, 0) = 2.0;
  d(1, 1) = 2.0;
  CHECK(bin_cost(d) == 0.0);
  Matrix2c phi;
  phi << 2.0, 1.0, 1.0, 2.0;
  CHECK(bin_cost(phi) == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-14));
  CHECK(bin_cost(phi) == doctest::Approx(0.2877).epsilon(1e-4));
  Matrix2c swapped;
  swapped << phi(1, 1), phi(1, 0), phi(0, 1), phi(0, 0);
  CHECK(bin_cost(swapped) == bin_cost(phi));
  Matrix2c singular;
  singular << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(bin_cost(singular), NumericalError);
}

TEST_CASE("cost counts half-spectrum interior bins twice") {
  const auto x = mixed_noise(2048, 9, 0.5, 0.5);
  const auto half = block_spectra(x, 16);
  std::vector<BlockSpectra> full(half.size());
  for (std::size_t m = 0; m < half.size(); ++m)
    for (std::size_t c = 0; c < 2; ++c) full[m][c] = expand_half_spectrum(half[m][c], 64);
  const std::vector<double> w(half.size(), 1.0 / static_cast<double>(half.size()));
  const double jh = cost(half, w, 8);
  const double jf = cost(full, w, 8);
  CHECK(jh > 0.0);
  CHECK(jh == doctest::Approx(jf).epsilon(1e-10));
}

TEST_CASE("constrain_filter keeps supported filters") {
  const auto f = random_filter(16, 7);
  const auto g = constrain_filter(filter_spectrum(f), 16);
  for (std::size_t pq = 0; pq < 4; ++pq)
    CHECK(testutil::rel_err(g.w(pq / 2, pq % 2), f.w(pq / 2, pq % 2)) < 1e-10);
}

TEST_CASE("constrain_filter removes the circular wrap region") {
  const std::size_t len = 8, n = 32;
  FilterSpectrum spec;
  for (std::size_t pq = 0; pq < 4; ++pq) {
    std::vector<double> t(n, 0.0);
    t[n - 1] = 1.0;
    spec[pq] = dft_block(t).bins;
  }
  const auto g = constrain_filter(spec, len);
  for (std::size_t pq = 0; pq < 4; ++pq)
    for (double v : g.w(pq / 2, pq % 2)) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("constrain_filter equals inverse transform plus truncation") {
  const std::size_t len = 16, n = 64;
  FilterSpectrum spec;
  std::array<std::vector<double>, 4> taps;
  for (std::size_t pq = 0; pq < 4; ++pq) {
    taps[pq] = testutil::white(n, 50 + pq);
    spec[pq] = testutil::naive_dft(taps[pq]);
  }
  const auto g = constrain_filter(spec, len);
  for (std::size_t pq = 0; pq < 4; ++pq) {
    const std::vector<double> want(taps[pq].begin(), taps[pq].begin() + len);
    CHECK(testutil::rel_err(g.w(pq / 2, pq % 2), want) < 1e-10);
  }
  const auto again = constrain_filter(filter_spectrum(g), len);
  for (std::size_t pq = 0; pq < 4; ++pq)
    CHECK(testutil::rel_err(again.w(pq / 2, pq % 2), g.w(pq / 2, pq % 2)) < 1e-12);
}

TEST_CASE("constrain_filter rejects a non-hermitian spectrum") {
  FilterSpectrum spec;
  for (auto& s : spec) s.assign(32, Complex(0.0));
  spec[0][3] = Complex(0.0, 1.0);
  CHECK_THROWS_AS(constrain_filter(spec, 8), NumericalError);
}

TEST_CASE("config validation") {
  TriniconConfig c;
  CHECK_NOTHROW(c.validate());
  c.mu = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.init_shift = c.filter_len;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.psd_window = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("zero step size keeps the initial filter") {
  const auto x = mixed_noise(4000, 2, 0.5, 0.5);
  TriniconConfig c;
  c.filter_len = 32;
  c.mu = 0.0;
  c.iterations = 5;
  c.early_stop_window = 0;
  const auto r = run_offline(x, c);
  const auto init = init_filters(32, 10);
  for (std::size_t pq = 0; pq < 4; ++pq) {
    const auto a = r.filter.w(pq / 2, pq % 2);
    const auto b = init.w(pq / 2, pq % 2);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
  CHECK(r.cost_trace.size() == 6);
  CHECK(r.cost_trace.front() == r.cost_trace.back());
}

TEST_CASE("independent inputs stay near the identity") {
  const auto x = mixed_noise(64000, 3, 0.0, 0.0);
  TriniconConfig c;
  c.filter_len = 64;
  c.init_shift = 0;
  c.mu = 0.01;
  c.iterations = 50;
  const auto r = run_offline(x, c);
  const auto eye = init_filters(64, 0);
  double worst = 0.0;
  for (std::size_t pq = 0; pq < 4; ++pq)
    for (std::size_t n = 0; n < 64; ++n)
      worst = std::max(worst, std::abs(r.filter.w(pq / 2, pq % 2)[n] - eye.w(pq / 2, pq % 2)[n]));
  CHECK(worst < 1e-2);
  for (double j : r.cost_trace) CHECK(j >= 0.0);
  // Only estimation noise remains: far below the cost of a mixed input.
  const auto mixed = run_offline(mixed_noise(64000, 3, 0.5, 0.5), c);
  CHECK(r.cost_trace.front() < 0.2 * mixed.cost_trace.front());
}

TEST_CASE("cost trace matches the public cost and decreases") {
  const auto x = mixed_noise(8000, 4, 0.6, 0.4);
  TriniconConfig c;
  c.filter_len = 32;
  c.iterations = 10;
  c.mu = 0.05;
  c.psd_window = 8;
  c.early_stop_window = 0;
  const auto r = run_offline(x, c);
  REQUIRE(r.cost_trace.size() == 11);
  const auto y = constrained_output_spectra(r.filter, block_spectra(x, 32));
  const std::vector<double> beta(y.size(), 1.0 / static_cast<double>(y.size()));
  CHECK(cost(y, beta, 8) == doctest::Approx(r.cost_trace.back()).epsilon(1e-9));
  CHECK(r.cost_trace.back() < r.cost_trace.front());
  CHECK(r.iterations == 10);
}

TEST_CASE("filters are real and hermitian in frequency after iterating") {
  const auto x = mixed_noise(4000, 5, 0.5, 0.5);
  TriniconConfig c;
  c.filter_len = 16;
  c.iterations = 3;
  const auto r = run_offline(x, c);
  const auto spec = filter_spectrum(r.filter);
  for (const auto& s : spec)
    for (std::size_t k = 1; k < 64; ++k) CHECK(std::abs(s[k] - std::conj(s[64 - k])) < 1e-12);
  CHECK(r.filter.all_finite());
}

TEST_CASE("uniform column weights reproduce the unweighted run bit for bit") {
  const auto x = mixed_noise(4000, 6, 0.5, 0.3);
  TriniconConfig c;
  c.filter_len = 16;
  c.iterations = 5;
  const auto a = run_offline(x, c);
  const std::size_t nblk = FrameParams::for_signal(4000, 16).num_blocks;
  const std::vector<ColumnWeights> w(nblk, {1.0 / nblk, 1.0 / nblk});
  const auto b = run_offline(x, c, std::span<const ColumnWeights>(w));
  CHECK(a.outputs.channels() == b.outputs.channels());
  CHECK(a.cost_trace == b.cost_trace);
}

TEST_CASE("zero-weight blocks do not move the filter") {
  const auto x = mixed_noise(4000, 7, 0.5, 0.3);
  TriniconConfig c;
  c.filter_len = 16;
  c.iterations = 4;
  c.psd_window = 1;
  c.early_stop_window = 0;
  const std::size_t nblk = FrameParams::for_signal(4000, 16).num_blocks;
  std::vector<ColumnWeights> w(nblk, {0.0, 0.0});
  const auto frozen = run_offline(x, c, std::span<const ColumnWeights>(w));
  const auto init = init_filters(16, 10);
  for (std::size_t pq = 0; pq < 4; ++pq) {
    const auto a = frozen.filter.w(pq / 2, pq % 2);
    CHECK(std::equal(a.begin(), a.end(), init.w(pq / 2, pq % 2).begin()));
  }
  // With a one-block PSD window, changing the data of a zero-weighted block
  // leaves the result untouched.
  for (std::size_t i = 0; i < nblk; ++i) w[i] = {i < nblk / 2 ? 0.0 : 1.0 / nblk, 1.0 / nblk};
  w[10] = {0.0, 0.0};
  auto x2 = x;
  // Block 10 holds samples 160..175 as its new samples and earlier ones in
  // its history; sample 175 only appears in blocks 10..13.
  x2(0, 175) += 3.0;
  x2(1, 175) -= 1.0;
  std::vector<ColumnWeights> w2 = w;
  for (std::size_t i = 10; i <= 13; ++i) w2[i] = {0.0, 0.0};
  const auto a = run_offline(x, c, std::span<const ColumnWeights>(w2));
  const auto b = run_offline(x2, c, std::span<const ColumnWeights>(w2));
  for (std::size_t pq = 0; pq < 4; ++pq) {
    const auto fa = a.filter.w(pq / 2, pq % 2);
    CHECK(std::equal(fa.begin(), fa.end(), b.filter.w(pq / 2, pq % 2).begin()));
  }
}

TEST_CASE("instantaneous mixture is separated") {
  const auto x = mixed_noise(32000, 8, 0.5, 0.5);
  TriniconConfig c;
  c.filter_len = 64;
  c.iterations = 50;
  const auto r = run_offline(x, c);
  // Cross-talk of the combined system A W, measured at the dominant taps.
  const auto& f = r.filter;
  auto energy_of = [&](std::size_t src, std::size_t q) {
    // Response from source src to output q: sum_p a_{src->p} w_pq.
    const double a[2][2] = {{1.0, 0.5}, {0.5, 1.0}};
    double e = 0.0;
    for (std::size_t n = 0; n < 64; ++n) {
      const double v = a[src][0] * f.w(0, q)[n] + a[src][1] * f.w(1, q)[n];
      e += v * v;
    }
    return e;
  };
  const double r0 = energy_of(0, 0) / energy_of(1, 0);
  const double r1 = energy_of(1, 1) / energy_of(0, 1);
  CHECK(10.0 * std::log10(r0) > 20.0);
  CHECK(10.0 * std::log10(r1) > 20.0);
}

TEST_CASE("too short input is rejected") {
  TriniconConfig c;
  c.filter_len = 64;
  CHECK_THROWS_AS(run_offline(mixed_noise(100, 1, 0.1, 0.1), c), InvalidArgument);
  CHECK_THROWS_AS(run_offline(MultichannelSignal({testutil::white(1000, 1)}), c),
                  InvalidArgument);
}

TEST_CASE("divergence error keeps the trace") {
  const DivergenceError e("boom", {1.0, 2.0});
  CHECK(e.trace().size() == 2);
  const NumericalError& base = e;
  CHECK(std::string(base.what()) == "boom");
}

TEST_CASE("minimal distortion rescale recovers microphone scale") {
  const auto x = mixed_noise(16000, 10, 0.0, 0.0);
  MultichannelSignal y = x;
  for (std::size_t p = 0; p < 2; ++p)
    for (double& v : y.channel(p)) v *= 0.01;
  const auto z = minimal_distortion_rescale(y, x);
  CHECK(testutil::rel_err(z.channel(0), x.channel(0)) < 1e-6);
  CHECK(testutil::rel_err(z.channel(1), x.channel(1)) < 1e-6);
}

TEST_CASE("filter file round trip") {
  testutil::TempDir dir("filter");
  const auto f = random_filter(24, 11);
  DemixingFilter g(24, 5);
  for (std::size_t pq = 0; pq < 4; ++pq) {
    auto src = f.w(pq / 2, pq % 2);
    std::copy(src.begin(), src.end(), g.w(pq / 2, pq % 2).begin());
  }
  save_filter(dir / "w.bin", g);
  const auto h = load_filter(dir / "w.bin");
  CHECK(h.length() == 24);
  CHECK(h.init_shift() == 5);
  for (std::size_t pq = 0; pq < 4; ++pq) {
    auto a = h.w(pq / 2, pq % 2);
    CHECK(std::equal(a.begin(), a.end(), g.w(pq / 2, pq % 2).begin()));
  }
  {
    std::ofstream out(dir / "bad.bin", std::ios::binary);
    out << "FDTX";
  }
  CHECK_THROWS_AS(load_filter(dir / "bad.bin"), FormatError);
}

}  // TEST_SUITE

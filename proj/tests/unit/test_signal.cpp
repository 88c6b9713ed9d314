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
#include <cstring>
#include <fstream>

#include "doctest.h"
#include "fdtrinicon/csv.hpp"
#include "fdtrinicon/error.hpp"
#include "fdtrinicon/fft.hpp"
#include "fdtrinicon/keyvalue.hpp"
#include "fdtrinicon/signal.hpp"
#include "fdtrinicon/spectra.hpp"
#include "fdtrinicon/wav.hpp"
#include "test_util.hpp"

using namespace fdtrinicon;

TEST_SUITE("signal") {

TEST_CASE("signal container validates its shape") {
  MultichannelSignal s(2, 10, 8000.0);
  CHECK(s.num_channels() == 2);
  CHECK(s.num_samples() == 10);
  CHECK(s.sample_rate() == 8000.0);
  CHECK_THROWS_AS(MultichannelSignal(2, 10, 0.0), InvalidArgument);
  CHECK_THROWS_AS(MultichannelSignal({{1.0, 2.0}, {1.0}}), InvalidArgument);
}

TEST_CASE("frame params") {
  auto p = FrameParams::for_signal(17, 4);
  CHECK(p.block_len() == 16);
  CHECK(p.hop() == 4);
  CHECK(p.num_blocks == 5);
  CHECK(FrameParams::for_signal(16, 4).num_blocks == 4);
}

TEST_CASE("first frame has 3L leading zeros") {
  std::vector<double> x(16);
  for (std::size_t i = 0; i < 16; ++i) x[i] = static_cast<double>(i);
  std::vector<double> f(16);
  frame_channel(x, 4, 0, f);
  for (std::size_t i = 0; i < 12; ++i) CHECK(f[i] == 0.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(f[12 + i] == static_cast<double>(i));
}

TEST_CASE("frame 3 of a ramp is the ramp") {
  std::vector<double> x(16);
  for (std::size_t i = 0; i < 16; ++i) x[i] = static_cast<double>(i);
  std::vector<double> f(16);
  frame_channel(x, 4, 3, f);
  for (std::size_t i = 0; i < 16; ++i) CHECK(f[i] == static_cast<double>(i));
}

TEST_CASE("last L samples of every frame rebuild the padded input") {
  const std::size_t len = 4;
  const auto a = testutil::white(37, 1);
  const auto b = testutil::white(37, 2);
  MultichannelSignal s({a, b});
  const auto p = FrameParams::for_signal(37, len);
  const auto frames = frame_blocks(s, p);
  REQUIRE(frames.size() == p.num_blocks);
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<double> rebuilt;
    for (const auto& fr : frames)
      rebuilt.insert(rebuilt.end(), fr[c].end() - len, fr[c].end());
    REQUIRE(rebuilt.size() == p.num_blocks * len);
    const auto& src = c == 0 ? a : b;
    for (std::size_t n = 0; n < rebuilt.size(); ++n)
      CHECK(rebuilt[n] == (n < src.size() ? src[n] : 0.0));
  }
}

TEST_CASE("dft of zero and impulse frames") {
  std::vector<double> z(16, 0.0);
  for (const auto& v : dft_block(z).bins) CHECK(std::abs(v) == 0.0);
  std::vector<double> d(16, 0.0);
  d[0] = 1.0;
  for (const auto& v : dft_block(d).bins) CHECK(std::abs(v - Complex(1.0, 0.0)) < 1e-15);
  CHECK_THROWS_AS(dft_block(std::vector<double>(10)), InvalidArgument);
}

TEST_CASE("dft matches the naive transform and round-trips") {
  for (std::size_t len : {4u, 16u, 64u}) {
    const auto x = testutil::white(4 * len, len);
    const auto blk = dft_block(x, 7);
    CHECK(blk.block_index == 7);
    const auto ref = testutil::naive_dft(x);
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      err = std::max(err, std::abs(blk.bins[k] - ref[k]));
      scale = std::max(scale, std::abs(ref[k]));
    }
    CHECK(err < 1e-10 * scale);
    const auto back = idft_block(blk);
    CHECK(testutil::rel_err(back, x) < 1e-10);
  }
}

TEST_CASE("parseval") {
  const auto x = testutil::white(256, 5);
  const auto blk = dft_block(x);
  double et = 0.0, ef = 0.0;
  for (double v : x) et += v * v;
  for (const auto& v : blk.bins) ef += std::norm(v);
  CHECK(std::abs(et - ef / 256.0) < 1e-8 * et);
}

TEST_CASE("half spectrum expansion and real fft agree with the full transform") {
  const auto x = testutil::white(32, 9);
  RealFft fft(32);
  std::vector<Complex> half(fft.num_bins());
  fft.forward(x, half);
  const auto full = expand_half_spectrum(half, 32);
  const auto ref = dft_block(x).bins;
  for (std::size_t k = 0; k < 32; ++k) CHECK(std::abs(full[k] - ref[k]) < 1e-12);
  std::vector<double> back(32);
  fft.inverse(half, back);
  CHECK(testutil::rel_err(back, x) < 1e-12);
}

TEST_CASE("fft convolution equals direct convolution") {
  const auto a = testutil::white(100, 3);
  const auto b = testutil::white(37, 4);
  CHECK(testutil::rel_err(convolve(a, b), testutil::direct_convolve(a, b)) < 1e-12);
  CHECK(next_pow2(1) == 1);
  CHECK(next_pow2(17) == 32);
  CHECK(next_pow2(64) == 64);
}

TEST_CASE("block spectra need two channels") {
  MultichannelSignal m({testutil::white(10, 1)});
  CHECK_THROWS_AS(block_spectra(m, 4), InvalidArgument);
  MultichannelSignal s({testutil::white(10, 1), testutil::white(10, 2)});
  const auto b = block_spectra(s, 4);
  CHECK(b.size() == 3);
  CHECK(b[0][0].size() == 9);
}

}  // TEST_SUITE

TEST_SUITE("wav") {

TEST_CASE("pcm16 round trip within one quantization step") {
  testutil::TempDir dir("wav");
  std::vector<double> a(16000), b(16000);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = u(rng);
    b[i] = 0.5 * u(rng);
  }
  MultichannelSignal s({a, b}, 16000.0);
  save_wav(dir / "x.wav", s);
  const auto r = load_wav(dir / "x.wav", {2, 16000.0});
  REQUIRE(r.num_channels() == 2);
  REQUIRE(r.num_samples() == 16000);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t n = 0; n < 16000; ++n) CHECK(std::abs(r(c, n) - s(c, n)) <= 1.0 / 32768.0);
}

TEST_CASE("pcm16 full scale maps to 32767/32768") {
  testutil::TempDir dir("wav");
  MultichannelSignal s({{1.0, -1.0, 2.0}}, 16000.0);
  save_wav(dir / "x.wav", s);
  const auto r = load_wav(dir / "x.wav");
  CHECK(r(0, 0) == 32767.0 / 32768.0);
  CHECK(r(0, 1) == -1.0);
  CHECK(r(0, 2) == 32767.0 / 32768.0);
}

TEST_CASE("float32 round trip is exact for float values") {
  testutil::TempDir dir("wav");
  std::vector<double> a = {0.25, -0.125, 0.1f, 3.0};
  MultichannelSignal s({a, a}, 8000.0);
  save_wav(dir / "x.wav", s, WavEncoding::kFloat32);
  const auto r = load_wav(dir / "x.wav");
  CHECK(r.sample_rate() == 8000.0);
  for (std::size_t n = 0; n < a.size(); ++n) CHECK(r(1, n) == a[n]);
}

TEST_CASE("expectations and bad files are rejected") {
  testutil::TempDir dir("wav");
  MultichannelSignal mono({{0.1, 0.2}}, 16000.0);
  save_wav(dir / "m.wav", mono);
  CHECK_THROWS_AS(load_wav(dir / "m.wav", {2, std::nullopt}), FormatError);
  CHECK_THROWS_AS(load_wav(dir / "m.wav", {std::nullopt, 8000.0}), FormatError);
  CHECK_THROWS_AS(load_wav(dir / "missing.wav"), IoError);
  {
    std::ofstream f(dir / "junk.wav", std::ios::binary);
    f << "not a wav file at all";
  }
  CHECK_THROWS_AS(load_wav(dir / "junk.wav"), FormatError);
}

}  // TEST_SUITE

TEST_SUITE("formats") {

TEST_CASE("key-value parsing") {
  const auto kv = KeyValueFile::parse(
      "# comment\n a = 1.5\nlist = 1, 2 ,3\nflag = yes\nname = hello world\na = 2\n"
      "neg = -inf\n");
  CHECK(kv.get_double("a").value() == 2.0);
  CHECK(kv.get_doubles("list").value() == std::vector<double>{1, 2, 3});
  CHECK(kv.get_bool("flag").value());
  CHECK(kv.get_string("name").value() == "hello world");
  CHECK(std::isinf(kv.get_double("neg").value()));
  CHECK_FALSE(kv.get_double("missing").has_value());
  CHECK(kv.keys() == std::vector<std::string>{"a", "list", "flag", "name", "neg"});
  CHECK_THROWS_AS(KeyValueFile::parse("novalue\n"), FormatError);
  CHECK_THROWS_AS(KeyValueFile::parse("x = abc").get_double("x"), FormatError);
}

TEST_CASE("key-value round trip") {
  KeyValueFile kv;
  kv.set("pi", 3.141592653589793);
  kv.set("v", std::vector<double>{0.1, -2.5});
  kv.set_int("n", 42);
  kv.set_bool("b", false);
  const auto back = KeyValueFile::parse(kv.to_string());
  CHECK(back.get_double("pi").value() == 3.141592653589793);
  CHECK(back.get_doubles("v").value() == std::vector<double>{0.1, -2.5});
  CHECK(back.get_int("n").value() == 42);
  CHECK_FALSE(back.get_bool("b").value());
}

TEST_CASE("csv quoting and parsing") {
  CsvTable t({"a", "b"});
  t.add_row({"1", "x,y"});
  t.add_row({"he said \"hi\"", ""});
  CHECK_THROWS_AS(t.add_row({"only one"}), InvalidArgument);
  const std::string text = t.to_string();
  CHECK(text == "a,b\n1,\"x,y\"\n\"he said \"\"hi\"\"\",\n");
  const auto back = CsvTable::parse(text);
  CHECK(back.header() == t.header());
  CHECK(back.rows() == t.rows());
  CHECK(format_fixed(1.23456, 2) == "1.23");
}

}  // TEST_SUITE

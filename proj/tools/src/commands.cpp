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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <set>

#include "fdtrinicon/error.hpp"
#include "fdtrinicon/filter_io.hpp"
#include "fdtrinicon/speech.hpp"
#include "fdtrinicon/wav.hpp"

namespace fdtrinicon::tools {

namespace {

WavEncoding encoding(bool pcm16) {
  return pcm16 ? WavEncoding::kPcm16 : WavEncoding::kFloat32;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

MultichannelSignal mono(std::span<const double> x, double fs) {
  return MultichannelSignal({std::vector<double>(x.begin(), x.end())}, fs);
}

std::vector<double> load_mono(const fs::path& path, double fs) {
  const MultichannelSignal s = load_wav(path, {1, fs});
  return std::vector<double>(s.channel(0).begin(), s.channel(0).end());
}

void apply_overrides(KeyValueFile& kv, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InvalidArgument("override must look like key=value, got '" + o + "'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv.set(trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
  }
}

CsvTable pattern_table(const ActivityPattern& p) {
  CsvTable t({"block", "src1", "src2"});
  for (std::size_t m = 0; m < p.num_blocks(); ++m)
    t.add_row({std::to_string(m), std::to_string(p.active[0][m]),
               std::to_string(p.active[1][m])});
  return t;
}

std::vector<std::vector<double>> make_sources(const RoomScenario& s,
                                              const std::optional<fs::path>& s1,
                                              const std::optional<fs::path>& s2) {
  if (s1.has_value() != s2.has_value())
    throw InvalidArgument("give both source files or neither");
  if (!s1) {
    return {speech_like(s.duration_s, s.sample_rate, 2 * s.seed + 1),
            speech_like(s.duration_s, s.sample_rate, 2 * s.seed + 2)};
  }
  std::vector<std::vector<double>> src = {load_mono(*s1, s.sample_rate),
                                          load_mono(*s2, s.sample_rate)};
  const auto want = static_cast<std::size_t>(std::llround(s.duration_s * s.sample_rate));
  const std::size_t len = std::min({src[0].size(), src[1].size(), want});
  if (len == 0) throw InvalidArgument("source files are empty");
  for (auto& v : src) v.resize(len);
  return src;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

void cmd_simulate(const SimulateOptions& opts) {
  KeyValueFile kv =
      opts.scenario_file ? KeyValueFile::load(*opts.scenario_file) : KeyValueFile{};
  apply_overrides(kv, opts.overrides);
  const RoomScenario scenario = RoomScenario::from_keyvalue(kv);
  scenario.validate();
  const auto sources = make_sources(scenario, opts.source1, opts.source2);
  const Mixture mix = synthesize_mixture(scenario, sources);

  ensure_dir(opts.out_dir);
  const WavEncoding enc = encoding(opts.pcm16);
  save_wav(opts.out_dir / "mixture.wav", mix.mic, enc);
  save_wav(opts.out_dir / "img_s1.wav", mix.images[0], enc);
  save_wav(opts.out_dir / "img_s2.wav", mix.images[1], enc);
  pattern_table(mix.pattern).save(opts.out_dir / "pattern.csv");
  scenario.to_keyvalue().save(opts.out_dir / "scenario.txt");
}

DetectorConfig detector_from(const SeparateOptions& opts, double sample_rate) {
  DetectorConfig d = DetectorConfig::for_band(sample_rate, opts.trinicon.filter_len,
                                              opts.kl_hz, opts.ku_hz);
  d.alpha = opts.alpha;
  d.rho = opts.rho;
  d.rho_confident = std::min(d.rho_confident, opts.rho);
  d.confident = opts.confident;
  d.window_s = opts.noise_window_s;
  return d;
}

void cmd_separate(const SeparateOptions& opts) {
  const MultichannelSignal mic = load_wav(opts.mixture, {2, std::nullopt});
  opts.trinicon.validate();
  ensure_dir(opts.out_dir);
  const WavEncoding enc = encoding(opts.pcm16);

  auto write_outputs = [&](const MultichannelSignal& y) {
    save_wav(opts.out_dir / "y1.wav", mono(y.channel(0), y.sample_rate()), enc);
    save_wav(opts.out_dir / "y2.wav", mono(y.channel(1), y.sample_rate()), enc);
  };

  if (opts.no_ad) {
    const TriniconResult r = run_offline(mic, opts.trinicon);
    write_outputs(r.outputs);
    save_filter(opts.out_dir / "filter.bin", r.filter);
    KeyValueFile kv = single_pass_diagnostics(r, opts.trinicon);
    kv.set_int("seed", static_cast<long long>(opts.seed));
    kv.set("input", opts.mixture.string());
    kv.save(opts.out_dir / "diagnostics.txt");
    return;
  }

  const DetectorConfig det = detector_from(opts, mic.sample_rate());
  const PipelineOptions popts{opts.warm_start, opts.renormalize};
  const PipelineResult r = separate_two_pass(mic, opts.trinicon, det, popts);
  write_outputs(r.outputs);
  save_filter(opts.out_dir / "filter.bin", r.filter);
  save_labels_csv(opts.out_dir / "labels.csv", r.labels);
  KeyValueFile kv = pipeline_diagnostics(r, opts.trinicon, det, popts);
  kv.set_int("seed", static_cast<long long>(opts.seed));
  kv.set("input", opts.mixture.string());
  kv.save(opts.out_dir / "diagnostics.txt");
}

CsvTable eval_table(const EvalScores& s) {
  CsvTable t({"perm", "sir1_db", "sir2_db", "sdr1_db", "sdr2_db", "mean_sir_db",
              "mean_sdr_db"});
  t.add_row({std::to_string(s.perm[0] + 1) + std::to_string(s.perm[1] + 1),
             format_fixed(s.sir_db[0], 3), format_fixed(s.sir_db[1], 3),
             format_fixed(s.sdr_db[0], 3), format_fixed(s.sdr_db[1], 3),
             format_fixed(s.mean_sir_db(), 3), format_fixed(s.mean_sdr_db(), 3)});
  return t;
}

namespace {

// Two channels from either one 2-channel file or two files; from each file
// of more than one channel, `channel` is taken.
std::array<std::vector<double>, 2> two_signals(const std::vector<fs::path>& files,
                                               std::size_t channel, const char* what) {
  if (files.size() == 1) {
    const MultichannelSignal s = load_wav(files[0], {2, std::nullopt});
    return {std::vector<double>(s.channel(0).begin(), s.channel(0).end()),
            std::vector<double>(s.channel(1).begin(), s.channel(1).end())};
  }
  if (files.size() != 2)
    throw InvalidArgument(std::string(what) + ": give one 2-channel file or two files");
  std::array<std::vector<double>, 2> out;
  double rate = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    const MultichannelSignal s = load_wav(files[i]);
    if (i == 1 && s.sample_rate() != rate)
      throw FormatError(std::string(what) + ": sample rates differ");
    rate = s.sample_rate();
    const std::size_t c = s.num_channels() == 1 ? 0 : channel;
    if (c >= s.num_channels())
      throw InvalidArgument(std::string(what) + ": channel out of range in " +
                            files[i].string());
    out[i].assign(s.channel(c).begin(), s.channel(c).end());
  }
  return out;
}

}  // namespace

CsvTable cmd_eval(const EvalOptions& opts) {
  const auto y = two_signals(opts.outputs, 0, "outputs");
  const auto r = two_signals(opts.references, opts.ref_channel, "references");
  const std::size_t len = y[0].size();
  if (y[1].size() != len || r[0].size() != len || r[1].size() != len)
    throw InvalidArgument("eval: outputs and references must have equal lengths (" +
                          std::to_string(y[0].size()) + ", " +
                          std::to_string(y[1].size()) + ", " +
                          std::to_string(r[0].size()) + ", " +
                          std::to_string(r[1].size()) + ")");
  std::span<const double> ys[2] = {y[0], y[1]};
  std::span<const double> rs[2] = {r[0], r[1]};
  const CsvTable t = eval_table(score(ys, rs, opts.proj_len));
  if (opts.out_csv) t.save(*opts.out_csv);
  return t;
}

EvalScores score_against_images(const MultichannelSignal& outputs, const Mixture& mix,
                                std::size_t proj_len) {
  std::span<const double> ys[2] = {outputs.channel(0), outputs.channel(1)};
  std::span<const double> rs[2] = {mix.images[0].channel(0), mix.images[1].channel(0)};
  return score(ys, rs, proj_len);
}

BenchGrid BenchGrid::from_keyvalue(const KeyValueFile& kv) {
  static const std::set<std::string> kGridKeys = {
      "rt60s", "doa_pairs", "repetitions", "filter_len", "iterations", "mu",
      "init_shift", "psd_window", "kl_hz", "ku_hz", "alpha", "rho"};
  BenchGrid g;
  KeyValueFile scenario_kv;
  for (const auto& key : kv.keys()) {
    if (!kGridKeys.count(key)) scenario_kv.set(key, kv.raw(key));
  }
  g.scenario = RoomScenario::from_keyvalue(scenario_kv);
  if (auto v = kv.get_doubles("rt60s")) g.rt60s = *v;
  if (auto v = kv.get_strings("doa_pairs")) {
    g.doa_pairs.clear();
    for (const auto& item : *v) {
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw FormatError("grid: doa_pairs entries look like -70:-15, got '" + item + "'");
      g.doa_pairs.push_back({parse_double(item.substr(0, colon), "doa"),
                             parse_double(item.substr(colon + 1), "doa")});
    }
  }
  auto positive_int = [&](const char* key) -> std::optional<std::size_t> {
    auto v = kv.get_int(key);
    if (!v) return std::nullopt;
    if (*v <= 0) throw FormatError(std::string("grid: ") + key + " must be positive");
    return static_cast<std::size_t>(*v);
  };
  if (auto v = positive_int("repetitions")) g.repetitions = *v;
  if (auto v = positive_int("filter_len")) g.trinicon.filter_len = *v;
  if (auto v = positive_int("iterations")) g.trinicon.iterations = *v;
  if (auto v = positive_int("psd_window")) g.trinicon.psd_window = *v;
  if (auto v = kv.get_int("init_shift")) {
    if (*v < 0) throw FormatError("grid: init_shift must be >= 0");
    g.trinicon.init_shift = static_cast<std::size_t>(*v);
  }
  g.trinicon.mu = kv.get_double("mu").value_or(g.trinicon.mu);
  g.kl_hz = kv.get_double("kl_hz").value_or(g.kl_hz);
  g.ku_hz = kv.get_double("ku_hz").value_or(g.ku_hz);
  g.alpha = kv.get_double("alpha").value_or(g.alpha);
  g.rho = kv.get_double("rho").value_or(g.rho);
  if (g.rt60s.empty() || g.doa_pairs.empty()) throw FormatError("grid: empty sweep");
  g.trinicon.validate();
  return g;
}

CellResult run_bench_cell(const BenchGrid& grid, double rt60,
                          const std::array<double, 2>& doas,
                          const std::vector<std::vector<double>>* sources,
                          std::ostream* log) {
  CellResult c;
  c.rt60 = rt60;
  c.doa1 = doas[0];
  c.doa2 = doas[1];
  try {
    DetectorConfig det = DetectorConfig::for_band(
        grid.scenario.sample_rate, grid.trinicon.filter_len, grid.kl_hz, grid.ku_hz);
    det.alpha = grid.alpha;
    det.rho = grid.rho;
    det.rho_confident = std::min(det.rho_confident, grid.rho);
    for (std::size_t rep = 0; rep < grid.repetitions; ++rep) {
      RoomScenario s = grid.scenario;
      s.rt60 = rt60;
      s.source_doas = {doas[0], doas[1]};
      s.seed = grid.scenario.seed + rep;
      s.validate();
      const auto src = sources ? *sources
                               : std::vector<std::vector<double>>{
                                     speech_like(s.duration_s, s.sample_rate, 2 * s.seed + 1),
                                     speech_like(s.duration_s, s.sample_rate, 2 * s.seed + 2)};
      const Mixture mix = synthesize_mixture(s, src);
      const EvalScores in = score_against_images(mix.mic, mix);
      // The first pass of the two-pass run is the plain single-pass result.
      const PipelineResult two = separate_two_pass(mix.mic, grid.trinicon, det);
      const EvalScores without = score_against_images(two.pass1_outputs, mix);
      const EvalScores with = score_against_images(two.outputs, mix);
      c.sir_input += in.mean_sir_db();
      c.sdr_input += in.mean_sdr_db();
      c.sir_without += without.mean_sir_db();
      c.sdr_without += without.mean_sdr_db();
      c.sir_with += with.mean_sir_db();
      c.sdr_with += with.mean_sdr_db();
      ++c.repetitions;
      if (log) {
        *log << "rt60=" << fmt(rt60) << " doas=" << fmt(doas[0]) << "/" << fmt(doas[1])
             << " rep=" << rep << " sir " << format_fixed(without.mean_sir_db(), 2)
             << " -> " << format_fixed(with.mean_sir_db(), 2) << "\n";
      }
    }
    const double n = static_cast<double>(c.repetitions);
    for (double* v : {&c.sir_input, &c.sdr_input, &c.sir_without, &c.sdr_without,
                      &c.sir_with, &c.sdr_with})
      *v /= n;
  } catch (const std::exception& e) {
    c.error = e.what();
  }
  return c;
}

CsvTable bench_table(const BenchGrid& grid, const std::vector<CellResult>& cells) {
  CsvTable t({"rt60_ms", "doa1_deg", "doa2_deg", "sir_without_ad_db", "sir_with_ad_db",
              "sir_improvement_db", "sdr_input_db", "sdr_without_ad_db", "sdr_with_ad_db",
              "sir_input_db", "repetitions", "status", "filter_len", "iterations", "mu",
              "duration_s", "base_seed"});
  for (const auto& c : cells) {
    std::vector<std::string> row = {fmt(c.rt60 * 1000.0), fmt(c.doa1), fmt(c.doa2)};
    if (c.error.empty()) {
      for (double v : {c.sir_without, c.sir_with, c.sir_with - c.sir_without, c.sdr_input,
                       c.sdr_without, c.sdr_with, c.sir_input})
        row.push_back(fmt(v));
      row.push_back(std::to_string(c.repetitions));
      row.push_back("ok");
    } else {
      row.insert(row.end(), 7, "");
      row.push_back(std::to_string(c.repetitions));
      row.push_back("error: " + c.error);
    }
    row.push_back(std::to_string(grid.trinicon.filter_len));
    row.push_back(std::to_string(grid.trinicon.iterations));
    row.push_back(fmt(grid.trinicon.mu));
    row.push_back(fmt(grid.scenario.duration_s));
    row.push_back(std::to_string(grid.scenario.seed));
    t.add_row(row);
  }
  return t;
}

CsvTable cmd_bench(const BenchOptions& opts, std::ostream* log) {
  const BenchGrid grid = BenchGrid::from_keyvalue(KeyValueFile::load(opts.grid_file));
  std::optional<std::vector<std::vector<double>>> sources;
  if (opts.source1 || opts.source2)
    sources = make_sources(grid.scenario, opts.source1, opts.source2);
  std::vector<CellResult> cells;
  for (double rt : grid.rt60s) {
    for (const auto& pair : grid.doa_pairs)
      cells.push_back(run_bench_cell(grid, rt, pair, sources ? &*sources : nullptr, log));
  }
  const CsvTable t = bench_table(grid, cells);
  t.save(opts.out_csv);
  return t;
}

void cmd_speech(const SpeechOptions& opts) {
  SpeechLikeOptions so;
  so.rms = opts.rms;
  const auto x = speech_like(opts.duration_s, opts.sample_rate, opts.seed, so);
  save_wav(opts.out, mono(x, opts.sample_rate), WavEncoding::kFloat32);
}

CsvTable directivity_table(const DemixingFilter& filter, const DirectivityOptions& opts) {
  if (!(opts.angle_step_deg > 0.0)) throw InvalidArgument("angle step must be > 0");
  if (!(opts.sample_rate > 0.0) || !(opts.speed_of_sound > 0.0))
    throw InvalidArgument("sample rate and speed of sound must be > 0");
  CsvTable t({"output", "freq_hz", "angle_deg", "gain_db"});
  const double pi = std::numbers::pi;
  const double xpos[2] = {-0.5 * opts.mic_spacing, 0.5 * opts.mic_spacing};
  for (double f : opts.freqs_hz) {
    if (!(f >= 0.0 && f <= 0.5 * opts.sample_rate))
      throw InvalidArgument("frequency " + fmt(f) + " Hz outside 0..fs/2");
    const double omega = 2.0 * pi * f / opts.sample_rate;
    std::array<std::complex<double>, 4> resp{};
    for (std::size_t pq = 0; pq < 4; ++pq) {
      const auto taps = filter.w(pq / 2, pq % 2);
      for (std::size_t n = 0; n < taps.size(); ++n)
        resp[pq] += taps[n] * std::polar(1.0, -omega * static_cast<double>(n));
    }
    for (std::size_t q = 0; q < 2; ++q) {
      const auto steps = static_cast<long>(std::floor(180.0 / opts.angle_step_deg + 1e-9));
      for (long a = 0; a <= steps; ++a) {
        const double deg = -90.0 + static_cast<double>(a) * opts.angle_step_deg;
        const double s = std::sin(deg * pi / 180.0);
        std::complex<double> g{};
        for (std::size_t p = 0; p < 2; ++p) {
          // Plane-wave arrival at mic p relative to the array centre.
          const double tau = -xpos[p] * s / opts.speed_of_sound;
          g += resp[2 * p + q] * std::polar(1.0, -2.0 * pi * f * tau);
        }
        t.add_row({std::to_string(q + 1), fmt(f), fmt(deg),
                   format_fixed(20.0 * std::log10(std::max(std::abs(g), 1e-300)), 3)});
      }
    }
  }
  return t;
}

void cmd_directivity(const DirectivityOptions& opts) {
  directivity_table(load_filter(opts.filter), opts).save(opts.out_csv);
}

}  // namespace fdtrinicon::tools

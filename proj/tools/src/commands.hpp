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

#ifndef FDTRINICON_TOOLS_COMMANDS_HPP_
#define FDTRINICON_TOOLS_COMMANDS_HPP_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fdtrinicon/activity.hpp"
#include "fdtrinicon/bss_eval.hpp"
#include "fdtrinicon/csv.hpp"
#include "fdtrinicon/keyvalue.hpp"
#include "fdtrinicon/mixture.hpp"
#include "fdtrinicon/pipeline.hpp"
#include "fdtrinicon/room.hpp"
#include "fdtrinicon/trinicon.hpp"

namespace fdtrinicon::tools {

namespace fs = std::filesystem;

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;
inline constexpr int kExitFailure = 1;

struct SimulateOptions {
  std::optional<fs::path> scenario_file;
  std::vector<std::string> overrides;  // "key=value"
  std::optional<fs::path> source1;
  std::optional<fs::path> source2;
  fs::path out_dir;
  bool pcm16 = false;
};

// Writes mixture.wav, img_s1.wav, img_s2.wav, pattern.csv and scenario.txt.
// Without source files, speech-like sources are generated from the seed.
void cmd_simulate(const SimulateOptions& opts);

struct SeparateOptions {
  fs::path mixture;
  fs::path out_dir;
  TriniconConfig trinicon;
  double kl_hz = 200.0;
  double ku_hz = 7000.0;
  double alpha = 3.0;
  double rho = 0.25;
  bool confident = false;
  double noise_window_s = 0.0;
  bool no_ad = false;
  bool warm_start = false;
  bool renormalize = false;
  std::uint64_t seed = 0;
  bool pcm16 = false;
};

DetectorConfig detector_from(const SeparateOptions& opts, double sample_rate);

// Writes y1.wav, y2.wav, diagnostics.txt, filter.bin and, in two-pass mode,
// labels.csv. Throws DivergenceError on divergence.
void cmd_separate(const SeparateOptions& opts);

struct EvalOptions {
  std::vector<fs::path> outputs;     // one 2-channel file or two files
  std::vector<fs::path> references;  // one 2-channel file or two files
  std::size_t ref_channel = 0;       // channel taken from multichannel refs
  std::size_t proj_len = kDefaultProjectionLen;
  std::optional<fs::path> out_csv;
};

CsvTable eval_table(const EvalScores& s);
CsvTable cmd_eval(const EvalOptions& opts);

// Averages over both output channels and all repetitions.
struct CellResult {
  double rt60 = 0.0;
  double doa1 = 0.0;
  double doa2 = 0.0;
  std::size_t repetitions = 0;
  double sir_input = 0.0;
  double sir_without = 0.0;
  double sir_with = 0.0;
  double sdr_input = 0.0;
  double sdr_without = 0.0;
  double sdr_with = 0.0;
  std::string error;
};

struct BenchGrid {
  std::vector<double> rt60s{0.15, 0.25, 0.35};
  std::vector<std::array<double, 2>> doa_pairs{{-70, -15}, {-70, 0}, {-70, 45},
                                               {-45, -15}, {-45, 0}, {-45, 45}};
  std::size_t repetitions = 4;
  RoomScenario scenario;
  TriniconConfig trinicon;
  double kl_hz = 200.0;
  double ku_hz = 7000.0;
  double alpha = 3.0;
  double rho = 0.25;

  // Keys: rt60s, doa_pairs ("a:b, c:d"), repetitions, the scenario keys,
  // filter_len, iterations, mu, init_shift, psd_window, kl_hz, ku_hz, alpha,
  // rho. Unknown keys are rejected.
  static BenchGrid from_keyvalue(const KeyValueFile& kv);
};

// One (rt60, doa pair) cell; repetition r uses seed scenario.seed + r for
// the pattern, noise and (when no sources are given) the sources.
CellResult run_bench_cell(const BenchGrid& grid, double rt60,
                          const std::array<double, 2>& doas,
                          const std::vector<std::vector<double>>* sources,
                          std::ostream* log = nullptr);

CsvTable bench_table(const BenchGrid& grid, const std::vector<CellResult>& cells);

struct BenchOptions {
  fs::path grid_file;
  std::optional<fs::path> source1;
  std::optional<fs::path> source2;
  fs::path out_csv;
};

CsvTable cmd_bench(const BenchOptions& opts, std::ostream* log);

struct SpeechOptions {
  fs::path out;
  double duration_s = 20.0;
  double sample_rate = 16000.0;
  std::uint64_t seed = 1;
  double rms = 0.1;
};

void cmd_speech(const SpeechOptions& opts);

struct DirectivityOptions {
  fs::path filter;
  fs::path out_csv;
  std::vector<double> freqs_hz{500.0, 1000.0, 2000.0};
  double mic_spacing = 0.10;
  double speed_of_sound = 343.0;
  double sample_rate = 16000.0;
  double angle_step_deg = 1.0;
};

// Gain of each output's demixing filter pair towards far-field sources at
// -90..90 degrees from broadside.
CsvTable directivity_table(const DemixingFilter& filter, const DirectivityOptions& opts);
void cmd_directivity(const DirectivityOptions& opts);

// Scores outputs against the mic-1 source images of a mixture.
EvalScores score_against_images(const MultichannelSignal& outputs, const Mixture& mix,
                                std::size_t proj_len = kDefaultProjectionLen);

}  // namespace fdtrinicon::tools

#endif  // FDTRINICON_TOOLS_COMMANDS_HPP_

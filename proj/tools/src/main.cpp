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

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fdtrinicon/error.hpp"

using namespace fdtrinicon;
using namespace fdtrinicon::tools;

int main(int argc, char** argv) {
  CLI::App app{"Two-pass blind source separation for two-microphone recordings"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a two-source room mixture");
  simulate->add_option("--scenario", sim.scenario_file, "Scenario key-value file")
      ->check(CLI::ExistingFile);
  simulate->add_option("--set", sim.overrides, "Scenario override key=value (repeatable)");
  simulate->add_option("--source1", sim.source1, "Mono WAV for source 1")
      ->check(CLI::ExistingFile);
  simulate->add_option("--source2", sim.source2, "Mono WAV for source 2")
      ->check(CLI::ExistingFile);
  simulate->add_option("-o,--out", sim.out_dir, "Output directory")->required();
  simulate->add_flag("--pcm16", sim.pcm16, "Write 16-bit PCM instead of float WAV");

  SeparateOptions sep;
  auto* separate = app.add_subcommand("separate", "Separate a two-channel mixture");
  separate->add_option("mixture", sep.mixture, "Two-channel WAV")
      ->required()
      ->check(CLI::ExistingFile);
  separate->add_option("-o,--out", sep.out_dir, "Output directory")->required();
  separate->add_option("--filter-len", sep.trinicon.filter_len, "Filter taps L")
      ->capture_default_str();
  separate->add_option("--iters", sep.trinicon.iterations, "Iterations per pass")
      ->capture_default_str();
  separate->add_option("--mu", sep.trinicon.mu, "Step size")->capture_default_str();
  separate->add_option("--shift", sep.trinicon.init_shift, "Initial impulse shift")
      ->capture_default_str();
  separate->add_option("--psd-window", sep.trinicon.psd_window,
                       "Blocks per local PSD estimate")
      ->capture_default_str();
  separate->add_option("--alpha", sep.alpha, "Noise threshold multiplier")
      ->capture_default_str();
  separate->add_option("--rho", sep.rho, "Suppressed-output power ratio")
      ->capture_default_str();
  separate->add_flag("--confident", sep.confident, "Use the stricter ratio 0.15");
  separate->add_option("--kl-hz", sep.kl_hz, "Lower band edge")->capture_default_str();
  separate->add_option("--ku-hz", sep.ku_hz, "Upper band edge")->capture_default_str();
  separate->add_option("--noise-window", sep.noise_window_s,
                       "Noise-floor window in seconds (0 = whole signal)")
      ->capture_default_str();
  separate->add_flag("--no-ad", sep.no_ad, "Single pass without activity detection");
  separate->add_flag("--warm-start", sep.warm_start, "Start pass 2 from pass-1 filters");
  separate->add_flag("--renormalize", sep.renormalize,
                     "Normalize weights by each source's active-block count");
  separate->add_flag("--post-scale", sep.trinicon.post_scale,
                     "Rescale outputs to their microphone images");
  separate->add_option("--seed", sep.seed, "Recorded in diagnostics");
  separate->add_flag("--pcm16", sep.pcm16, "Write 16-bit PCM instead of float WAV");

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Score outputs against reference images");
  eval->add_option("--outputs", ev.outputs, "One 2-channel WAV or two mono WAVs")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--refs", ev.references, "One 2-channel WAV or two WAVs")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--ref-channel", ev.ref_channel,
                   "Channel taken from multichannel reference files (0-based)")
      ->capture_default_str();
  eval->add_option("--proj-len", ev.proj_len, "Projection filter length")
      ->capture_default_str();
  eval->add_option("-o,--out", ev.out_csv, "CSV file (also printed)");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Sweep RT60 and DOA pairs");
  bench_cmd->add_option("grid", bench.grid_file, "Grid key-value file")
      ->required()
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--source1", bench.source1, "Mono WAV for source 1")
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--source2", bench.source2, "Mono WAV for source 2")
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("-o,--out", bench.out_csv, "Output CSV")->required();
  bool quiet = false;
  bench_cmd->add_flag("-q,--quiet", quiet, "No per-repetition progress on stderr");

  SpeechOptions sp;
  auto* speech = app.add_subcommand("speech", "Write a synthetic speech-like WAV");
  speech->add_option("-o,--out", sp.out, "Output WAV")->required();
  speech->add_option("--duration", sp.duration_s, "Seconds")->capture_default_str();
  speech->add_option("--fs", sp.sample_rate, "Sample rate")->capture_default_str();
  speech->add_option("--seed", sp.seed, "Seed")->capture_default_str();
  speech->add_option("--rms", sp.rms, "RMS level")->capture_default_str();

  DirectivityOptions dir;
  auto* directivity = app.add_subcommand("directivity", "Export demixing beam patterns");
  directivity->add_option("filter", dir.filter, "filter.bin from separate")
      ->required()
      ->check(CLI::ExistingFile);
  directivity->add_option("-o,--out", dir.out_csv, "Output CSV")->required();
  directivity->add_option("--freqs", dir.freqs_hz, "Frequencies in Hz");
  directivity->add_option("--spacing", dir.mic_spacing, "Mic spacing in m")
      ->capture_default_str();
  directivity->add_option("--fs", dir.sample_rate, "Sample rate")->capture_default_str();
  directivity->add_option("--step", dir.angle_step_deg, "Angle step in degrees")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit cleanly; everything else is a usage error.
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) {
      cmd_simulate(sim);
    } else if (*separate) {
      cmd_separate(sep);
    } else if (*eval) {
      std::cout << cmd_eval(ev).to_string();
    } else if (*bench_cmd) {
      cmd_bench(bench, quiet ? nullptr : &std::cerr);
    } else if (*speech) {
      cmd_speech(sp);
    } else if (*directivity) {
      cmd_directivity(dir);
    }
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

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

#include "fdtrinicon/speech.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fdtrinicon/error.hpp"
#include "fdtrinicon/signal.hpp"

namespace fdtrinicon {
namespace {

// Two-pole resonator, unity peak gain (approximately).
struct Resonator {
  double a1 = 0.0, a2 = 0.0, g = 1.0;
  double y1 = 0.0, y2 = 0.0;

  Resonator(double freq, double bandwidth, double fs) {
    const double r = std::exp(-std::numbers::pi * bandwidth / fs);
    a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / fs);
    a2 = -r * r;
    g = 1.0 - r;
  }
  double step(double x) {
    const double y = g * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

}  // namespace

std::vector<double> speech_like(double duration_s, double sample_rate,
                                std::uint64_t seed,
                                const SpeechLikeOptions& options) {
  if (!(duration_s > 0.0) || !(sample_rate > 0.0))
    throw InvalidArgument("speech_like: duration and sample rate must be > 0");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // Per-speaker spectral envelope.
  const double f1 = 300.0 + 500.0 * uni(rng);
  const double f2 = 900.0 + 1300.0 * uni(rng);
  const double f3 = 2200.0 + 1400.0 * uni(rng);
  Resonator r1(f1, 120.0, sample_rate);
  Resonator r2(f2, 180.0, sample_rate);
  Resonator r3(f3, 250.0, sample_rate);
  const double tilt = 0.85 + 0.1 * uni(rng);  // one-pole lowpass coefficient

  // Syllabic envelope: lowpassed noise, rectified and raised.
  const double env_pole = std::exp(-2.0 * std::numbers::pi *
                                   options.syllable_rate_hz / sample_rate);

  // Pauses as a two-state process with exponential holding times.
  const double mean_talk_s = 1.0 / std::max(options.pause_rate_hz, 1e-9);
  std::exponential_distribution<double> talk_len(1.0 / mean_talk_s);
  std::exponential_distribution<double> pause_len(
      1.0 / std::max(options.mean_pause_s, 1e-9));
  bool paused = false;
  auto next_switch = static_cast<std::size_t>(talk_len(rng) * sample_rate);
  double gate = 1.0;
  const double gate_step = 1.0 / (0.01 * sample_rate);  // 10 ms fades

  std::vector<double> out(n);
  double lp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (options.pause_rate_hz > 0.0 && i >= next_switch) {
      paused = !paused;
      const double len = paused ? pause_len(rng) : talk_len(rng);
      next_switch = i + 1 + static_cast<std::size_t>(len * sample_rate);
    }
    gate = paused ? std::max(0.0, gate - gate_step) : std::min(1.0, gate + gate_step);

    const double w = gauss(rng);
    lp = tilt * lp + (1.0 - tilt) * w;
    const double voiced = 4.0 * r1.step(w) + 2.5 * r2.step(w) + 1.5 * r3.step(w);
    const double excitation = lp + voiced + 0.05 * w;

    out[i] = excitation * gate;
  }

  // Envelope from an independent stream so its scale can be normalized.
  std::vector<double> env(n);
  double env_state = 0.0;
  double env_state2 = 0.0;
  std::mt19937_64 env_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  double env_rms = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    env_state = env_pole * env_state + (1.0 - env_pole) * gauss(env_rng);
    env_state2 = env_pole * env_state2 + (1.0 - env_pole) * env_state;
    env[i] = env_state2;
    env_rms += env_state2 * env_state2;
  }
  env_rms = std::sqrt(env_rms / static_cast<double>(std::max<std::size_t>(n, 1)));
  const double depth = std::clamp(options.modulation_depth, 0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = env_rms > 0.0 ? std::abs(env[i]) / env_rms : 1.0;
    out[i] *= (1.0 - depth) + depth * std::min(e, 3.0);
  }

  const double p = mean_power(out);
  if (p > 0.0) {
    const double g = options.rms / std::sqrt(p);
    for (double& v : out) v *= g;
  }
  return out;
}

}  // namespace fdtrinicon

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

#include "fdtrinicon/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fdtrinicon/error.hpp"
#include "fdtrinicon/fft.hpp"

namespace fdtrinicon {
namespace {

// Keeps PCM16 output away from clipping.
constexpr double kTargetImageRms = 0.05;
constexpr double kMaxPeak = 0.95;

}  // namespace

std::vector<double> activity_envelope(std::span<const std::uint8_t> active,
                                      std::size_t block_len,
                                      std::size_t num_samples,
                                      std::size_t ramp_samples) {
  std::vector<double> env(num_samples, 0.0);
  auto state = [&](std::size_t n) -> bool {
    const std::size_t b = n / block_len;
    return b < active.size() && active[b] != 0;
  };
  for (std::size_t n = 0; n < num_samples; ++n) env[n] = state(n) ? 1.0 : 0.0;
  if (ramp_samples == 0) return env;

  // Find on-runs and shape their edges.
  std::size_t n = 0;
  while (n < num_samples) {
    if (!state(n)) {
      ++n;
      continue;
    }
    std::size_t end = n;
    while (end < num_samples && state(end)) ++end;
    const std::size_t len = end - n;
    const std::size_t ramp = std::min(ramp_samples, len / 2);
    for (std::size_t i = 0; i < ramp; ++i) {
      const double g =
          0.5 * (1.0 - std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                static_cast<double>(ramp)));
      env[n + i] = g;
      env[end - 1 - i] = g;
    }
    n = end;
  }
  return env;
}

Mixture synthesize_mixture(const RoomScenario& scenario,
                           std::span<const std::vector<double>> sources) {
  if (sources.size() != 2)
    throw InvalidArgument("synthesize_mixture: exactly two sources required");
  const std::size_t len = sources[0].size();
  const std::size_t blocks = (len + scenario.block_len - 1) / scenario.block_len;
  const double mean_seg_blocks = std::max(
      1.0, scenario.mean_segment_s * scenario.sample_rate /
               static_cast<double>(scenario.block_len));
  const ActivityPattern pattern =
      make_activity_pattern(blocks, scenario.occupancy, scenario.overlap,
                            scenario.seed, mean_seg_blocks);
  return synthesize_mixture(scenario, sources, pattern);
}

Mixture synthesize_mixture(const RoomScenario& scenario,
                           std::span<const std::vector<double>> sources,
                           const ActivityPattern& pattern) {
  scenario.validate();
  if (sources.size() != 2)
    throw InvalidArgument("synthesize_mixture: exactly two sources required");
  const std::size_t len = sources[0].size();
  if (sources[1].size() != len)
    throw InvalidArgument("synthesize_mixture: source lengths differ");
  if (len == 0) throw InvalidArgument("synthesize_mixture: empty sources");
  const std::size_t blocks = (len + scenario.block_len - 1) / scenario.block_len;
  if (pattern.num_blocks() != blocks)
    throw InvalidArgument("synthesize_mixture: pattern has " +
                          std::to_string(pattern.num_blocks()) +
                          " blocks, sources need " + std::to_string(blocks));

  const double fs = scenario.sample_rate;
  const auto ramp = static_cast<std::size_t>(std::llround(scenario.ramp_ms * 1e-3 * fs));

  Mixture mix;
  mix.pattern = pattern;
  std::array<double, 2> power{};
  for (std::size_t u = 0; u < 2; ++u) {
    const auto env = activity_envelope(pattern.active[u], scenario.block_len, len, ramp);
    std::vector<double> gated(len);
    for (std::size_t n = 0; n < len; ++n) gated[n] = sources[u][n] * env[n];
    mix.images[u] = MultichannelSignal(2, len, fs);
    for (std::size_t p = 0; p < 2; ++p) {
      const Rir rir = generate_rir(scenario, u, p);
      auto wet = convolve(gated, rir.taps);
      wet.resize(len);
      std::copy(wet.begin(), wet.end(), mix.images[u].channel(p).begin());
    }
    power[u] = 0.5 * (mean_power(mix.images[u].channel(0)) +
                      mean_power(mix.images[u].channel(1)));
  }

  if (scenario.equalize_power) {
    for (std::size_t u = 0; u < 2; ++u) {
      if (!(power[u] > 0.0))
        throw InvalidArgument("synthesize_mixture: source " +
                              std::to_string(u + 1) +
                              " has zero power at the microphones; cannot "
                              "scale to 0 dB SIR");
      mix.source_gains[u] = kTargetImageRms / std::sqrt(power[u]);
    }
  }
  for (std::size_t u = 0; u < 2; ++u) {
    for (std::size_t p = 0; p < 2; ++p)
      for (double& v : mix.images[u].channel(p)) v *= mix.source_gains[u];
  }

  // Noise relative to the mean speech power per microphone.
  mix.noise = MultichannelSignal(2, len, fs);
  const bool silent = std::isinf(scenario.noise_db) && scenario.noise_db < 0.0;
  if (!silent && !std::isfinite(scenario.noise_db))
    throw InvalidArgument("synthesize_mixture: noise_db must be finite or -inf");
  if (!silent) {
    double speech_power = 0.0;
    for (std::size_t p = 0; p < 2; ++p) {
      double acc = 0.0;
      for (std::size_t n = 0; n < len; ++n) {
        const double s = mix.images[0](p, n) + mix.images[1](p, n);
        acc += s * s;
      }
      speech_power += 0.5 * acc / static_cast<double>(len);
    }
    const double sigma = std::sqrt(speech_power * std::pow(10.0, scenario.noise_db / 10.0));
    std::mt19937_64 rng(scenario.seed ^ 0x6e6f697365ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t p = 0; p < 2; ++p) {
      auto ch = mix.noise.channel(p);
      for (double& v : ch) v = gauss(rng);
      // Pin the realized power to the target exactly.
      const double pw = mean_power(ch);
      if (pw > 0.0) {
        const double g = sigma / std::sqrt(pw);
        for (double& v : ch) v *= g;
      }
    }
  }

  // One common gain keeps every ratio intact while avoiding clipping.
  double peak = 0.0;
  mix.mic = MultichannelSignal(2, len, fs);
  for (std::size_t p = 0; p < 2; ++p) {
    for (std::size_t n = 0; n < len; ++n) {
      const double v = mix.images[0](p, n) + mix.images[1](p, n) + mix.noise(p, n);
      mix.mic(p, n) = v;
      peak = std::max(peak, std::abs(v));
    }
  }
  if (peak > kMaxPeak) {
    const double g = kMaxPeak / peak;
    for (auto* sig : {&mix.mic, &mix.images[0], &mix.images[1], &mix.noise}) {
      for (std::size_t p = 0; p < 2; ++p)
        for (double& v : sig->channel(p)) v *= g;
    }
    for (double& sg : mix.source_gains) sg *= g;
  }
  return mix;
}

}  // namespace fdtrinicon

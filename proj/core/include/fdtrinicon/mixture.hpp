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

#ifndef FDTRINICON_MIXTURE_HPP_
#define FDTRINICON_MIXTURE_HPP_

#include <array>
#include <span>
#include <vector>

#include "fdtrinicon/activity_pattern.hpp"
#include "fdtrinicon/room.hpp"
#include "fdtrinicon/signal.hpp"

namespace fdtrinicon {

struct Mixture {
  MultichannelSignal mic;                    // images[0] + images[1] + noise
  std::array<MultichannelSignal, 2> images;  // per-source image at both mics
  MultichannelSignal noise;
  ActivityPattern pattern;
  std::array<double, 2> source_gains{1.0, 1.0};
};

// Raised-cosine on/off envelope for a block pattern; ramps of ramp_samples
// start at each onset and end at each offset.
std::vector<double> activity_envelope(std::span<const std::uint8_t> active,
                                      std::size_t block_len,
                                      std::size_t num_samples,
                                      std::size_t ramp_samples);

// Gates each dry source by its activity envelope, convolves it with its two
// room responses, equalizes the two image powers (0 dB input SIR, when
// scenario.equalize_power), and adds white Gaussian noise at noise_db
// relative to the mean speech power per microphone. noise_db = -inf adds
// no noise. Outputs have the length of the sources.
Mixture synthesize_mixture(const RoomScenario& scenario,
                           std::span<const std::vector<double>> sources);

// Same, with an externally supplied pattern (its length must match the
// source length at scenario.block_len resolution).
Mixture synthesize_mixture(const RoomScenario& scenario,
                           std::span<const std::vector<double>> sources,
                           const ActivityPattern& pattern);

}  // namespace fdtrinicon

#endif  // FDTRINICON_MIXTURE_HPP_

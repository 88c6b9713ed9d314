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

#ifndef FDTRINICON_SPEECH_HPP_
#define FDTRINICON_SPEECH_HPP_

#include <cstdint>
#include <vector>

namespace fdtrinicon {

struct SpeechLikeOptions {
  double syllable_rate_hz = 4.0;  // envelope modulation rate
  double modulation_depth = 0.9;  // 0 = stationary, 1 = full on/off syllables
  double pause_rate_hz = 0.5;     // mean number of pauses per second
  double mean_pause_s = 0.25;     // pauses are exponentially distributed
  double rms = 0.1;
};

// Speech-like test signal: noise shaped by a per-seed spectral envelope
// (spectral tilt plus three formant-like resonances), multiplied by a smooth
// random syllabic envelope with random pauses. Deterministic in seed.
std::vector<double> speech_like(double duration_s, double sample_rate,
                                std::uint64_t seed,
                                const SpeechLikeOptions& options = {});

}  // namespace fdtrinicon

#endif  // FDTRINICON_SPEECH_HPP_

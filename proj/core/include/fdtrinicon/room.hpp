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

#ifndef FDTRINICON_ROOM_HPP_
#define FDTRINICON_ROOM_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "fdtrinicon/keyvalue.hpp"

namespace fdtrinicon {

using Vec3 = std::array<double, 3>;

// Shoebox room with a two-microphone array and two point sources.
//
// Geometry convention: the microphones sit on the x axis of the array,
// mic 1 at array_center - (spacing/2, 0, 0) and mic 2 at + (spacing/2, 0, 0).
// A DOA of theta degrees places the source at
//   array_center + distance * (sin theta, cos theta, 0),
// i.e. theta is measured from broadside (+y) and negative angles lie in the
// half plane on mic 1's side.
struct RoomScenario {
  Vec3 room_dims{6.0, 6.0, 4.0};
  double rt60 = 0.25;
  double mic_spacing = 0.10;
  Vec3 array_center{3.0, 2.9, 1.5};
  std::array<double, 2> source_doas{-45.0, -15.0};
  double source_distance = 1.5;
  double speed_of_sound = 343.0;
  double sample_rate = 16000.0;
  double noise_db = -30.0;
  double occupancy = 0.6;
  double overlap = 1.0 / 3.0;
  std::uint64_t seed = 1;

  // Synthesis details.
  std::size_t block_len = 512;     // activity-pattern resolution, samples
  double mean_segment_s = 2.0;     // mean length of activity segments
  double ramp_ms = 10.0;           // on/off raised-cosine ramps
  double duration_s = 20.0;        // used when sources are synthesized
  std::size_t rir_len = 0;         // 0 = ceil(rt60 * fs)
  int max_order = -1;              // -1 = all images within rir_len
  bool equalize_power = true;      // scale images to 0 dB input SIR

  // Throws InfeasibleScenario if a field is outside its valid range or a
  // source/microphone lies outside the room.
  void validate() const;

  Vec3 mic_position(std::size_t mic) const;
  Vec3 source_position(std::size_t src) const;
  std::size_t effective_rir_len() const;

  static RoomScenario from_keyvalue(const KeyValueFile& kv);
  KeyValueFile to_keyvalue() const;
};

// Uniform wall reflection magnitude from Sabine's formula:
// alpha = 0.161 V / (S rt60), r = sqrt(1 - alpha), clamped to [0, 0.999].
// Throws InfeasibleScenario when alpha >= 1.
double rt60_to_reflection(const Vec3& room_dims, double rt60);

struct Rir {
  std::vector<double> taps;
  std::size_t source_idx = 0;
  std::size_t mic_idx = 0;
};

inline constexpr int kFractionalDelayTaps = 81;

// Allen-Berkley image-source impulse response. Each image contributes
// r^(reflections) / (4 pi dist) at delay dist / c * fs, spread by an
// 81-tap Hann-windowed sinc for the fractional part of the delay.
Rir generate_rir(const RoomScenario& scenario, std::size_t source_idx,
                 std::size_t mic_idx);

// Lower-level form used by generate_rir; positions in meters.
std::vector<double> image_source_rir(const Vec3& room_dims, const Vec3& source,
                                     const Vec3& receiver, double reflection,
                                     double speed_of_sound, double sample_rate,
                                     std::size_t length, int max_order);

}  // namespace fdtrinicon

#endif  // FDTRINICON_ROOM_HPP_

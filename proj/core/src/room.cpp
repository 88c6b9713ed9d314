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

#include "fdtrinicon/room.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fdtrinicon/error.hpp"

namespace fdtrinicon {
namespace {

constexpr double kSabine = 0.161;

bool strictly_inside(const Vec3& p, const Vec3& dims) {
  for (int i = 0; i < 3; ++i) {
    if (!(p[i] > 0.0 && p[i] < dims[i])) return false;
  }
  return true;
}

std::string describe(const Vec3& p) {
  return "(" + format_double(p[0]) + ", " + format_double(p[1]) + ", " +
         format_double(p[2]) + ")";
}

Vec3 vec3_from(const KeyValueFile& kv, const std::string& key, Vec3 fallback) {
  auto v = kv.get_doubles(key);
  if (!v) return fallback;
  if (v->size() != 3) throw FormatError("scenario: " + key + " needs 3 values");
  return {(*v)[0], (*v)[1], (*v)[2]};
}

double hann_sinc(double x) {
  constexpr double half = kFractionalDelayTaps / 2.0;
  if (std::abs(x) >= half) return 0.0;
  const double w = 0.5 * (1.0 + std::cos(std::numbers::pi * x / half));
  const double s = x == 0.0 ? 1.0
                            : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
  return w * s;
}

}  // namespace

void RoomScenario::validate() const {
  for (double d : room_dims) {
    if (!(d > 0.0)) throw InfeasibleScenario("room dimensions must be positive");
  }
  if (!(rt60 >= 0.1 && rt60 <= 1.0))
    throw InfeasibleScenario("rt60 must lie in [0.1, 1.0] s, got " +
                             format_double(rt60));
  if (!(mic_spacing > 0.0)) throw InfeasibleScenario("mic_spacing must be > 0");
  if (!(source_distance > 0.0))
    throw InfeasibleScenario("source_distance must be > 0");
  if (!(speed_of_sound > 0.0))
    throw InfeasibleScenario("speed_of_sound must be > 0");
  if (!(sample_rate > 0.0)) throw InfeasibleScenario("sample_rate must be > 0");
  if (!(occupancy > 0.0 && occupancy <= 1.0))
    throw InfeasibleScenario("occupancy must lie in (0, 1]");
  if (!(overlap >= 0.0 && overlap <= occupancy))
    throw InfeasibleScenario("overlap must lie in [0, occupancy]");
  if (overlap < 2.0 * occupancy - 1.0 - 1e-12)
    throw InfeasibleScenario(
        "overlap too small: two sources at this occupancy must overlap by at "
        "least 2*occupancy-1");
  if (block_len == 0) throw InfeasibleScenario("block_len must be > 0");
  if (!(mean_segment_s > 0.0))
    throw InfeasibleScenario("mean_segment_s must be > 0");
  if (!(ramp_ms >= 0.0)) throw InfeasibleScenario("ramp_ms must be >= 0");
  if (!(duration_s > 0.0)) throw InfeasibleScenario("duration_s must be > 0");
  if (std::isnan(noise_db)) throw InfeasibleScenario("noise_db is NaN");
  for (std::size_t i = 0; i < 2; ++i) {
    if (!strictly_inside(mic_position(i), room_dims))
      throw InfeasibleScenario("microphone " + std::to_string(i + 1) + " at " +
                               describe(mic_position(i)) + " is outside the room");
    if (!strictly_inside(source_position(i), room_dims))
      throw InfeasibleScenario("source " + std::to_string(i + 1) + " at " +
                               describe(source_position(i)) +
                               " is outside the room");
  }
  (void)rt60_to_reflection(room_dims, rt60);
}

Vec3 RoomScenario::mic_position(std::size_t mic) const {
  if (mic > 1) throw InvalidArgument("mic index must be 0 or 1");
  const double dx = (mic == 0 ? -0.5 : 0.5) * mic_spacing;
  return {array_center[0] + dx, array_center[1], array_center[2]};
}

Vec3 RoomScenario::source_position(std::size_t src) const {
  if (src > 1) throw InvalidArgument("source index must be 0 or 1");
  const double theta = source_doas[src] * std::numbers::pi / 180.0;
  return {array_center[0] + source_distance * std::sin(theta),
          array_center[1] + source_distance * std::cos(theta), array_center[2]};
}

std::size_t RoomScenario::effective_rir_len() const {
  if (rir_len > 0) return rir_len;
  return static_cast<std::size_t>(std::ceil(rt60 * sample_rate));
}

RoomScenario RoomScenario::from_keyvalue(const KeyValueFile& kv) {
  RoomScenario s;
  s.room_dims = vec3_from(kv, "room_dims", s.room_dims);
  s.array_center = vec3_from(kv, "array_center", s.array_center);
  if (auto v = kv.get_doubles("source_doas")) {
    if (v->size() != 2) throw FormatError("scenario: source_doas needs 2 values");
    s.source_doas = {(*v)[0], (*v)[1]};
  }
  s.rt60 = kv.get_double("rt60").value_or(s.rt60);
  s.mic_spacing = kv.get_double("mic_spacing").value_or(s.mic_spacing);
  s.source_distance = kv.get_double("source_distance").value_or(s.source_distance);
  s.speed_of_sound = kv.get_double("speed_of_sound").value_or(s.speed_of_sound);
  s.sample_rate = kv.get_double("sample_rate").value_or(s.sample_rate);
  s.noise_db = kv.get_double("noise_db").value_or(s.noise_db);
  s.occupancy = kv.get_double("occupancy").value_or(s.occupancy);
  s.overlap = kv.get_double("overlap").value_or(s.overlap);
  if (auto v = kv.get_int("seed")) {
    if (*v < 0) throw FormatError("scenario: seed must be non-negative");
    s.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto v = kv.get_int("block_len")) {
    if (*v <= 0) throw FormatError("scenario: block_len must be positive");
    s.block_len = static_cast<std::size_t>(*v);
  }
  s.mean_segment_s = kv.get_double("mean_segment_s").value_or(s.mean_segment_s);
  s.ramp_ms = kv.get_double("ramp_ms").value_or(s.ramp_ms);
  s.duration_s = kv.get_double("duration_s").value_or(s.duration_s);
  if (auto v = kv.get_int("rir_len")) {
    if (*v < 0) throw FormatError("scenario: rir_len must be >= 0");
    s.rir_len = static_cast<std::size_t>(*v);
  }
  if (auto v = kv.get_int("max_order")) s.max_order = static_cast<int>(*v);
  s.equalize_power = kv.get_bool("equalize_power").value_or(s.equalize_power);

  static const char* kKnown[] = {
      "room_dims", "array_center", "source_doas", "rt60", "mic_spacing",
      "source_distance", "speed_of_sound", "sample_rate", "noise_db",
      "occupancy", "overlap", "seed", "block_len", "mean_segment_s",
      "ramp_ms", "duration_s", "rir_len", "max_order", "equalize_power"};
  for (const auto& key : kv.keys()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown))
      throw FormatError("scenario: unknown key '" + key + "'");
  }
  return s;
}

KeyValueFile RoomScenario::to_keyvalue() const {
  KeyValueFile kv;
  kv.set("room_dims", std::vector<double>(room_dims.begin(), room_dims.end()));
  kv.set("rt60", rt60);
  kv.set("mic_spacing", mic_spacing);
  kv.set("array_center",
         std::vector<double>(array_center.begin(), array_center.end()));
  kv.set("source_doas",
         std::vector<double>(source_doas.begin(), source_doas.end()));
  kv.set("source_distance", source_distance);
  kv.set("speed_of_sound", speed_of_sound);
  kv.set("sample_rate", sample_rate);
  kv.set("noise_db", noise_db);
  kv.set("occupancy", occupancy);
  kv.set("overlap", overlap);
  kv.set("seed", std::to_string(seed));
  kv.set("block_len", std::to_string(block_len));
  kv.set("mean_segment_s", mean_segment_s);
  kv.set("ramp_ms", ramp_ms);
  kv.set("duration_s", duration_s);
  kv.set("rir_len", std::to_string(rir_len));
  kv.set("max_order", std::to_string(max_order));
  kv.set("equalize_power", equalize_power ? "true" : "false");
  return kv;
}

double rt60_to_reflection(const Vec3& room_dims, double rt60) {
  if (!(rt60 > 0.0)) throw InfeasibleScenario("rt60 must be positive");
  const double lx = room_dims[0], ly = room_dims[1], lz = room_dims[2];
  const double volume = lx * ly * lz;
  const double surface = 2.0 * (lx * ly + lx * lz + ly * lz);
  const double alpha = kSabine * volume / (surface * rt60);
  if (alpha >= 1.0)
    throw InfeasibleScenario("rt60 " + format_double(rt60) +
                             " s is too short for this room (Sabine absorption " +
                             format_double(alpha) + " >= 1)");
  return std::clamp(std::sqrt(1.0 - alpha), 0.0, 0.999);
}

std::vector<double> image_source_rir(const Vec3& room_dims, const Vec3& source,
                                     const Vec3& receiver, double reflection,
                                     double speed_of_sound, double sample_rate,
                                     std::size_t length, int max_order) {
  std::vector<double> h(length, 0.0);
  if (length == 0) return h;
  const double samples_per_meter = sample_rate / speed_of_sound;
  constexpr int half = kFractionalDelayTaps / 2;

  // Images farther than this cannot reach the response window.
  const double max_dist = (static_cast<double>(length) + half) / samples_per_meter;
  std::array<int, 3> nmax{};
  for (int i = 0; i < 3; ++i)
    nmax[i] = static_cast<int>(std::ceil(max_dist / (2.0 * room_dims[i]))) + 1;

  for (int mx = -nmax[0]; mx <= nmax[0]; ++mx) {
    for (int my = -nmax[1]; my <= nmax[1]; ++my) {
      for (int mz = -nmax[2]; mz <= nmax[2]; ++mz) {
        for (int q = 0; q < 8; ++q) {
          const std::array<int, 3> m{mx, my, mz};
          const std::array<int, 3> u{q & 1, (q >> 1) & 1, (q >> 2) & 1};
          int order = 0;
          double d2 = 0.0;
          for (int i = 0; i < 3; ++i) {
            // Image coordinate: (1 - 2u) * s + 2 m Lx; walls hit: |m - u| + |m|.
            const double img = (1 - 2 * u[i]) * source[i] + 2.0 * m[i] * room_dims[i];
            const double diff = img - receiver[i];
            d2 += diff * diff;
            order += std::abs(m[i] - u[i]) + std::abs(m[i]);
          }
          if (max_order >= 0 && order > max_order) continue;
          const double dist = std::sqrt(d2);
          if (dist > max_dist) continue;
          const double gain = std::pow(reflection, order) /
                              (4.0 * std::numbers::pi * std::max(dist, 1e-9));
          if (gain == 0.0) continue;
          const double delay = dist * samples_per_meter;
          const long long center = std::llround(delay);
          for (long long n = center - half; n <= center + half; ++n) {
            if (n < 0 || n >= static_cast<long long>(length)) continue;
            h[static_cast<std::size_t>(n)] +=
                gain * hann_sinc(static_cast<double>(n) - delay);
          }
        }
      }
    }
  }
  return h;
}

Rir generate_rir(const RoomScenario& scenario, std::size_t source_idx,
                 std::size_t mic_idx) {
  scenario.validate();
  const double r = rt60_to_reflection(scenario.room_dims, scenario.rt60);
  Rir rir;
  rir.source_idx = source_idx;
  rir.mic_idx = mic_idx;
  rir.taps = image_source_rir(
      scenario.room_dims, scenario.source_position(source_idx),
      scenario.mic_position(mic_idx), r, scenario.speed_of_sound,
      scenario.sample_rate, scenario.effective_rir_len(), scenario.max_order);
  return rir;
}

}  // namespace fdtrinicon

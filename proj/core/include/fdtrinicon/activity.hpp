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

#ifndef FDTRINICON_ACTIVITY_HPP_
#define FDTRINICON_ACTIVITY_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fdtrinicon/spectra.hpp"

namespace fdtrinicon {

// Per-block band powers of the input pair and of each output.
struct BlockPowers {
  std::vector<double> ex;
  std::vector<double> ey1;
  std::vector<double> ey2;

  std::size_t num_blocks() const { return ex.size(); }
};

struct DetectorConfig {
  std::size_t k_lo = 0;  // band edges, bins of the 4L-point transform
  std::size_t k_hi = 0;
  double alpha = 3.0;       // E_min = alpha * E_noise
  double rho = 0.25;        // "clearly lower" output/input power ratio
  double rho_confident = 0.15;
  bool confident = false;   // use rho_confident instead of rho

  // Noise-floor tracker. window_s <= 0 takes the minimum over the whole
  // signal.
  double smoothing = 0.8;
  double window_s = 0.0;
  double bias = 1.5;

  // Band edges nearest to lo_hz / hi_hz for 4L-point blocks at fs.
  static DetectorConfig for_band(double sample_rate, std::size_t filter_len,
                                 double lo_hz = 200.0, double hi_hz = 7000.0);
  // Throws InvalidArgument unless 1 <= k_lo < k_hi <= 2L, alpha > 1 and
  // 0 < rho_confident <= rho < 1.
  void validate(std::size_t filter_len) const;
  double effective_rho() const { return confident ? rho_confident : rho; }
};

// E_x(m) = sum_{k_lo..k_hi} (|X1|^2 + |X2|^2) / (2 (k_hi - k_lo + 1)),
// E_yp(m) = sum_{k_lo..k_hi} |Yp|^2 / (k_hi - k_lo + 1).
BlockPowers block_powers(std::span<const BlockSpectra> x,
                         std::span<const BlockSpectra> y, std::size_t k_lo,
                         std::size_t k_hi);

// Minimum-statistics noise floor: E_x is smoothed recursively
// (S(m) = a S(m-1) + (1-a) E_x(m), S(0) = E_x(0)); the floor at block m is
// `bias` times the minimum of S over a centered window of `window_blocks`,
// shifted at the edges to stay inside the signal (so a window of at least
// the signal length gives the global minimum).
// Values are floored at 1e-12. Needs at least 10 blocks.
std::vector<double> estimate_noise_floor(std::span<const double> ex,
                                         std::size_t window_blocks,
                                         double smoothing = 0.8,
                                         double bias = 1.5);

// (eps1, eps2) per block: 1 = source active.
using Label = std::array<std::uint8_t, 2>;
using ActivityLabels = std::vector<Label>;

// Per block: E_x < alpha * E_noise -> (0, 0); otherwise if exactly one
// output p has E_yp <= rho * E_x, source p alone is active (output p is
// the one that suppresses source p); otherwise (1, 1).
ActivityLabels classify_blocks(const BlockPowers& powers,
                               std::span<const double> noise_floor,
                               const DetectorConfig& cfg);

// Diagonal of B(m) = diag(eps1 / N, eps2 / N). With renormalize, source p is
// divided by its own active-block count instead of N.
std::vector<std::array<double, 2>> build_weight_matrices(
    const ActivityLabels& labels, std::size_t num_blocks, bool renormalize = false);

// Runs the whole detector on input and output spectra. The outputs are
// expected at the scale of their microphone images (see
// minimal_distortion_rescale); the rho test compares against input power.
ActivityLabels detect_activity(std::span<const BlockSpectra> x,
                               std::span<const BlockSpectra> y,
                               const DetectorConfig& cfg, double sample_rate,
                               std::size_t filter_len);

// CSV with header "block,eps1,eps2".
void save_labels_csv(const std::filesystem::path& path, const ActivityLabels& labels);
ActivityLabels load_labels_csv(const std::filesystem::path& path);

}  // namespace fdtrinicon

#endif  // FDTRINICON_ACTIVITY_HPP_

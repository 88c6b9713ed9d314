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

#include "fdtrinicon/activity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "fdtrinicon/csv.hpp"
#include "fdtrinicon/error.hpp"

namespace fdtrinicon {

DetectorConfig DetectorConfig::for_band(double sample_rate, std::size_t filter_len,
                                        double lo_hz, double hi_hz) {
  if (!(sample_rate > 0.0) || filter_len == 0)
    throw InvalidArgument("DetectorConfig::for_band: invalid sample rate or L");
  const double bin_hz = sample_rate / static_cast<double>(4 * filter_len);
  const auto max_bin = static_cast<long long>(2 * filter_len);
  auto to_bin = [&](double hz) {
    return static_cast<std::size_t>(
        std::clamp<long long>(std::llround(hz / bin_hz), 1, max_bin));
  };
  DetectorConfig cfg;
  cfg.k_lo = to_bin(lo_hz);
  cfg.k_hi = to_bin(hi_hz);
  return cfg;
}

void DetectorConfig::validate(std::size_t filter_len) const {
  if (!(k_lo >= 1 && k_lo < k_hi && k_hi <= 2 * filter_len))
    throw InvalidArgument("detector: need 1 <= k_lo < k_hi <= 2L (k_lo=" +
                          std::to_string(k_lo) + ", k_hi=" + std::to_string(k_hi) +
                          ")");
  if (!(alpha > 1.0)) throw InvalidArgument("detector: alpha must be > 1");
  if (!(rho_confident > 0.0 && rho_confident <= rho && rho < 1.0))
    throw InvalidArgument("detector: need 0 < rho_confident <= rho < 1");
  if (!(smoothing >= 0.0 && smoothing < 1.0))
    throw InvalidArgument("detector: smoothing must lie in [0, 1)");
  if (std::isnan(window_s)) throw InvalidArgument("detector: window_s is NaN");
  if (!(bias > 0.0)) throw InvalidArgument("detector: bias must be > 0");
}

BlockPowers block_powers(std::span<const BlockSpectra> x,
                         std::span<const BlockSpectra> y, std::size_t k_lo,
                         std::size_t k_hi) {
  if (x.size() != y.size())
    throw InvalidArgument("block_powers: input and output block counts differ");
  if (k_hi < k_lo) throw InvalidArgument("block_powers: bin range invalid");
  const double width = static_cast<double>(k_hi - k_lo + 1);
  BlockPowers p;
  p.ex.resize(x.size());
  p.ey1.resize(x.size());
  p.ey2.resize(x.size());
  for (std::size_t m = 0; m < x.size(); ++m) {
    for (const auto* spec : {&x[m][0], &x[m][1], &y[m][0], &y[m][1]}) {
      if (spec->size() <= k_hi)
        throw InvalidArgument("block_powers: bin range invalid for block size");
    }
    double sx = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      sx += std::norm(x[m][0][k]) + std::norm(x[m][1][k]);
      s1 += std::norm(y[m][0][k]);
      s2 += std::norm(y[m][1][k]);
    }
    p.ex[m] = sx / (2.0 * width);
    p.ey1[m] = s1 / width;
    p.ey2[m] = s2 / width;
  }
  return p;
}

std::vector<double> estimate_noise_floor(std::span<const double> ex,
                                         std::size_t window_blocks,
                                         double smoothing, double bias) {
  constexpr double kFloor = 1e-12;
  if (ex.size() < 10)
    throw InvalidArgument("estimate_noise_floor: need at least 10 blocks");
  if (window_blocks == 0) window_blocks = 1;
  const std::size_t n = ex.size();
  std::vector<double> smooth(n);
  smooth[0] = ex[0];
  for (std::size_t m = 1; m < n; ++m)
    smooth[m] = smoothing * smooth[m - 1] + (1.0 - smoothing) * ex[m];

  // Sliding minimum over a window of window_blocks centred on m, shifted to
  // stay inside the signal so every estimate sees the full window.
  const std::size_t win = std::min(window_blocks, n);
  const std::size_t back = (win - 1) / 2;
  std::vector<double> out(n);
  std::deque<std::size_t> dq;
  std::size_t next = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t lo = std::min(m >= back ? m - back : 0, n - win);
    const std::size_t hi = lo + win - 1;
    while (next <= hi) {
      while (!dq.empty() && smooth[dq.back()] >= smooth[next]) dq.pop_back();
      dq.push_back(next);
      ++next;
    }
    while (dq.front() < lo) dq.pop_front();
    out[m] = std::max(bias * smooth[dq.front()], kFloor);
  }
  return out;
}

ActivityLabels classify_blocks(const BlockPowers& powers,
                               std::span<const double> noise_floor,
                               const DetectorConfig& cfg) {
  const std::size_t n = powers.num_blocks();
  if (powers.ey1.size() != n || powers.ey2.size() != n || noise_floor.size() != n)
    throw InvalidArgument("classify_blocks: length mismatch");
  const double rho = cfg.effective_rho();
  ActivityLabels labels(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double ex = powers.ex[m];
    if (ex < cfg.alpha * noise_floor[m]) {
      labels[m] = {0, 0};
      continue;
    }
    const bool low1 = powers.ey1[m] <= rho * ex;
    const bool low2 = powers.ey2[m] <= rho * ex;
    if (low1 && !low2) {
      labels[m] = {1, 0};
    } else if (low2 && !low1) {
      labels[m] = {0, 1};
    } else {
      labels[m] = {1, 1};
    }
  }
  return labels;
}

std::vector<std::array<double, 2>> build_weight_matrices(const ActivityLabels& labels,
                                                         std::size_t num_blocks,
                                                         bool renormalize) {
  if (labels.size() != num_blocks)
    throw InvalidArgument("build_weight_matrices: labels must cover every block");
  std::array<double, 2> denom{static_cast<double>(num_blocks),
                              static_cast<double>(num_blocks)};
  if (renormalize) {
    for (std::size_t p = 0; p < 2; ++p) {
      std::size_t count = 0;
      for (const auto& l : labels) count += l[p];
      denom[p] = static_cast<double>(std::max<std::size_t>(count, 1));
    }
  }
  std::vector<std::array<double, 2>> b(num_blocks);
  for (std::size_t m = 0; m < num_blocks; ++m)
    b[m] = {labels[m][0] / denom[0], labels[m][1] / denom[1]};
  return b;
}

ActivityLabels detect_activity(std::span<const BlockSpectra> x,
                               std::span<const BlockSpectra> y,
                               const DetectorConfig& cfg, double sample_rate,
                               std::size_t filter_len) {
  cfg.validate(filter_len);
  const BlockPowers powers = block_powers(x, y, cfg.k_lo, cfg.k_hi);
  std::size_t window = powers.num_blocks();
  if (cfg.window_s > 0.0) {
    window = static_cast<std::size_t>(std::max<long long>(
        1, std::llround(cfg.window_s * sample_rate / static_cast<double>(filter_len))));
  }
  // The first three frames are partly zero history and the last may be a
  // partial block; their low power would drag the minimum down.
  const std::size_t n = powers.num_blocks();
  std::size_t lo = 0, hi = n;
  if (n >= 14) {
    lo = 3;
    hi = n - 1;
  }
  const auto inner = estimate_noise_floor(
      std::span<const double>(powers.ex).subspan(lo, hi - lo), window, cfg.smoothing,
      cfg.bias);
  std::vector<double> floor(n);
  for (std::size_t m = 0; m < n; ++m)
    floor[m] = inner[std::clamp(m, lo, hi - 1) - lo];
  return classify_blocks(powers, floor, cfg);
}

void save_labels_csv(const std::filesystem::path& path, const ActivityLabels& labels) {
  CsvTable t({"block", "eps1", "eps2"});
  for (std::size_t m = 0; m < labels.size(); ++m)
    t.add_row({std::to_string(m), std::to_string(labels[m][0]),
               std::to_string(labels[m][1])});
  t.save(path);
}

ActivityLabels load_labels_csv(const std::filesystem::path& path) {
  const CsvTable t = CsvTable::load(path);
  if (t.header() != std::vector<std::string>{"block", "eps1", "eps2"})
    throw FormatError("labels CSV: unexpected header in " + path.string());
  ActivityLabels labels;
  for (const auto& row : t.rows()) {
    auto bit = [&](const std::string& s) -> std::uint8_t {
      if (s == "0") return 0;
      if (s == "1") return 1;
      throw FormatError("labels CSV: epsilon must be 0 or 1, got '" + s + "'");
    };
    if (row[0] != std::to_string(labels.size()))
      throw FormatError("labels CSV: block indices must be consecutive from 0");
    labels.push_back({bit(row[1]), bit(row[2])});
  }
  return labels;
}

}  // namespace fdtrinicon

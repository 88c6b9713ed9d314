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

#include "fdtrinicon/activity_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fdtrinicon/error.hpp"

namespace fdtrinicon {

double ActivityPattern::occupancy(std::size_t src) const {
  const auto& a = active.at(src);
  if (a.empty()) return 0.0;
  return static_cast<double>(std::count(a.begin(), a.end(), 1)) /
         static_cast<double>(a.size());
}

double ActivityPattern::overlap() const {
  if (num_blocks() == 0) return 0.0;
  std::size_t both = 0;
  for (std::size_t m = 0; m < num_blocks(); ++m) both += active[0][m] && active[1][m];
  return static_cast<double>(both) / static_cast<double>(num_blocks());
}

ActivityPattern make_activity_pattern(std::size_t num_blocks, double occupancy,
                                      double overlap, std::uint64_t seed,
                                      double mean_segment_blocks) {
  if (!(occupancy > 0.0 && occupancy <= 1.0))
    throw InfeasibleScenario("occupancy must lie in (0, 1]");
  if (!(overlap >= 0.0 && overlap <= occupancy))
    throw InfeasibleScenario("overlap must lie in [0, occupancy]");
  if (overlap < 2.0 * occupancy - 1.0 - 1e-12)
    throw InfeasibleScenario("overlap must be at least 2*occupancy-1");
  if (!(mean_segment_blocks >= 1.0))
    throw InvalidArgument("mean segment length must be >= 1 block");

  const auto n = static_cast<double>(num_blocks);
  const auto both = static_cast<std::size_t>(std::llround(overlap * n));
  const auto single =
      static_cast<std::size_t>(std::llround((occupancy - overlap) * n));
  const std::size_t used = std::min(num_blocks, both + 2 * single);
  // state: 0 = off, 1 = source 1 only, 2 = source 2 only, 3 = both
  const std::array<std::size_t, 4> budget{num_blocks - used, single, single, both};

  std::mt19937_64 rng(seed);
  std::geometric_distribution<std::size_t> seg_len(1.0 / mean_segment_blocks);
  struct Segment {
    int state;
    std::size_t len;
  };
  std::vector<Segment> segments;
  for (int state = 0; state < 4; ++state) {
    std::size_t left = budget[static_cast<std::size_t>(state)];
    while (left > 0) {
      const std::size_t len = std::min(left, seg_len(rng) + 1);
      segments.push_back({state, len});
      left -= len;
    }
  }
  std::shuffle(segments.begin(), segments.end(), rng);

  ActivityPattern p;
  p.active[0].reserve(num_blocks);
  p.active[1].reserve(num_blocks);
  for (const auto& s : segments) {
    for (std::size_t i = 0; i < s.len && p.num_blocks() < num_blocks; ++i) {
      p.active[0].push_back((s.state & 1) ? 1 : 0);
      p.active[1].push_back((s.state & 2) ? 1 : 0);
    }
  }
  // Rounding can leave the budgets one or two blocks short of N.
  while (p.num_blocks() < num_blocks) {
    p.active[0].push_back(0);
    p.active[1].push_back(0);
  }
  return p;
}

}  // namespace fdtrinicon

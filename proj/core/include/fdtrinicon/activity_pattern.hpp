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

#ifndef FDTRINICON_ACTIVITY_PATTERN_HPP_
#define FDTRINICON_ACTIVITY_PATTERN_HPP_

#include <array>
#include <cstdint>
#include <vector>

namespace fdtrinicon {

// Ground-truth on/off state of both sources at block resolution.
struct ActivityPattern {
  std::array<std::vector<std::uint8_t>, 2> active;

  std::size_t num_blocks() const { return active[0].size(); }
  double occupancy(std::size_t src) const;
  double overlap() const;  // fraction of blocks with both sources on
};

// Random segment layout with exact per-state block budgets:
//   both on       : round(overlap * N)
//   only source p : round((occupancy - overlap) * N) each
//   both off      : the rest.
// Each budget is cut into segments of geometric length (mean
// mean_segment_blocks) and the segments are shuffled. Deterministic in seed.
ActivityPattern make_activity_pattern(std::size_t num_blocks, double occupancy,
                                      double overlap, std::uint64_t seed,
                                      double mean_segment_blocks = 62.5);

}  // namespace fdtrinicon

#endif  // FDTRINICON_ACTIVITY_PATTERN_HPP_

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

#ifndef FDTRINICON_BSS_EVAL_HPP_
#define FDTRINICON_BSS_EVAL_HPP_

#include <array>
#include <span>
#include <string>
#include <vector>

namespace fdtrinicon {

inline constexpr std::size_t kDefaultProjectionLen = 512;
inline constexpr double kDbCap = 100.0;

// estimate = s_target + e_interf + e_artif, all of length T + proj_len - 1.
struct Decomposition {
  std::vector<double> s_target;
  std::vector<double> e_interf;
  std::vector<double> e_artif;
  std::string diagnostic;  // non-empty when a regularized solve was needed
};

// s_target: projection of the estimate on delayed copies (0 .. proj_len-1) of
// references[assigned]. s_target + e_interf: projection on the delayed copies
// of all references. e_artif is the residual.
Decomposition decompose(std::span<const double> estimate,
                        std::span<const std::span<const double>> references,
                        std::size_t assigned,
                        std::size_t proj_len = kDefaultProjectionLen);

// 10 log10(num / den), clamped to +-kDbCap.
double ratio_db(double num, double den);

struct EvalScores {
  // Indexed by output channel.
  std::array<double, 2> sir_db{};
  std::array<double, 2> sdr_db{};
  // perm[q] is the reference assigned to output q.
  std::array<std::size_t, 2> perm{0, 1};
  std::size_t proj_len = kDefaultProjectionLen;
  std::string diagnostic;

  double mean_sir_db() const { return 0.5 * (sir_db[0] + sir_db[1]); }
  double mean_sdr_db() const { return 0.5 * (sdr_db[0] + sdr_db[1]); }
};

// Scores both output/reference assignments and keeps the one with the
// larger mean SIR.
EvalScores score(std::span<const std::span<const double>> outputs,
                 std::span<const std::span<const double>> references,
                 std::size_t proj_len = kDefaultProjectionLen);

}  // namespace fdtrinicon

#endif  // FDTRINICON_BSS_EVAL_HPP_

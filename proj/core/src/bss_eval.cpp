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

#include "fdtrinicon/bss_eval.hpp"

#include <algorithm>
#include <cmath>

#include "fdtrinicon/error.hpp"
#include "fdtrinicon/projection.hpp"
#include "fdtrinicon/signal.hpp"

namespace fdtrinicon {
namespace {

std::vector<std::span<const double>> to_vector(
    std::span<const std::span<const double>> s) {
  return {s.begin(), s.end()};
}

void check_inputs(std::span<const double> estimate,
                  std::span<const std::span<const double>> references,
                  std::size_t proj_len) {
  if (references.empty()) throw InvalidArgument("bss_eval: no references");
  if (proj_len == 0) throw InvalidArgument("bss_eval: proj_len must be >= 1");
  for (const auto& r : references) {
    if (r.size() != estimate.size())
      throw InvalidArgument("bss_eval: estimate and references differ in length");
  }
  if (estimate.empty()) throw InvalidArgument("bss_eval: empty signals");
}

// Per-output decomposition energies, the only thing score() needs.
struct Energies {
  double target = 0.0;
  double interf = 0.0;
  double distortion = 0.0;  // ||e_interf + e_artif||^2
};

Energies energies_from(std::span<const double> estimate,
                       const std::vector<double>& target_proj,
                       const std::vector<double>& all_proj) {
  Energies e;
  for (std::size_t n = 0; n < all_proj.size(); ++n) {
    const double est = n < estimate.size() ? estimate[n] : 0.0;
    const double st = target_proj[n];
    const double interf = all_proj[n] - st;
    const double dist = est - st;
    e.target += st * st;
    e.interf += interf * interf;
    e.distortion += dist * dist;
  }
  return e;
}

}  // namespace

double ratio_db(double num, double den) {
  if (num <= 0.0 && den <= 0.0) return 0.0;
  if (den <= 0.0) return kDbCap;
  if (num <= 0.0) return -kDbCap;
  return std::clamp(10.0 * std::log10(num / den), -kDbCap, kDbCap);
}

Decomposition decompose(std::span<const double> estimate,
                        std::span<const std::span<const double>> references,
                        std::size_t assigned, std::size_t proj_len) {
  check_inputs(estimate, references, proj_len);
  if (assigned >= references.size())
    throw InvalidArgument("bss_eval: assigned reference out of range");

  const DelayedSpanProjector own({references[assigned]}, proj_len);
  const DelayedSpanProjector all(to_vector(references), proj_len);
  const auto p_own = own.project(estimate);
  const auto p_all = all.project(estimate);

  Decomposition d;
  const std::size_t n = all.extended_len();
  d.s_target = p_own.projection;
  d.e_interf.resize(n);
  d.e_artif.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double est = i < estimate.size() ? estimate[i] : 0.0;
    d.e_interf[i] = p_all.projection[i] - d.s_target[i];
    d.e_artif[i] = est - p_all.projection[i];
  }
  if (own.regularized() || all.regularized()) d.diagnostic = all.regularized()
      ? all.diagnostic() : own.diagnostic();
  return d;
}

EvalScores score(std::span<const std::span<const double>> outputs,
                 std::span<const std::span<const double>> references,
                 std::size_t proj_len) {
  if (outputs.size() != 2 || references.size() != 2)
    throw InvalidArgument("bss_eval: exactly two outputs and two references");
  for (const auto& o : outputs) check_inputs(o, references, proj_len);

  const DelayedSpanProjector single0({references[0]}, proj_len);
  const DelayedSpanProjector single1({references[1]}, proj_len);
  const DelayedSpanProjector all(to_vector(references), proj_len);
  const DelayedSpanProjector* single[2] = {&single0, &single1};

  // e[q][j]: energies of output q scored against reference j.
  Energies e[2][2];
  for (std::size_t q = 0; q < 2; ++q) {
    const auto p_all = all.project(outputs[q]);
    for (std::size_t j = 0; j < 2; ++j) {
      const auto p_own = single[j]->project(outputs[q]);
      e[q][j] = energies_from(outputs[q], p_own.projection, p_all.projection);
    }
  }

  auto eval = [&](std::array<std::size_t, 2> perm) {
    EvalScores s;
    s.perm = perm;
    s.proj_len = proj_len;
    for (std::size_t q = 0; q < 2; ++q) {
      const Energies& en = e[q][perm[q]];
      s.sir_db[q] = ratio_db(en.target, en.interf);
      s.sdr_db[q] = ratio_db(en.target, en.distortion);
    }
    return s;
  };
  EvalScores direct = eval({0, 1});
  EvalScores swapped = eval({1, 0});
  EvalScores best = swapped.mean_sir_db() > direct.mean_sir_db() ? swapped : direct;
  for (const auto* p : {&single0, &single1, &all}) {
    if (p->regularized()) {
      best.diagnostic = p->diagnostic();
      break;
    }
  }
  return best;
}

}  // namespace fdtrinicon

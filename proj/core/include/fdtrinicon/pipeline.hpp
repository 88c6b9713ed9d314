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

#ifndef FDTRINICON_PIPELINE_HPP_
#define FDTRINICON_PIPELINE_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "fdtrinicon/activity.hpp"
#include "fdtrinicon/keyvalue.hpp"
#include "fdtrinicon/signal.hpp"
#include "fdtrinicon/trinicon.hpp"

namespace fdtrinicon {

struct PipelineOptions {
  // Start pass 2 from the pass-1 filter instead of the shifted impulse.
  bool warm_start = false;
  // Divide each source's weights by its active-block count instead of N.
  bool renormalize = false;
};

struct LabelSummary {
  std::size_t none = 0;
  std::size_t only1 = 0;
  std::size_t only2 = 0;
  std::size_t both = 0;
};

LabelSummary summarize(const ActivityLabels& labels);

struct PipelineResult {
  MultichannelSignal outputs;
  MultichannelSignal pass1_outputs;  // the single-pass result
  ActivityLabels labels;
  DemixingFilter filter;
  std::vector<double> pass1_trace;
  std::vector<double> pass2_trace;
  bool fallback = false;
  std::vector<std::string> warnings;
};

// Pass 1 with uniform weights, activity detection on its outputs, then pass 2
// with per-block column weights.
PipelineResult separate_two_pass(const MultichannelSignal& mic,
                                 const TriniconConfig& cfg,
                                 const DetectorConfig& detector,
                                 const PipelineOptions& opts = {});

// Pass 2 alone: run_offline with the column weights built from `labels`,
// started from `initial` or the shifted impulse.
TriniconResult separate_with_labels(const MultichannelSignal& mic,
                                    const TriniconConfig& cfg,
                                    const ActivityLabels& labels,
                                    bool renormalize = false,
                                    const DemixingFilter* initial = nullptr);

// Key-value record: config echo, label counts, cost traces, warnings.
KeyValueFile pipeline_diagnostics(const PipelineResult& result,
                                  const TriniconConfig& cfg,
                                  const DetectorConfig& detector,
                                  const PipelineOptions& opts);

KeyValueFile single_pass_diagnostics(const TriniconResult& result,
                                     const TriniconConfig& cfg);

}  // namespace fdtrinicon

#endif  // FDTRINICON_PIPELINE_HPP_

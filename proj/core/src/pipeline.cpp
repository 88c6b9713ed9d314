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

#include "fdtrinicon/pipeline.hpp"

#include "fdtrinicon/error.hpp"
#include "fdtrinicon/spectra.hpp"

namespace fdtrinicon {

LabelSummary summarize(const ActivityLabels& labels) {
  LabelSummary s;
  for (const auto& l : labels) {
    if (l[0] && l[1]) {
      ++s.both;
    } else if (l[0]) {
      ++s.only1;
    } else if (l[1]) {
      ++s.only2;
    } else {
      ++s.none;
    }
  }
  return s;
}

PipelineResult separate_two_pass(const MultichannelSignal& mic,
                                 const TriniconConfig& cfg,
                                 const DetectorConfig& detector,
                                 const PipelineOptions& opts) {
  if (mic.num_channels() != 2)
    throw InvalidArgument("separate_two_pass: input must have two channels");
  cfg.validate();
  detector.validate(cfg.filter_len);

  TriniconResult pass1 = run_offline(mic, cfg);

  const auto x = block_spectra(mic, cfg.filter_len);
  // Detection compares output power against input power, so the outputs are
  // brought back to microphone scale first.
  const auto y = block_spectra(
      cfg.post_scale ? pass1.outputs : minimal_distortion_rescale(pass1.outputs, mic),
      cfg.filter_len);
  ActivityLabels labels =
      detect_activity(x, y, detector, mic.sample_rate(), cfg.filter_len);

  const LabelSummary counts = summarize(labels);
  if (counts.none == labels.size()) {
    return PipelineResult{pass1.outputs,
                          std::move(pass1.outputs),
                          std::move(labels),
                          std::move(pass1.filter),
                          pass1.cost_trace,
                          {},
                          true,
                          {"all blocks labeled inactive; returning first-pass result"}};
  }

  TriniconResult pass2 = separate_with_labels(mic, cfg, labels, opts.renormalize,
                                              opts.warm_start ? &pass1.filter : nullptr);

  PipelineResult r{std::move(pass2.outputs), std::move(pass1.outputs), std::move(labels),
                   std::move(pass2.filter),
                   std::move(pass1.cost_trace), std::move(pass2.cost_trace), false, {}};
  if (counts.only1 + counts.both == 0 || counts.only2 + counts.both == 0)
    r.warnings.push_back("one source never detected active; its filter column is not updated");
  return r;
}

TriniconResult separate_with_labels(const MultichannelSignal& mic,
                                    const TriniconConfig& cfg,
                                    const ActivityLabels& labels, bool renormalize,
                                    const DemixingFilter* initial) {
  const auto weights = build_weight_matrices(labels, labels.size(), renormalize);
  return run_offline(mic, cfg, std::span<const ColumnWeights>(weights), initial);
}

namespace {

void echo_config(KeyValueFile& kv, const TriniconConfig& cfg) {
  kv.set_int("filter_len", static_cast<long long>(cfg.filter_len));
  kv.set_int("iterations", static_cast<long long>(cfg.iterations));
  kv.set("mu", cfg.mu);
  kv.set_int("init_shift", static_cast<long long>(cfg.init_shift));
  kv.set_int("psd_window", static_cast<long long>(cfg.psd_window));
  kv.set_bool("post_scale", cfg.post_scale);
}

}  // namespace

KeyValueFile pipeline_diagnostics(const PipelineResult& result,
                                  const TriniconConfig& cfg,
                                  const DetectorConfig& detector,
                                  const PipelineOptions& opts) {
  KeyValueFile kv;
  kv.set("mode", std::string("two_pass"));
  echo_config(kv, cfg);
  kv.set_int("k_lo", static_cast<long long>(detector.k_lo));
  kv.set_int("k_hi", static_cast<long long>(detector.k_hi));
  kv.set("alpha", detector.alpha);
  kv.set("rho", detector.effective_rho());
  kv.set_bool("warm_start", opts.warm_start);
  kv.set_bool("renormalize", opts.renormalize);
  const LabelSummary s = summarize(result.labels);
  kv.set_int("num_blocks", static_cast<long long>(result.labels.size()));
  kv.set_int("labels_none", static_cast<long long>(s.none));
  kv.set_int("labels_only1", static_cast<long long>(s.only1));
  kv.set_int("labels_only2", static_cast<long long>(s.only2));
  kv.set_int("labels_both", static_cast<long long>(s.both));
  kv.set_bool("fallback", result.fallback);
  kv.set("pass1_cost_trace", result.pass1_trace);
  kv.set("pass2_cost_trace", result.pass2_trace);
  kv.set_list("warnings", result.warnings);
  return kv;
}

KeyValueFile single_pass_diagnostics(const TriniconResult& result,
                                     const TriniconConfig& cfg) {
  KeyValueFile kv;
  kv.set("mode", std::string("single_pass"));
  echo_config(kv, cfg);
  kv.set_int("iterations_run", static_cast<long long>(result.iterations));
  kv.set_bool("early_stopped", result.early_stopped);
  kv.set("cost_trace", result.cost_trace);
  return kv;
}

}  // namespace fdtrinicon

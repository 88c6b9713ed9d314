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

#include "fdtrinicon/signal.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fdtrinicon/error.hpp"
#include "fdtrinicon/spectra.hpp"

namespace fdtrinicon {

MultichannelSignal::MultichannelSignal(std::size_t num_channels,
                                       std::size_t num_samples,
                                       double sample_rate)
    : channels_(num_channels, std::vector<double>(num_samples, 0.0)),
      sample_rate_(sample_rate) {
  if (!(sample_rate > 0.0))
    throw InvalidArgument("MultichannelSignal: sample_rate must be positive");
}

MultichannelSignal::MultichannelSignal(std::vector<std::vector<double>> channels,
                                       double sample_rate)
    : channels_(std::move(channels)), sample_rate_(sample_rate) {
  if (!(sample_rate > 0.0))
    throw InvalidArgument("MultichannelSignal: sample_rate must be positive");
  for (const auto& ch : channels_) {
    if (ch.size() != channels_.front().size())
      throw InvalidArgument("MultichannelSignal: channels differ in length");
  }
}

FrameParams FrameParams::for_signal(std::size_t signal_len,
                                    std::size_t filter_len) {
  if (filter_len == 0)
    throw InvalidArgument("FrameParams: filter length must be positive");
  return FrameParams{filter_len, (signal_len + filter_len - 1) / filter_len};
}

void frame_channel(std::span<const double> x, std::size_t filter_len,
                   std::size_t m, std::span<double> out) {
  const std::size_t n = 4 * filter_len;
  if (out.size() != n)
    throw InvalidArgument("frame_channel: output must hold 4L samples");
  // First sample of the frame is mL - 3L; may be negative.
  const long long start = static_cast<long long>(m * filter_len) -
                          3 * static_cast<long long>(filter_len);
  const long long len = static_cast<long long>(x.size());
  for (std::size_t i = 0; i < n; ++i) {
    const long long idx = start + static_cast<long long>(i);
    out[i] = (idx >= 0 && idx < len) ? x[static_cast<std::size_t>(idx)] : 0.0;
  }
}

std::vector<Frame> frame_blocks(const MultichannelSignal& signal,
                                const FrameParams& params) {
  if (params.filter_len == 0)
    throw InvalidArgument("frame_blocks: filter length must be positive");
  std::vector<Frame> frames(params.num_blocks);
  for (std::size_t m = 0; m < params.num_blocks; ++m) {
    frames[m].resize(signal.num_channels());
    for (std::size_t c = 0; c < signal.num_channels(); ++c) {
      frames[m][c].resize(params.block_len());
      frame_channel(signal.channel(c), params.filter_len, m, frames[m][c]);
    }
  }
  return frames;
}

std::vector<BlockSpectra> block_spectra(const MultichannelSignal& signal,
                                        std::size_t filter_len) {
  if (signal.num_channels() != 2)
    throw InvalidArgument("block_spectra: two-channel signal required");
  const FrameParams params = FrameParams::for_signal(signal.num_samples(), filter_len);
  RealFft fft(params.block_len());
  std::vector<double> frame(params.block_len());
  std::vector<BlockSpectra> out(params.num_blocks);
  for (std::size_t m = 0; m < params.num_blocks; ++m) {
    for (std::size_t c = 0; c < 2; ++c) {
      frame_channel(signal.channel(c), filter_len, m, frame);
      out[m][c].resize(fft.num_bins());
      fft.forward(frame, out[m][c]);
    }
  }
  return out;
}

double energy(std::span<const double> x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

double mean_power(std::span<const double> x) {
  return x.empty() ? 0.0 : energy(x) / static_cast<double>(x.size());
}

}  // namespace fdtrinicon

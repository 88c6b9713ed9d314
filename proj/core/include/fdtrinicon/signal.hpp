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

#ifndef FDTRINICON_SIGNAL_HPP_
#define FDTRINICON_SIGNAL_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace fdtrinicon {

inline constexpr double kDefaultSampleRate = 16000.0;

// Sampled audio, channel-major. All channels share one length.
class MultichannelSignal {
 public:
  MultichannelSignal() = default;
  MultichannelSignal(std::size_t num_channels, std::size_t num_samples,
                     double sample_rate = kDefaultSampleRate);
  MultichannelSignal(std::vector<std::vector<double>> channels,
                     double sample_rate = kDefaultSampleRate);

  std::size_t num_channels() const { return channels_.size(); }
  std::size_t num_samples() const {
    return channels_.empty() ? 0 : channels_.front().size();
  }
  double sample_rate() const { return sample_rate_; }

  std::span<double> channel(std::size_t c) { return channels_.at(c); }
  std::span<const double> channel(std::size_t c) const {
    return channels_.at(c);
  }
  const std::vector<std::vector<double>>& channels() const {
    return channels_;
  }

  double& operator()(std::size_t c, std::size_t n) { return channels_[c][n]; }
  double operator()(std::size_t c, std::size_t n) const {
    return channels_[c][n];
  }

 private:
  std::vector<std::vector<double>> channels_;
  double sample_rate_ = kDefaultSampleRate;
};

// Block layout shared by every block-domain computation: frames of 4L
// samples advancing by L, frame m holding samples mL-3L .. mL+L-1.
struct FrameParams {
  std::size_t filter_len = 0;
  std::size_t num_blocks = 0;

  std::size_t block_len() const { return 4 * filter_len; }
  std::size_t hop() const { return filter_len; }

  // num_blocks = ceil(signal_len / L); a trailing partial block is kept.
  static FrameParams for_signal(std::size_t signal_len, std::size_t filter_len);
};

// frames[m][c] is the 4L-sample frame m of channel c. Indices outside the
// signal read as zero.
using Frame = std::vector<std::vector<double>>;

std::vector<Frame> frame_blocks(const MultichannelSignal& signal,
                                const FrameParams& params);

// Single-channel variant writing frame m into `out` (size 4L).
void frame_channel(std::span<const double> x, std::size_t filter_len,
                   std::size_t m, std::span<double> out);

double energy(std::span<const double> x);
double mean_power(std::span<const double> x);

}  // namespace fdtrinicon

#endif  // FDTRINICON_SIGNAL_HPP_

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

#ifndef FDTRINICON_WAV_HPP_
#define FDTRINICON_WAV_HPP_

#include <filesystem>
#include <optional>

#include "fdtrinicon/signal.hpp"

namespace fdtrinicon {

enum class WavEncoding { kPcm16, kFloat32 };

struct WavExpectations {
  std::optional<std::size_t> channels;
  std::optional<double> sample_rate;
};

// RIFF/WAVE reader for PCM16 and IEEE float32 (plain or
// WAVE_FORMAT_EXTENSIBLE), 1 or 2 channels. PCM16 samples map to v/32768.
MultichannelSignal load_wav(const std::filesystem::path& path,
                            const WavExpectations& expect = {});

// PCM16 output rounds to nearest and saturates at [-32768, 32767].
void save_wav(const std::filesystem::path& path,
              const MultichannelSignal& signal,
              WavEncoding encoding = WavEncoding::kPcm16);

}  // namespace fdtrinicon

#endif  // FDTRINICON_WAV_HPP_

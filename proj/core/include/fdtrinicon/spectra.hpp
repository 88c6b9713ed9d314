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

#ifndef FDTRINICON_SPECTRA_HPP_
#define FDTRINICON_SPECTRA_HPP_

#include <array>
#include <vector>

#include "fdtrinicon/fft.hpp"
#include "fdtrinicon/signal.hpp"

namespace fdtrinicon {

// Spectra of both channels of one block. Either all 4L bins or the
// non-redundant 2L+1; consumers only index the bins they need.
using BlockSpectra = std::array<std::vector<Complex>, 2>;

// Half spectra (2L+1 bins) of every 4L frame of a two-channel signal.
std::vector<BlockSpectra> block_spectra(const MultichannelSignal& signal,
                                        std::size_t filter_len);

}  // namespace fdtrinicon

#endif  // FDTRINICON_SPECTRA_HPP_

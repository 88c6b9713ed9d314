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

#ifndef FDTRINICON_FILTER_IO_HPP_
#define FDTRINICON_FILTER_IO_HPP_

#include <filesystem>

#include "fdtrinicon/trinicon.hpp"

namespace fdtrinicon {

// Binary demixing-filter file, little-endian:
//   bytes 0-3   magic "FDTW"
//   u32         format version (1)
//   u32         L
//   u32         init shift
//   f64 x 4L    taps of w11, w12, w21, w22 in that order
void save_filter(const std::filesystem::path& path, const DemixingFilter& filter);
DemixingFilter load_filter(const std::filesystem::path& path);

}  // namespace fdtrinicon

#endif  // FDTRINICON_FILTER_IO_HPP_

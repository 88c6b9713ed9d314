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

#include "fdtrinicon/filter_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace fdtrinicon {
namespace {

constexpr char kMagic[4] = {'F', 'D', 'T', 'W'};
constexpr std::uint32_t kVersion = 1;

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i)
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

void save_filter(const std::filesystem::path& path, const DemixingFilter& filter) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put_le(out, kVersion, 4);
  put_le(out, filter.length(), 4);
  put_le(out, filter.init_shift(), 4);
  for (std::size_t p = 0; p < 2; ++p) {
    for (std::size_t q = 0; q < 2; ++q) {
      for (double v : filter.w(p, q)) put_le(out, std::bit_cast<std::uint64_t>(v), 8);
    }
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write filter file: " + path.string());
  os.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
}

DemixingFilter load_filter(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open filter file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FormatError("not a demixing-filter file: " + path.string());
  const auto version = get_le(bytes.data() + 4, 4);
  if (version != kVersion)
    throw FormatError("unsupported filter file version " + std::to_string(version));
  const auto length = static_cast<std::size_t>(get_le(bytes.data() + 8, 4));
  const auto shift = static_cast<std::size_t>(get_le(bytes.data() + 12, 4));
  if (length == 0 || bytes.size() != 16 + 4 * length * 8)
    throw FormatError("filter file size does not match its header: " + path.string());
  DemixingFilter f(length, shift);
  const std::uint8_t* p = bytes.data() + 16;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      for (double& v : f.w(a, b)) {
        v = std::bit_cast<double>(get_le(p, 8));
        p += 8;
      }
    }
  }
  return f;
}

}  // namespace fdtrinicon

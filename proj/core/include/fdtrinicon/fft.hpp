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

#ifndef FDTRINICON_FFT_HPP_
#define FDTRINICON_FFT_HPP_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fdtrinicon {

using Complex = std::complex<double>;

// Transform conventions used everywhere: unnormalized forward transform,
// 1/N-scaled inverse.
//
// RealFft works on the non-redundant half spectrum (N/2 + 1 bins). Each
// instance owns scratch buffers, so share plans across threads by giving
// every thread its own instance.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t num_bins() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<Complex> out);
  // Reads only the half spectrum; the output is real by construction.
  void inverse(std::span<const Complex> in, std::span<double> out);

 private:
  struct Impl;
  std::size_t n_ = 0;
  std::unique_ptr<Impl> impl_;
};

class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);
  ~ComplexFft();
  ComplexFft(ComplexFft&&) noexcept;
  ComplexFft& operator=(ComplexFft&&) noexcept;
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  std::size_t size() const { return n_; }
  void forward(std::span<const Complex> in, std::span<Complex> out);
  void inverse(std::span<const Complex> in, std::span<Complex> out);

 private:
  struct Impl;
  std::size_t n_ = 0;
  std::unique_ptr<Impl> impl_;
};

// Full-length spectrum of one channel of a framed block.
struct SpectralBlock {
  std::vector<Complex> bins;
  std::size_t block_index = 0;
};

// Full 4L-point transform of a frame. Throws if the frame length is not a
// multiple of 4 (i.e. not 4L for some L).
SpectralBlock dft_block(std::span<const double> frame,
                        std::size_t block_index = 0);
// Inverse of dft_block. The imaginary part of the result is dropped; use
// ComplexFft directly when it matters.
std::vector<double> idft_block(const SpectralBlock& block);

// Expands a half spectrum (N/2+1 bins) to all N bins by conjugate symmetry.
std::vector<Complex> expand_half_spectrum(std::span<const Complex> half,
                                          std::size_t n);

// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

// Full linear convolution of a and b (length a+b-1) computed by FFT.
std::vector<double> convolve(std::span<const double> a,
                             std::span<const double> b);

}  // namespace fdtrinicon

#endif  // FDTRINICON_FFT_HPP_

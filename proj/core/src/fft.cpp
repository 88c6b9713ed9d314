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

#include "fdtrinicon/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "fdtrinicon/error.hpp"

namespace fdtrinicon {
namespace {

// FFTW's planner is not re-entrant; execution with fresh arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

struct RealFft::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  std::vector<double> real_buf;
  std::vector<Complex> cplx_buf;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

RealFft::RealFft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n == 0) throw InvalidArgument("RealFft: size must be positive");
  impl_->real_buf.assign(n, 0.0);
  impl_->cplx_buf.assign(n / 2 + 1, Complex{});
  std::lock_guard<std::mutex> lock(planner_mutex());
  const int ni = static_cast<int>(n);
  impl_->fwd = fftw_plan_dft_r2c_1d(ni, impl_->real_buf.data(),
                                    as_fftw(impl_->cplx_buf.data()), kPlanFlags);
  impl_->inv = fftw_plan_dft_c2r_1d(ni, as_fftw(impl_->cplx_buf.data()),
                                    impl_->real_buf.data(), kPlanFlags);
  if (!impl_->fwd || !impl_->inv)
    throw NumericalError("RealFft: FFTW planning failed");
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(std::span<const double> in, std::span<Complex> out) {
  if (in.size() != n_ || out.size() != num_bins())
    throw InvalidArgument("RealFft::forward: size mismatch");
  std::copy(in.begin(), in.end(), impl_->real_buf.begin());
  fftw_execute_dft_r2c(impl_->fwd, impl_->real_buf.data(), as_fftw(out.data()));
}

void RealFft::inverse(std::span<const Complex> in, std::span<double> out) {
  if (in.size() != num_bins() || out.size() != n_)
    throw InvalidArgument("RealFft::inverse: size mismatch");
  // c2r destroys its input.
  std::copy(in.begin(), in.end(), impl_->cplx_buf.begin());
  fftw_execute_dft_c2r(impl_->inv, as_fftw(impl_->cplx_buf.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
}

struct ComplexFft::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  std::vector<Complex> buf_in;
  std::vector<Complex> buf_out;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

ComplexFft::ComplexFft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n == 0) throw InvalidArgument("ComplexFft: size must be positive");
  impl_->buf_in.assign(n, Complex{});
  impl_->buf_out.assign(n, Complex{});
  std::lock_guard<std::mutex> lock(planner_mutex());
  const int ni = static_cast<int>(n);
  impl_->fwd = fftw_plan_dft_1d(ni, as_fftw(impl_->buf_in.data()),
                                as_fftw(impl_->buf_out.data()), FFTW_FORWARD,
                                kPlanFlags);
  impl_->inv = fftw_plan_dft_1d(ni, as_fftw(impl_->buf_in.data()),
                                as_fftw(impl_->buf_out.data()), FFTW_BACKWARD,
                                kPlanFlags);
  if (!impl_->fwd || !impl_->inv)
    throw NumericalError("ComplexFft: FFTW planning failed");
}

ComplexFft::~ComplexFft() = default;
ComplexFft::ComplexFft(ComplexFft&&) noexcept = default;
ComplexFft& ComplexFft::operator=(ComplexFft&&) noexcept = default;

void ComplexFft::forward(std::span<const Complex> in, std::span<Complex> out) {
  if (in.size() != n_ || out.size() != n_)
    throw InvalidArgument("ComplexFft::forward: size mismatch");
  std::copy(in.begin(), in.end(), impl_->buf_in.begin());
  fftw_execute_dft(impl_->fwd, as_fftw(impl_->buf_in.data()), as_fftw(out.data()));
}

void ComplexFft::inverse(std::span<const Complex> in, std::span<Complex> out) {
  if (in.size() != n_ || out.size() != n_)
    throw InvalidArgument("ComplexFft::inverse: size mismatch");
  std::copy(in.begin(), in.end(), impl_->buf_in.begin());
  fftw_execute_dft(impl_->inv, as_fftw(impl_->buf_in.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(n_);
  for (Complex& v : out) v *= scale;
}

SpectralBlock dft_block(std::span<const double> frame, std::size_t block_index) {
  if (frame.empty() || frame.size() % 4 != 0)
    throw InvalidArgument("dft_block: frame length must be 4L");
  RealFft fft(frame.size());
  std::vector<Complex> half(fft.num_bins());
  fft.forward(frame, half);
  return SpectralBlock{expand_half_spectrum(half, frame.size()), block_index};
}

std::vector<double> idft_block(const SpectralBlock& block) {
  const std::size_t n = block.bins.size();
  if (n == 0 || n % 4 != 0)
    throw InvalidArgument("idft_block: block length must be 4L");
  ComplexFft fft(n);
  std::vector<Complex> time(n);
  fft.inverse(block.bins, time);
  std::vector<double> out(n);
  std::transform(time.begin(), time.end(), out.begin(),
                 [](const Complex& c) { return c.real(); });
  return out;
}

std::vector<Complex> expand_half_spectrum(std::span<const Complex> half,
                                          std::size_t n) {
  if (half.size() != n / 2 + 1)
    throw InvalidArgument("expand_half_spectrum: expected N/2+1 bins");
  std::vector<Complex> full(n);
  std::copy(half.begin(), half.end(), full.begin());
  for (std::size_t k = n / 2 + 1; k < n; ++k) full[k] = std::conj(half[n - k]);
  return full;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> convolve(std::span<const double> a,
                             std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  RealFft fft(n);
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<Complex> fa(fft.num_bins()), fb(fft.num_bins());
  fft.forward(pa, fa);
  fft.forward(pb, fb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  fft.inverse(fa, pa);
  pa.resize(out_len);
  return pa;
}

}  // namespace fdtrinicon

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

#ifndef FDTRINICON_TRINICON_HPP_
#define FDTRINICON_TRINICON_HPP_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fdtrinicon/error.hpp"
#include "fdtrinicon/fft.hpp"
#include "fdtrinicon/signal.hpp"
#include "fdtrinicon/spectra.hpp"

namespace fdtrinicon {

// 2x2 MIMO FIR demixing system. w(p, q) is the filter from input p to
// output q, so y_q = sum_p w(p, q) * x_p. Taps beyond L-1 are zero.
class DemixingFilter {
 public:
  DemixingFilter() = default;
  explicit DemixingFilter(std::size_t length, std::size_t init_shift = 0);

  std::size_t length() const { return length_; }
  std::size_t init_shift() const { return init_shift_; }

  std::span<double> w(std::size_t p, std::size_t q) { return taps_.at(p * 2 + q); }
  std::span<const double> w(std::size_t p, std::size_t q) const {
    return taps_.at(p * 2 + q);
  }

  bool all_finite() const;

 private:
  std::size_t length_ = 0;
  std::size_t init_shift_ = 0;
  std::array<std::vector<double>, 4> taps_;
};

// w11 = w22 = delta(n - shift), cross filters zero.
DemixingFilter init_filters(std::size_t length, std::size_t shift);

// Per-bin 4L-point spectra of the four filters, indexed like w(p, q).
using FilterSpectrum = std::array<std::vector<Complex>, 4>;

FilterSpectrum filter_spectrum(const DemixingFilter& filter);

// Back to the time domain, keep taps 0..L-1, discard the circular-wrap
// region L..4L-1. Imaginary parts up to 1e-8 (relative to the largest tap)
// are treated as round-off; above 1e-6 a NumericalError is thrown.
DemixingFilter constrain_filter(const FilterSpectrum& spectrum,
                                std::size_t length, std::size_t init_shift = 0);

// Exact linear convolution y_q = sum_p w_pq * x_p, realized by overlap-save
// on 4L blocks. Output length equals input length.
MultichannelSignal forward_filter(const DemixingFilter& filter,
                                  const MultichannelSignal& mic);

using Matrix2c = Eigen::Matrix2cd;

// Cross-power matrices per bin. Entry (a, b) accumulates conj(Y_a) Y_b,
// i.e. Y^H Y for a row vector of channel spectra.
struct PsdMatrix {
  std::vector<Matrix2c> bins;
  double weight_sum = 0.0;
};

PsdMatrix estimate_psd(std::span<const BlockSpectra> blocks,
                       std::span<const double> weights);

// 2 W (Phi - diag Phi) diag(Phi)^-1 B, with B = diag(b).
Matrix2c natural_gradient_bin(const Matrix2c& w, const Matrix2c& phi,
                              const Eigen::Vector2d& b = Eigen::Vector2d::Ones());

// log Phi_11 + log Phi_22 - log det Phi; zero iff Phi is diagonal.
double bin_cost(const Matrix2c& phi);

// Sum over blocks and bins of weight(i) * bin_cost(Phi(i)). Each PsdMatrix
// is the local estimate belonging to one block. With 2L+1 bins (half
// spectrum) the interior bins count twice, so both layouts give the
// full-spectrum sum.
double cost(std::span<const PsdMatrix> local_psds, std::span<const double> weights);

// Local PSD of block i: unweighted sum of the blocks inside a window of
// `window` blocks around i (clipped at the ends).
std::vector<PsdMatrix> local_psds(std::span<const BlockSpectra> blocks,
                                  std::size_t window);

double cost(std::span<const BlockSpectra> blocks, std::span<const double> weights,
            std::size_t window);

// Output frames restricted to their last 2L samples (the part of the 4L
// circular convolution that equals the linear one), transformed back.
std::vector<BlockSpectra> constrained_output_spectra(
    const DemixingFilter& filter, std::span<const BlockSpectra> input_spectra);

struct TriniconConfig {
  std::size_t filter_len = 512;
  std::size_t iterations = 100;
  double mu = 0.1;
  std::size_t init_shift = 10;
  // Blocks pooled into each local PSD estimate.
  std::size_t psd_window = 16;
  // Per-block beta weights; empty means uniform 1/N.
  std::vector<double> block_weights;
  double diag_floor = 1e-12;
  double early_stop_tol = 1e-5;
  std::size_t early_stop_window = 5;
  // Optional minimal-distortion rescaling of the outputs.
  bool post_scale = false;

  void validate() const;
};

// Per-block diagonal of B(i): gradient column weights for outputs 1 and 2.
using ColumnWeights = std::array<double, 2>;

struct TriniconResult {
  DemixingFilter filter;
  MultichannelSignal outputs;
  // cost_trace[j] is the cost of the j-th iterate; the last entry belongs to
  // the returned filter.
  std::vector<double> cost_trace;
  std::size_t iterations = 0;
  bool early_stopped = false;
};

class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, std::vector<double> trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

// Offline natural-gradient iteration. Without column weights every block
// contributes with its beta weight to both gradient columns; with them,
// block i contributes column q with column_weights[i][q] instead.
TriniconResult run_offline(
    const MultichannelSignal& mic, const TriniconConfig& cfg,
    std::optional<std::span<const ColumnWeights>> column_weights = std::nullopt,
    const DemixingFilter* initial = nullptr);

// Replaces each output with its least-squares image at the microphone where
// that image is strongest (lags -proj_len/2 .. proj_len/2 - 1).
MultichannelSignal minimal_distortion_rescale(const MultichannelSignal& outputs,
                                              const MultichannelSignal& mic,
                                              std::size_t proj_len = 256);

}  // namespace fdtrinicon

#endif  // FDTRINICON_TRINICON_HPP_

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

#include "fdtrinicon/trinicon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fdtrinicon/keyvalue.hpp"
#include "fdtrinicon/projection.hpp"

namespace fdtrinicon {
namespace {

constexpr double kImagCorruption = 1e-6;
// Keeps log det finite for (numerically) rank-one local PSDs.
constexpr double kMaxCoherence = 1.0 - 1e-12;

void require_two_channels(const MultichannelSignal& s, const char* what) {
  if (s.num_channels() != 2)
    throw InvalidArgument(std::string(what) + ": two-channel signal required");
}

// Window [first, last) of blocks pooled into the local PSD of block i.
std::pair<std::size_t, std::size_t> psd_window_bounds(std::size_t i,
                                                      std::size_t num_blocks,
                                                      std::size_t window) {
  const std::size_t back = window / 2;
  std::size_t first = i >= back ? i - back : 0;
  std::size_t last = std::min(num_blocks, first + window);
  if (last - first < window && num_blocks >= window) first = last - window;
  return {first, last};
}

}  // namespace

DemixingFilter::DemixingFilter(std::size_t length, std::size_t init_shift)
    : length_(length), init_shift_(init_shift) {
  if (length == 0) throw InvalidArgument("DemixingFilter: length must be > 0");
  for (auto& t : taps_) t.assign(length, 0.0);
}

bool DemixingFilter::all_finite() const {
  for (const auto& t : taps_) {
    for (double v : t) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

DemixingFilter init_filters(std::size_t length, std::size_t shift) {
  if (length == 0) throw InvalidArgument("init_filters: length must be > 0");
  if (shift >= length)
    throw InvalidArgument("init_filters: shift " + std::to_string(shift) +
                          " out of range for L = " + std::to_string(length));
  DemixingFilter w(length, shift);
  w.w(0, 0)[shift] = 1.0;
  w.w(1, 1)[shift] = 1.0;
  return w;
}

FilterSpectrum filter_spectrum(const DemixingFilter& filter) {
  const std::size_t n = 4 * filter.length();
  RealFft fft(n);
  std::vector<double> buf(n, 0.0);
  std::vector<Complex> half(fft.num_bins());
  FilterSpectrum out;
  for (std::size_t pq = 0; pq < 4; ++pq) {
    std::fill(buf.begin(), buf.end(), 0.0);
    const auto taps = filter.w(pq / 2, pq % 2);
    std::copy(taps.begin(), taps.end(), buf.begin());
    fft.forward(buf, half);
    out[pq] = expand_half_spectrum(half, n);
  }
  return out;
}

DemixingFilter constrain_filter(const FilterSpectrum& spectrum,
                                std::size_t length, std::size_t init_shift) {
  const std::size_t n = 4 * length;
  for (const auto& s : spectrum) {
    if (s.size() != n)
      throw InvalidArgument("constrain_filter: expected 4L bins per filter");
  }
  ComplexFft fft(n);
  std::vector<Complex> time(n);
  DemixingFilter out(length, init_shift);
  for (std::size_t pq = 0; pq < 4; ++pq) {
    fft.inverse(spectrum[pq], time);
    double max_re = 0.0, max_im = 0.0;
    for (const Complex& c : time) {
      max_re = std::max(max_re, std::abs(c.real()));
      max_im = std::max(max_im, std::abs(c.imag()));
    }
    if (!std::isfinite(max_re) || !std::isfinite(max_im))
      throw NumericalError("constrain_filter: non-finite filter taps");
    const double scale = std::max(max_re, 1e-300);
    if (max_im > kImagCorruption * scale)
      throw NumericalError("constrain_filter: imaginary residue " +
                           format_double(max_im / scale) +
                           " exceeds tolerance; spectrum is not conjugate-symmetric");
    auto taps = out.w(pq / 2, pq % 2);
    for (std::size_t l = 0; l < length; ++l) taps[l] = time[l].real();
  }
  return out;
}

MultichannelSignal forward_filter(const DemixingFilter& filter,
                                  const MultichannelSignal& mic) {
  require_two_channels(mic, "forward_filter");
  const std::size_t len = filter.length();
  const std::size_t n = 4 * len;
  const FrameParams params = FrameParams::for_signal(mic.num_samples(), len);
  RealFft fft(n);
  const std::size_t nb = fft.num_bins();

  std::array<std::vector<Complex>, 4> wf;
  std::vector<double> buf(n, 0.0);
  for (std::size_t pq = 0; pq < 4; ++pq) {
    std::fill(buf.begin(), buf.end(), 0.0);
    const auto taps = filter.w(pq / 2, pq % 2);
    std::copy(taps.begin(), taps.end(), buf.begin());
    wf[pq].resize(nb);
    fft.forward(buf, wf[pq]);
  }

  MultichannelSignal out(2, mic.num_samples(), mic.sample_rate());
  std::array<std::vector<Complex>, 2> xf{std::vector<Complex>(nb),
                                         std::vector<Complex>(nb)};
  std::vector<Complex> yf(nb);
  for (std::size_t m = 0; m < params.num_blocks; ++m) {
    for (std::size_t p = 0; p < 2; ++p) {
      frame_channel(mic.channel(p), len, m, buf);
      fft.forward(buf, xf[p]);
    }
    for (std::size_t q = 0; q < 2; ++q) {
      for (std::size_t k = 0; k < nb; ++k)
        yf[k] = xf[0][k] * wf[0 * 2 + q][k] + xf[1][k] * wf[1 * 2 + q][k];
      fft.inverse(yf, buf);
      // The last L samples of the circular result are free of wrap-around.
      auto y = out.channel(q);
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t t = m * len + i;
        if (t < y.size()) y[t] = buf[3 * len + i];
      }
    }
  }
  return out;
}

PsdMatrix estimate_psd(std::span<const BlockSpectra> blocks,
                       std::span<const double> weights) {
  if (blocks.empty()) throw InvalidArgument("estimate_psd: empty block set");
  if (weights.size() != blocks.size())
    throw InvalidArgument("estimate_psd: one weight per block required");
  const std::size_t nb = blocks.front()[0].size();
  PsdMatrix psd;
  psd.bins.assign(nb, Matrix2c::Zero());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0)) throw InvalidArgument("estimate_psd: negative weight");
    if (blocks[i][0].size() != nb || blocks[i][1].size() != nb)
      throw InvalidArgument("estimate_psd: blocks differ in bin count");
    psd.weight_sum += w;
    for (std::size_t k = 0; k < nb; ++k) {
      const Complex y1 = blocks[i][0][k];
      const Complex y2 = blocks[i][1][k];
      Matrix2c& phi = psd.bins[k];
      phi(0, 0) += w * std::norm(y1);
      phi(1, 1) += w * std::norm(y2);
      phi(0, 1) += w * std::conj(y1) * y2;
    }
  }
  for (auto& phi : psd.bins) phi(1, 0) = std::conj(phi(0, 1));
  return psd;
}

Matrix2c natural_gradient_bin(const Matrix2c& w, const Matrix2c& phi,
                              const Eigen::Vector2d& b) {
  if (!phi.allFinite() || !w.allFinite())
    throw NumericalError("natural_gradient_bin: non-finite input");
  const double d1 = phi(0, 0).real();
  const double d2 = phi(1, 1).real();
  if (!(d1 > 0.0) || !(d2 > 0.0))
    throw InvalidArgument("natural_gradient_bin: PSD diagonal must be positive");
  // (Phi - diag Phi) diag(Phi)^-1 B has zero diagonal.
  Matrix2c m = Matrix2c::Zero();
  m(0, 1) = phi(0, 1) / d2 * b(1);
  m(1, 0) = phi(1, 0) / d1 * b(0);
  return 2.0 * w * m;
}

double bin_cost(const Matrix2c& phi) {
  const double d1 = phi(0, 0).real();
  const double d2 = phi(1, 1).real();
  const double det = d1 * d2 - std::norm(phi(0, 1));
  if (!(d1 > 0.0) || !(d2 > 0.0) || !(det > 0.0))
    throw NumericalError("cost: PSD matrix is not positive definite");
  // log d1 + log d2 - log det, written to stay accurate near zero.
  return -std::log1p(-std::norm(phi(0, 1)) / (d1 * d2));
}

double cost(std::span<const PsdMatrix> local, std::span<const double> weights) {
  if (local.size() != weights.size())
    throw InvalidArgument("cost: one weight per block required");
  double j = 0.0;
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const auto& bins = local[i].bins;
    // An odd bin count is a half spectrum (2L+1 bins): interior bins stand
    // for their mirror images too.
    const bool half = bins.size() % 2 == 1;
    double sum = 0.0;
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const bool edge = k == 0 || k + 1 == bins.size();
      sum += (half && !edge ? 2.0 : 1.0) * bin_cost(bins[k]);
    }
    j += weights[i] * sum;
  }
  return j;
}

std::vector<PsdMatrix> local_psds(std::span<const BlockSpectra> blocks,
                                  std::size_t window) {
  if (window == 0) throw InvalidArgument("local_psds: window must be >= 1");
  std::vector<PsdMatrix> out;
  out.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto [first, last] = psd_window_bounds(i, blocks.size(), window);
    const std::vector<double> ones(last - first, 1.0);
    out.push_back(estimate_psd(blocks.subspan(first, last - first), ones));
  }
  return out;
}

double cost(std::span<const BlockSpectra> blocks, std::span<const double> weights,
            std::size_t window) {
  const auto local = local_psds(blocks, window);
  return cost(local, weights);
}

std::vector<BlockSpectra> constrained_output_spectra(
    const DemixingFilter& filter, std::span<const BlockSpectra> input_spectra) {
  const std::size_t len = filter.length();
  const std::size_t n = 4 * len;
  RealFft fft(n);
  const std::size_t nb = fft.num_bins();
  std::array<std::vector<Complex>, 4> wf;
  std::vector<double> buf(n, 0.0);
  for (std::size_t pq = 0; pq < 4; ++pq) {
    std::fill(buf.begin(), buf.end(), 0.0);
    const auto taps = filter.w(pq / 2, pq % 2);
    std::copy(taps.begin(), taps.end(), buf.begin());
    wf[pq].resize(nb);
    fft.forward(buf, wf[pq]);
  }
  std::vector<BlockSpectra> out(input_spectra.size());
  std::vector<Complex> yf(nb);
  for (std::size_t m = 0; m < input_spectra.size(); ++m) {
    const auto& x = input_spectra[m];
    if (x[0].size() != nb || x[1].size() != nb)
      throw InvalidArgument("constrained_output_spectra: expected 2L+1 bins");
    for (std::size_t q = 0; q < 2; ++q) {
      for (std::size_t k = 0; k < nb; ++k)
        yf[k] = x[0][k] * wf[q][k] + x[1][k] * wf[2 + q][k];
      fft.inverse(yf, buf);
      std::fill(buf.begin(), buf.begin() + static_cast<long>(2 * len), 0.0);
      out[m][q].resize(nb);
      fft.forward(buf, out[m][q]);
    }
  }
  return out;
}

void TriniconConfig::validate() const {
  if (filter_len == 0) throw InvalidArgument("filter_len must be > 0");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be >= 0");
  if (init_shift >= filter_len)
    throw InvalidArgument("init_shift must be < filter_len");
  if (psd_window == 0) throw InvalidArgument("psd_window must be >= 1");
  if (!(diag_floor > 0.0)) throw InvalidArgument("diag_floor must be > 0");
  for (double b : block_weights) {
    if (!(b >= 0.0)) throw InvalidArgument("block weights must be >= 0");
  }
}

TriniconResult run_offline(const MultichannelSignal& mic,
                           const TriniconConfig& cfg,
                           std::optional<std::span<const ColumnWeights>> column_weights,
                           const DemixingFilter* initial) {
  require_two_channels(mic, "run_offline");
  cfg.validate();
  const std::size_t len = cfg.filter_len;
  const std::size_t n = 4 * len;
  const FrameParams params = FrameParams::for_signal(mic.num_samples(), len);
  const std::size_t nblk = params.num_blocks;
  if (nblk < 4)
    throw InvalidArgument("run_offline: need at least 4 blocks of signal, got " +
                          std::to_string(nblk));

  std::vector<double> beta = cfg.block_weights;
  if (beta.empty()) {
    beta.assign(nblk, 1.0 / static_cast<double>(nblk));
  } else {
    if (beta.size() != nblk)
      throw InvalidArgument("run_offline: block_weights must have one entry per block");
    double s = 0.0;
    for (double b : beta) s += b;
    if (!(s > 0.0)) throw InvalidArgument("run_offline: block weights sum to zero");
    for (double& b : beta) b /= s;
  }
  std::vector<ColumnWeights> colw(nblk);
  if (column_weights) {
    if (column_weights->size() != nblk)
      throw InvalidArgument("run_offline: column weights must have one entry per block");
    std::copy(column_weights->begin(), column_weights->end(), colw.begin());
  } else {
    for (std::size_t i = 0; i < nblk; ++i) colw[i] = {beta[i], beta[i]};
  }

  DemixingFilter w = initial ? *initial : init_filters(len, cfg.init_shift);
  if (w.length() != len)
    throw InvalidArgument("run_offline: initial filter length differs from filter_len");

  const auto x_spec = block_spectra(mic, len);
  RealFft fft(n);
  const std::size_t nb = fft.num_bins();

  // Per-block outer-product terms of the windowed outputs.
  std::vector<double> p11(nblk * nb), p22(nblk * nb);
  std::vector<Complex> p12(nblk * nb);
  std::vector<double> s11(nb), s22(nb);
  std::vector<Complex> s12(nb);
  std::vector<Complex> g01(nb), g10(nb);
  std::array<std::vector<Complex>, 4> wf;
  for (auto& v : wf) v.resize(nb);
  std::vector<double> buf(n);
  std::vector<Complex> yf(nb);
  std::array<std::vector<Complex>, 2> yw{std::vector<Complex>(nb),
                                         std::vector<Complex>(nb)};

  TriniconResult result;
  const std::size_t window = std::min(cfg.psd_window, nblk);

  for (std::size_t iter = 0;; ++iter) {
    for (std::size_t pq = 0; pq < 4; ++pq) {
      std::fill(buf.begin(), buf.end(), 0.0);
      const auto taps = w.w(pq / 2, pq % 2);
      std::copy(taps.begin(), taps.end(), buf.begin());
      fft.forward(buf, wf[pq]);
    }

    double max_power = 0.0;
    for (std::size_t m = 0; m < nblk; ++m) {
      const auto& x = x_spec[m];
      for (std::size_t q = 0; q < 2; ++q) {
        for (std::size_t k = 0; k < nb; ++k)
          yf[k] = x[0][k] * wf[q][k] + x[1][k] * wf[2 + q][k];
        fft.inverse(yf, buf);
        std::fill(buf.begin(), buf.begin() + static_cast<long>(2 * len), 0.0);
        fft.forward(buf, yw[q]);
      }
      double* a = &p11[m * nb];
      double* b = &p22[m * nb];
      Complex* c = &p12[m * nb];
      for (std::size_t k = 0; k < nb; ++k) {
        a[k] = std::norm(yw[0][k]);
        b[k] = std::norm(yw[1][k]);
        c[k] = std::conj(yw[0][k]) * yw[1][k];
        max_power = std::max(max_power, std::max(a[k], b[k]));
      }
    }
    if (!std::isfinite(max_power)) {
      throw DivergenceError("run_offline: outputs became non-finite at iteration " +
                                std::to_string(iter),
                            result.cost_trace);
    }

    // Sliding-window local PSDs, cost, and the accumulated gradient kernel
    // G(k) = sum_i (Phi_i - diag) diag^-1 B_i (zero diagonal).
    std::fill(g01.begin(), g01.end(), Complex{});
    std::fill(g10.begin(), g10.end(), Complex{});
    double j_cost = 0.0;
    for (std::size_t i = 0; i < nblk; ++i) {
      const auto [first, last] = psd_window_bounds(i, nblk, window);
      // Summed afresh for each block so a local PSD depends only on the
      // blocks inside its window.
      std::fill(s11.begin(), s11.end(), 0.0);
      std::fill(s22.begin(), s22.end(), 0.0);
      std::fill(s12.begin(), s12.end(), Complex{});
      for (std::size_t b = first; b < last; ++b) {
        const std::size_t off = b * nb;
        for (std::size_t k = 0; k < nb; ++k) {
          s11[k] += p11[off + k];
          s22[k] += p22[off + k];
          s12[k] += p12[off + k];
        }
      }
      const double floor =
          cfg.diag_floor * max_power * static_cast<double>(last - first);
      const double c0 = colw[i][0];
      const double c1 = colw[i][1];
      double block_cost = 0.0;
      for (std::size_t k = 0; k < nb; ++k) {
        const double d1 = std::max(s11[k], floor);
        const double d2 = std::max(s22[k], floor);
        const Complex x12 = s12[k];
        const double coh = std::min(std::norm(x12) / (d1 * d2), kMaxCoherence);
        const double bin_weight = (k == 0 || k == nb - 1) ? 1.0 : 2.0;
        block_cost -= bin_weight * std::log1p(-coh);
        if (c1 != 0.0) g01[k] += (c1 / d2) * x12;
        if (c0 != 0.0) g10[k] += (c0 / d1) * std::conj(x12);
      }
      j_cost += beta[i] * block_cost;
    }
    result.cost_trace.push_back(j_cost);
    if (!std::isfinite(j_cost))
      throw DivergenceError("run_offline: cost became non-finite at iteration " +
                                std::to_string(iter),
                            result.cost_trace);

    const std::size_t win = cfg.early_stop_window;
    if (win > 0 && iter >= win) {
      const double prev = result.cost_trace[iter - win];
      if (std::abs(j_cost - prev) <= cfg.early_stop_tol * std::abs(prev)) {
        result.early_stopped = true;
        break;
      }
    }
    if (iter >= cfg.iterations) break;
    result.iterations = iter + 1;
    if (cfg.mu == 0.0) continue;

    // W <- W - mu * 2 W G. The update is constrained to L taps and added in
    // the time domain so a zero gradient leaves the taps untouched.
    FilterSpectrum full;
    for (auto& f : full) f.resize(n);
    for (std::size_t k = 0; k < nb; ++k) {
      const Complex w00 = wf[0][k], w01 = wf[1][k], w10 = wf[2][k], w11 = wf[3][k];
      // (W G)(p, q) with G = [[0, g01], [g10, 0]].
      const Complex d00 = w01 * g10[k];
      const Complex d01 = w00 * g01[k];
      const Complex d10 = w11 * g10[k];
      const Complex d11 = w10 * g01[k];
      const double step = 2.0 * cfg.mu;
      full[0][k] = step * d00;
      full[1][k] = step * d01;
      full[2][k] = step * d10;
      full[3][k] = step * d11;
    }
    for (auto& f : full) {
      f[0] = f[0].real();
      f[nb - 1] = f[nb - 1].real();
      for (std::size_t k = nb; k < n; ++k) f[k] = std::conj(f[n - k]);
    }
    const DemixingFilter delta = constrain_filter(full, len, w.init_shift());
    for (std::size_t pq = 0; pq < 4; ++pq) {
      auto taps = w.w(pq / 2, pq % 2);
      auto d = delta.w(pq / 2, pq % 2);
      for (std::size_t l = 0; l < len; ++l) taps[l] -= d[l];
    }
    if (!w.all_finite())
      throw DivergenceError("run_offline: filter taps became non-finite at iteration " +
                                std::to_string(iter),
                            result.cost_trace);
  }

  result.filter = w;
  result.outputs = forward_filter(w, mic);
  if (cfg.post_scale) result.outputs = minimal_distortion_rescale(result.outputs, mic);
  return result;
}

MultichannelSignal minimal_distortion_rescale(const MultichannelSignal& outputs,
                                              const MultichannelSignal& mic,
                                              std::size_t proj_len) {
  require_two_channels(outputs, "minimal_distortion_rescale");
  require_two_channels(mic, "minimal_distortion_rescale");
  if (outputs.num_samples() != mic.num_samples())
    throw InvalidArgument("minimal_distortion_rescale: length mismatch");
  if (proj_len < 2) throw InvalidArgument("minimal_distortion_rescale: proj_len >= 2");
  const std::size_t len = mic.num_samples();
  const std::size_t lead = proj_len / 2;

  MultichannelSignal out(2, len, mic.sample_rate());
  for (std::size_t q = 0; q < 2; ++q) {
    const DelayedSpanProjector proj({outputs.channel(q)}, proj_len);
    double best_energy = -1.0;
    std::vector<double> best;
    for (std::size_t p = 0; p < 2; ++p) {
      // Delay the mic signal so non-causal lags become causal.
      std::vector<double> target(proj.extended_len(), 0.0);
      const auto x = mic.channel(p);
      std::copy(x.begin(), x.end(), target.begin() + lead);
      auto res = proj.project(target);
      double e = 0.0;
      for (double v : res.projection) e += v * v;
      if (e > best_energy) {
        best_energy = e;
        best = std::move(res.projection);
      }
    }
    auto y = out.channel(q);
    for (std::size_t t = 0; t < len; ++t) y[t] = best[t + lead];
  }
  return out;
}

}  // namespace fdtrinicon

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

#include "fdtrinicon/projection.hpp"

#include <algorithm>
#include <complex>

#include "fdtrinicon/error.hpp"
#include "fdtrinicon/fft.hpp"

namespace fdtrinicon {

DelayedSpanProjector::DelayedSpanProjector(
    std::vector<std::span<const double>> refs, std::size_t num_lags)
    : lags_(num_lags) {
  if (refs.empty()) throw InvalidArgument("projector: no reference signals");
  if (num_lags == 0) throw InvalidArgument("projector: num_lags must be >= 1");
  len_ = refs.front().size();
  for (const auto& r : refs) {
    if (r.size() != len_)
      throw InvalidArgument("projector: references differ in length");
    refs_.emplace_back(r.begin(), r.end());
  }
  if (len_ == 0) throw InvalidArgument("projector: empty references");

  // Correlations for lags in (-(num_lags-1), num_lags-1) without wrap-around.
  fft_len_ = next_pow2(len_ + lags_);
  RealFft fft(fft_len_);
  std::vector<double> buf(fft_len_, 0.0);
  for (const auto& r : refs_) {
    std::fill(buf.begin(), buf.end(), 0.0);
    std::copy(r.begin(), r.end(), buf.begin());
    ref_spectra_.emplace_back(fft.num_bins());
    fft.forward(buf, ref_spectra_.back());
  }

  const std::size_t nref = refs_.size();
  const std::size_t dim = nref * lags_;
  Eigen::MatrixXd gram(dim, dim);
  std::vector<std::complex<double>> cross(fft.num_bins());
  std::vector<double> corr(fft_len_);
  for (std::size_t a = 0; a < nref; ++a) {
    for (std::size_t b = a; b < nref; ++b) {
      // corr[tau] = sum_m r_a(m) r_b(m + tau), negative tau wraps to the end.
      for (std::size_t k = 0; k < cross.size(); ++k)
        cross[k] = std::conj(ref_spectra_[a][k]) * ref_spectra_[b][k];
      fft.inverse(cross, corr);
      auto c_at = [&](long long tau) {
        return tau >= 0 ? corr[static_cast<std::size_t>(tau)]
                        : corr[fft_len_ - static_cast<std::size_t>(-tau)];
      };
      // <r_a(. - d1), r_b(. - d2)> = corr_ab(d1 - d2)
      for (std::size_t d1 = 0; d1 < lags_; ++d1) {
        for (std::size_t d2 = 0; d2 < lags_; ++d2) {
          const double v = c_at(static_cast<long long>(d1) -
                                static_cast<long long>(d2));
          gram(a * lags_ + d1, b * lags_ + d2) = v;
          gram(b * lags_ + d2, a * lags_ + d1) = v;
        }
      }
    }
  }

  llt_.compute(gram);
  const double trace = gram.trace();
  bool ok = llt_.info() == Eigen::Success && trace > 0.0;
  if (ok) {
    // Reject numerically singular factorizations.
    const auto& l = llt_.matrixLLT();
    const double dmax = l.diagonal().maxCoeff();
    const double dmin = l.diagonal().minCoeff();
    ok = dmin > 1e-7 * dmax;
  }
  if (!ok) {
    const double ridge =
        1e-10 * std::max(trace / static_cast<double>(dim), 1e-300);
    gram.diagonal().array() += ridge;
    llt_.compute(gram);
    regularized_ = true;
    diagnostic_ = "singular normal equations (silent or degenerate reference); "
                  "ridge-regularized solve used";
    if (llt_.info() != Eigen::Success)
      throw NumericalError("projector: normal equations not solvable");
  }
}

DelayedSpanProjector::Result DelayedSpanProjector::project(
    std::span<const double> target) const {
  if (target.size() != len_ && target.size() != extended_len())
    throw InvalidArgument("projector: target length mismatch");
  RealFft fft(fft_len_);
  std::vector<double> buf(fft_len_, 0.0);
  std::copy(target.begin(), target.end(), buf.begin());
  std::vector<std::complex<double>> tspec(fft.num_bins());
  fft.forward(buf, tspec);

  const std::size_t nref = refs_.size();
  Eigen::VectorXd rhs(nref * lags_);
  std::vector<std::complex<double>> cross(fft.num_bins());
  std::vector<double> corr(fft_len_);
  for (std::size_t j = 0; j < nref; ++j) {
    // <t, r_j(. - d)> = sum_m r_j(m) t(m + d)
    for (std::size_t k = 0; k < cross.size(); ++k)
      cross[k] = std::conj(ref_spectra_[j][k]) * tspec[k];
    fft.inverse(cross, corr);
    for (std::size_t d = 0; d < lags_; ++d) rhs(j * lags_ + d) = corr[d];
  }

  Result res;
  res.coefficients = llt_.solve(rhs);

  // projection = sum_j (c_j * r_j), computed in the frequency domain.
  std::vector<std::complex<double>> acc(fft.num_bins(), {0.0, 0.0});
  std::vector<std::complex<double>> cspec(fft.num_bins());
  for (std::size_t j = 0; j < nref; ++j) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (std::size_t d = 0; d < lags_; ++d) buf[d] = res.coefficients(j * lags_ + d);
    fft.forward(buf, cspec);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += cspec[k] * ref_spectra_[j][k];
  }
  fft.inverse(acc, buf);
  res.projection.assign(buf.begin(), buf.begin() + static_cast<long>(extended_len()));
  return res;
}

}  // namespace fdtrinicon

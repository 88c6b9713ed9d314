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

#ifndef FDTRINICON_PROJECTION_HPP_
#define FDTRINICON_PROJECTION_HPP_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fdtrinicon {

// Least-squares projection onto the span of delayed copies
// {r_j(n - d) : j < J, 0 <= d < num_lags} of a fixed set of equal-length
// reference signals. Targets are zero-extended to T + num_lags - 1 samples
// so every delayed copy lies fully inside the support.
//
// The Gram matrix is factorized once; project() can then be called for any
// number of targets.
class DelayedSpanProjector {
 public:
  DelayedSpanProjector(std::vector<std::span<const double>> refs,
                       std::size_t num_lags);

  std::size_t signal_len() const { return len_; }
  std::size_t extended_len() const { return len_ + lags_ - 1; }
  std::size_t num_lags() const { return lags_; }
  std::size_t num_refs() const { return refs_.size(); }

  // True when the Gram matrix needed a ridge term to be invertible.
  bool regularized() const { return regularized_; }
  const std::string& diagnostic() const { return diagnostic_; }

  struct Result {
    Eigen::VectorXd coefficients;  // index j * num_lags + d
    std::vector<double> projection;  // extended_len() samples
  };
  Result project(std::span<const double> target) const;

 private:
  std::vector<std::vector<double>> refs_;
  std::size_t len_ = 0;
  std::size_t lags_ = 0;
  std::size_t fft_len_ = 0;
  std::vector<std::vector<std::complex<double>>> ref_spectra_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  bool regularized_ = false;
  std::string diagnostic_;
};

}  // namespace fdtrinicon

#endif  // FDTRINICON_PROJECTION_HPP_

// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The irs-cache-dof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "irscache/params.hpp"

namespace irscache {

using cx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// One block's channel draw. Row/column conventions:
///   direct(j-1, i-1)    = H^{[ji]}     transmitter i -> receiver j
///   tx_to_irs(u-1, i-1) = H_TI^{[ui]}  transmitter i -> element u
///   irs_to_rx(j-1, u-1) = H_IR^{[ju]}  element u -> receiver j
struct ChannelRealization {
  CMatrix direct;
  CMatrix tx_to_irs;
  CMatrix irs_to_rx;
  long block_index = 0;
  std::uint64_t seed = 0;

  int k_t() const { return static_cast<int>(direct.cols()); }
  int k_r() const { return static_cast<int>(direct.rows()); }
  int q() const { return static_cast<int>(tx_to_irs.rows()); }
};

/// Active-IRS coefficients q^{[u]} = rho^{[u]} e^{j phi^{[u]}}, stored as the
/// complex product.
struct IrsConfig {
  CVector q;

  static IrsConfig zero(int q_elements) { return {CVector::Zero(q_elements)}; }
};

/// n(i-1, j-1) = 1 when the link transmitter i -> receiver j survives.
struct NetworkMatrix {
  Eigen::MatrixXi n;
  double tol = 0.0;
};

/// Independent stream per (seed, block, purpose) so blocks can be drawn in any
/// order with identical results.
inline std::mt19937_64 block_stream(std::uint64_t seed, long block, std::uint32_t purpose = 0) {
  const auto b = static_cast<std::uint64_t>(block);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32), purpose};
  return std::mt19937_64(seq);
}

namespace detail {

inline void fill_cn(CMatrix& m, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double re = g(rng);
      const double im = g(rng);
      m(r, c) = cx(re, im);
    }
}

}  // namespace detail

/// i.i.d. CN(0, 1) coefficients for every direct, transmitter-IRS and
/// IRS-receiver link of one block.
inline ChannelRealization sample_block_channels(const SystemParams& params, long block,
                                                std::uint64_t seed) {
  ChannelRealization ch;
  ch.block_index = block;
  ch.seed = seed;
  ch.direct.resize(params.k_r, params.k_t);
  ch.tx_to_irs.resize(params.q_elements, params.k_t);
  ch.irs_to_rx.resize(params.k_r, params.q_elements);
  auto rng = block_stream(seed, block);
  detail::fill_cn(ch.direct, rng);
  detail::fill_cn(ch.tx_to_irs, rng);
  detail::fill_cn(ch.irs_to_rx, rng);
  return ch;
}

/// H~^{[ji]} = H^{[ji]} + sum_u H_IR^{[ju]} q^{[u]} H_TI^{[ui]}, as a K_R x K_T
/// matrix.
inline CMatrix equivalent_channel(const ChannelRealization& ch, const IrsConfig& irs) {
  require(irs.q.size() == ch.tx_to_irs.rows() && ch.irs_to_rx.cols() == ch.tx_to_irs.rows(),
          "equivalent_channel: IRS dimension mismatch");
  require(ch.tx_to_irs.cols() == ch.direct.cols() && ch.irs_to_rx.rows() == ch.direct.rows(),
          "equivalent_channel: channel dimension mismatch");
  return ch.direct + ch.irs_to_rx * irs.q.asDiagonal() * ch.tx_to_irs;
}

/// Scale-invariant zero threshold: 1e-9 of the largest entry magnitude.
inline double default_zero_tolerance(const CMatrix& h_eq) {
  return 1e-9 * (h_eq.size() ? h_eq.cwiseAbs().maxCoeff() : 0.0);
}

inline NetworkMatrix network_indicator(const CMatrix& h_eq, double tol) {
  require(tol > 0, "network_indicator: tolerance must be positive");
  NetworkMatrix out;
  out.tol = tol;
  out.n.resize(h_eq.cols(), h_eq.rows());
  for (Eigen::Index j = 0; j < h_eq.rows(); ++j)
    for (Eigen::Index i = 0; i < h_eq.cols(); ++i) out.n(i, j) = std::abs(h_eq(j, i)) > tol ? 1 : 0;
  return out;
}

}  // namespace irscache

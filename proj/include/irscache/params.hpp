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

#include <string>

#include "irscache/common.hpp"

namespace irscache {

/// Scalar network parameters: K_T transmitters, K_R receivers, a library of N
/// files of F packets, normalized cache sizes mu_T = K_T*M_T/N and
/// mu_R = K_R*M_R/N, and a Q-element active IRS.
struct SystemParams {
  int k_t = 0;
  int k_r = 0;
  int n_files = 0;
  long f_packets = 1;
  int mu_t = 1;
  int mu_r = 1;
  int q_elements = 0;

  /// M with K_T = M * mu_T.
  int m_groups() const { return mu_t > 0 ? k_t / mu_t : 0; }
  Rational m_t_files() const { return Rational(static_cast<long>(mu_t) * n_files, k_t); }
  Rational m_r_files() const { return Rational(static_cast<long>(mu_r) * n_files, k_r); }

  /// Throws PreconditionError naming the first violated invariant.
  void validate() const {
    require(k_t >= 1, "K_T >= 1 violated");
    require(k_r >= 2, "K_R >= 2 violated (mu_R must lie in [1, K_R-1])");
    require(f_packets >= 1, "F >= 1 violated");
    require(q_elements >= 0, "Q >= 0 violated");
    require(mu_t >= 1 && mu_t <= k_t, "mu_T in [1, K_T] violated");
    require(mu_r >= 1 && mu_r <= k_r - 1, "mu_R in [1, K_R-1] violated");
    require(n_files >= k_r, "N >= K_R violated (worst-case demands need distinct files)");
    require(Rational(k_t) * m_t_files() >= n_files, "K_T*M_T >= N violated");
    require(m_r_files() < n_files, "M_R < N violated");
    if (mu_t >= 2)
      require(k_t % mu_t == 0, "K_T must equal M*mu_T (K_T=" + std::to_string(k_t) +
                                   ", mu_T=" + std::to_string(mu_t) + ")");
  }

  /// Builds parameters from cache sizes in files; mu_T and mu_R must come out
  /// integral.
  static SystemParams from_cache_sizes(int k_t, int k_r, int n_files, long f_packets,
                                       const Rational& m_t, const Rational& m_r, int q) {
    require(k_t >= 1 && k_r >= 1 && n_files >= 1, "node and file counts must be positive");
    require(Rational(k_t) * m_t >= n_files, "K_T*M_T >= N violated");
    require(m_r < n_files, "M_R < N violated");
    const Rational mu_t = Rational(k_t) * m_t / n_files;
    const Rational mu_r = Rational(k_r) * m_r / n_files;
    require(denominator(mu_t) == 1, "mu_T = K_T*M_T/N must be an integer");
    require(denominator(mu_r) == 1, "mu_R = K_R*M_R/N must be an integer");
    SystemParams p;
    p.k_t = k_t;
    p.k_r = k_r;
    p.n_files = n_files;
    p.f_packets = f_packets;
    p.mu_t = numerator(mu_t).convert_to<int>();
    p.mu_r = numerator(mu_r).convert_to<int>();
    p.q_elements = q;
    p.validate();
    return p;
  }
};

inline std::string describe(const SystemParams& p) {
  return "K_T=" + std::to_string(p.k_t) + " K_R=" + std::to_string(p.k_r) +
         " N=" + std::to_string(p.n_files) + " F=" + std::to_string(p.f_packets) +
         " mu_T=" + std::to_string(p.mu_t) + " mu_R=" + std::to_string(p.mu_r) +
         " Q=" + std::to_string(p.q_elements);
}

}  // namespace irscache

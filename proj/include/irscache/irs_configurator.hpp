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

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "irscache/channel_model.hpp"
#include "irscache/delivery_scheduler.hpp"

namespace irscache {

/// Cross-links (tx i, rx j) that the IRS has to cancel in one block.
struct NullSet {
  std::vector<std::pair<int, int>> links;  // sorted, unique

  std::size_t size() const { return links.size(); }
  bool empty() const { return links.empty(); }
};

/// Generic rule: a serving group's transmitters must not reach any active
/// receiver that neither decodes one of the group's subfiles, caches it, nor is
/// zero-forced for it by transmitter cooperation.
inline NullSet required_nulls(const BlockPlan& plan, const SystemParams& params) {
  std::map<int, std::pair<Subset, Subset>> groups;  // group -> (tx, covered rx)
  for (const auto& d : plan.deliveries) {
    auto& [tx, covered] = groups[d.group];
    tx = set_union(tx, d.serving);
    covered = set_union(covered, set_union(with(d.subfile.rx_set, d.rx), d.subfile.zf_set));
  }
  std::set<std::pair<int, int>> links;
  for (const auto& [g, tc] : groups)
    for (int i : tc.first) {
      require(i >= 1 && i <= params.k_t, "required_nulls: transmitter outside [K_T]");
      for (int j : set_minus(plan.active_rx, tc.second)) links.emplace(i, j);
    }
  return {{links.begin(), links.end()}};
}

enum class IrsStatus { exact, infeasible };

inline const char* to_string(IrsStatus s) { return s == IrsStatus::exact ? "exact" : "infeasible"; }

struct IrsSolution {
  IrsConfig config;
  IrsStatus status = IrsStatus::exact;
  double residual = 0.0;  // max |H~| over the null set
  std::size_t equations = 0;
  int elements = 0;
};

/// Row r = (i, j): coefficient of q^{[u]} is H_TI^{[ui]} * H_IR^{[ju]}.
inline CMatrix irs_coefficient_matrix(const ChannelRealization& ch, const NullSet& nulls) {
  CMatrix a(static_cast<Eigen::Index>(nulls.size()), ch.q());
  for (std::size_t r = 0; r < nulls.size(); ++r) {
    const auto [i, j] = nulls.links[r];
    for (int u = 0; u < ch.q(); ++u)
      a(static_cast<Eigen::Index>(r), u) = ch.tx_to_irs(u, i - 1) * ch.irs_to_rx(j - 1, u);
  }
  return a;
}

inline double residuals(const IrsConfig& q, const ChannelRealization& ch, const NullSet& nulls) {
  require(q.q.size() == ch.q(), "residuals: IRS dimension mismatch");
  double worst = 0.0;
  for (const auto& [i, j] : nulls.links) {
    cx h = ch.direct(j - 1, i - 1);
    for (int u = 0; u < ch.q(); ++u) h += ch.irs_to_rx(j - 1, u) * q.q(u) * ch.tx_to_irs(u, i - 1);
    worst = std::max(worst, std::abs(h));
  }
  return worst;
}

/// Minimum-norm exact solve when |N| <= Q, least squares (flagged infeasible)
/// otherwise.
inline IrsSolution solve_irs(const ChannelRealization& ch, const NullSet& nulls) {
  IrsSolution out;
  out.equations = nulls.size();
  out.elements = ch.q();
  out.config = IrsConfig::zero(ch.q());
  if (nulls.empty()) return out;
  if (ch.q() == 0) {
    out.status = IrsStatus::infeasible;
    out.residual = residuals(out.config, ch, nulls);
    return out;
  }
  const CMatrix a = irs_coefficient_matrix(ch, nulls);
  CVector b(static_cast<Eigen::Index>(nulls.size()));
  for (std::size_t r = 0; r < nulls.size(); ++r) {
    const auto [i, j] = nulls.links[r];
    b(static_cast<Eigen::Index>(r)) = -ch.direct(j - 1, i - 1);
  }
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(a);
  cod.setThreshold(1e-12);
  const auto need = static_cast<Eigen::Index>(std::min<std::size_t>(nulls.size(), ch.q()));
  if (cod.rank() < need)
    throw SingularSystemError("IRS system rank " + std::to_string(cod.rank()) + " < " +
                              std::to_string(need) + " in block " +
                              std::to_string(ch.block_index) + "; resample the channel");
  out.config.q = cod.solve(b);
  out.status = nulls.size() <= static_cast<std::size_t>(ch.q()) ? IrsStatus::exact
                                                                : IrsStatus::infeasible;
  out.residual = residuals(out.config, ch, nulls);
  return out;
}

}  // namespace irscache

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

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "irscache/channel_model.hpp"
#include "irscache/delivery_scheduler.hpp"

namespace irscache {

/// Per-block beamforming coefficients: v[d][k] multiplies the symbol of
/// delivery d at transmitter plan.deliveries[d].serving[k]. One symbol slot.
struct BeamformerSet {
  std::vector<std::vector<cx>> v;

  cx coefficient(const BlockPlan& plan, std::size_t d, int tx) const {
    const auto& s = plan.deliveries[d].serving;
    for (std::size_t k = 0; k < s.size(); ++k)
      if (s[k] == tx) return v[d][k];
    return {0.0, 0.0};
  }
};

/// Aggregate gain sum_i H~^{[rx,i]} v_i of delivery d at receiver rx.
inline cx effective_gain(const CMatrix& h_eq, const BlockPlan& plan, const BeamformerSet& bf,
                         std::size_t d, int rx) {
  cx g{0.0, 0.0};
  const auto& s = plan.deliveries[d].serving;
  for (std::size_t k = 0; k < s.size(); ++k) g += h_eq(rx - 1, s[k] - 1) * bf.v[d][k];
  return g;
}

inline BeamformerSet select_binary_beamformers(const BlockPlan& plan) {
  BeamformerSet bf;
  for (const auto& d : plan.deliveries) bf.v.emplace_back(d.serving.size(), cx{1.0, 0.0});
  return bf;
}

/// One subfile: unit gain at `rx`, zero at every receiver in `zero_at`.
struct ZfTarget {
  int rx = 0;
  Subset zero_at;
};

namespace detail {

inline CVector solve_checked(const CMatrix& a, const CVector& b, const std::string& what) {
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(a);
  cod.setThreshold(1e-12);
  if (cod.rank() < a.rows())
    throw SingularSystemError(what + ": rank " + std::to_string(cod.rank()) + " < " +
                              std::to_string(a.rows()) + "; resample the channel");
  return cod.solve(b);
}

}  // namespace detail

/// Square when |zero_at| = |serving| - 1; fewer targets give the min-norm
/// solution.
inline CVector solve_single_subfile_zf(const CMatrix& h_eq, const Subset& serving, int rx,
                                       const Subset& zero_at) {
  require(!contains(zero_at, rx), "solve_single_subfile_zf: intended receiver in ZF set");
  require(zero_at.size() + 1 <= serving.size(),
          "solve_single_subfile_zf: more ZF targets than serving transmitters allow");
  const auto n = static_cast<Eigen::Index>(serving.size());
  CMatrix a(static_cast<Eigen::Index>(zero_at.size() + 1), n);
  for (Eigen::Index c = 0; c < n; ++c) {
    a(0, c) = h_eq(rx - 1, serving[static_cast<std::size_t>(c)] - 1);
    for (std::size_t r = 0; r < zero_at.size(); ++r)
      a(static_cast<Eigen::Index>(r + 1), c) =
          h_eq(zero_at[r] - 1, serving[static_cast<std::size_t>(c)] - 1);
  }
  CVector b = CVector::Zero(a.rows());
  b(0) = 1.0;
  return detail::solve_checked(a, b, "ZF system for rx " + std::to_string(rx));
}

/// Receivers served together by one transmitter group in the lemma layout:
/// head h with (R, T), each j in R with (R\{j}+h, T), each j in T with
/// (R, T\{j}+h). Only T-type receivers are zero-forced.
inline std::vector<ZfTarget> lemma_layout(int head, const Subset& r, const Subset& t) {
  std::vector<ZfTarget> out{{head, t}};
  for (int j : r) out.push_back({j, t});
  for (int j : t) out.push_back({j, with(without(t, j), head)});
  return out;
}

/// All subfiles of one serving group at once. Unknowns are stacked per subfile,
/// so for the lemma layout with |T| = mu_T - 1 the system is mu_T(mu_R + mu_T)
/// square.
inline std::vector<CVector> solve_joint_block_zf(const CMatrix& h_eq, const Subset& serving,
                                                 const std::vector<ZfTarget>& layout) {
  const auto n = static_cast<Eigen::Index>(serving.size());
  Eigen::Index rows = 0;
  for (const auto& t : layout) {
    require(!contains(t.zero_at, t.rx), "solve_joint_block_zf: intended receiver in ZF set");
    rows += static_cast<Eigen::Index>(t.zero_at.size()) + 1;
  }
  const auto cols = n * static_cast<Eigen::Index>(layout.size());
  CMatrix a = CMatrix::Zero(rows, cols);
  CVector b = CVector::Zero(rows);
  Eigen::Index row = 0;
  for (std::size_t s = 0; s < layout.size(); ++s) {
    const auto off = static_cast<Eigen::Index>(s) * n;
    const auto& t = layout[s];
    b(row) = 1.0;
    for (Eigen::Index c = 0; c < n; ++c)
      a(row, off + c) = h_eq(t.rx - 1, serving[static_cast<std::size_t>(c)] - 1);
    ++row;
    for (int k : t.zero_at) {
      for (Eigen::Index c = 0; c < n; ++c)
        a(row, off + c) = h_eq(k - 1, serving[static_cast<std::size_t>(c)] - 1);
      ++row;
    }
  }
  const CVector x = detail::solve_checked(a, b, "joint ZF system");
  std::vector<CVector> out;
  for (std::size_t s = 0; s < layout.size(); ++s)
    out.push_back(x.segment(static_cast<Eigen::Index>(s) * n, n));
  return out;
}

/// Binary selection for mu_T = 1, one joint ZF solve per serving group
/// otherwise.
inline BeamformerSet precode_block(const BlockPlan& plan, const CMatrix& h_eq, int mu_t) {
  if (mu_t == 1) return select_binary_beamformers(plan);
  BeamformerSet bf;
  bf.v.resize(plan.deliveries.size());
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t d = 0; d < plan.deliveries.size(); ++d)
    groups[plan.deliveries[d].group].push_back(d);
  for (const auto& [g, members] : groups) {
    const Subset& serving = plan.deliveries[members.front()].serving;
    std::vector<ZfTarget> layout;
    for (auto d : members) {
      require(plan.deliveries[d].serving == serving, "precode_block: group with mixed serving sets");
      layout.push_back({plan.deliveries[d].rx, plan.deliveries[d].subfile.zf_set});
    }
    const auto sol = solve_joint_block_zf(h_eq, serving, layout);
    for (std::size_t k = 0; k < members.size(); ++k)
      bf.v[members[k]].assign(sol[k].data(), sol[k].data() + sol[k].size());
  }
  return bf;
}

}  // namespace irscache

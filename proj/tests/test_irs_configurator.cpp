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

#include <gtest/gtest.h>

#include "irscache/irs_configurator.hpp"

using namespace irscache;

namespace {

SystemParams make(int kt, int kr, int mu_t, int mu_r, int q) {
  SystemParams p;
  p.k_t = kt;
  p.k_r = kr;
  p.n_files = kr;
  p.mu_t = mu_t;
  p.mu_r = mu_r;
  p.q_elements = q;
  return p;
}

NullSet random_links(std::mt19937_64& rng, int kt, int kr, std::size_t n) {
  std::set<std::pair<int, int>> s;
  while (s.size() < n)
    s.emplace(1 + static_cast<int>(rng() % kt), 1 + static_cast<int>(rng() % kr));
  return {{s.begin(), s.end()}};
}

}  // namespace

TEST(RequiredNulls, SingleTxBlock) {
  const auto p = make(3, 4, 1, 1, 6);
  const auto s = schedule_theorem1(p, DemandVector::worst_case(4));
  for (const auto& b : s.blocks) {
    const auto n = required_nulls(b, p);
    EXPECT_EQ(n.size(), 6u);  // L + L*L with L = 2
    EXPECT_EQ(n.links, b.null_links);
  }
  // first block by hand: tx1 serves rx1, rx2; tx2 -> rx3; tx3 -> rx4
  const std::vector<std::pair<int, int>> want{{1, 3}, {1, 4}, {2, 1}, {2, 4}, {3, 1}, {3, 3}};
  EXPECT_EQ(required_nulls(s.blocks.front(), p).links, want);
}

TEST(RequiredNulls, GroupBlockAndLZero) {
  const auto p = make(4, 4, 2, 1, 4);
  const auto s = schedule_theorem2_partition(p, DemandVector::worst_case(4), *find_subset_partition(2, 2));
  for (const auto& b : s.blocks) {
    const auto n = required_nulls(b, p);
    EXPECT_EQ(n.size(), 4u);
    EXPECT_EQ(n.links, b.null_links);
  }
  const auto p0 = make(3, 3, 1, 2, 0);
  for (const auto& b : schedule_theorem1(p0, DemandVector::worst_case(3)).blocks)
    EXPECT_TRUE(required_nulls(b, p0).empty());
}

TEST(IrsSolve, CoefficientMatrixEntries) {
  ChannelRealization ch;
  ch.direct = CMatrix::Zero(2, 2);
  ch.tx_to_irs = CMatrix(2, 2);
  ch.irs_to_rx = CMatrix(2, 2);
  ch.tx_to_irs << cx(1, 0), cx(2, 0), cx(0, 1), cx(3, -1);
  ch.irs_to_rx << cx(5, 0), cx(0, 2), cx(-1, 0), cx(1, 1);
  const NullSet n{{{1, 2}, {2, 1}}};
  const CMatrix a = irs_coefficient_matrix(ch, n);
  // row (i=1, j=2): u=1: H_TI(1,1) H_IR(2,1); u=2: H_TI(2,1) H_IR(2,2)
  EXPECT_EQ(a(0, 0), cx(1, 0) * cx(-1, 0));
  EXPECT_EQ(a(0, 1), cx(0, 1) * cx(1, 1));
  EXPECT_EQ(a(1, 0), cx(2, 0) * cx(5, 0));
  EXPECT_EQ(a(1, 1), cx(3, -1) * cx(0, 2));
}

TEST(IrsSolve, SquareSystemsAreExact) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int q = 1 + static_cast<int>(rng() % 30);
    const int kt = 6, kr = 6;
    const auto p = make(kt, kr, 1, 1, q);
    const auto ch = sample_block_channels(p, trial, 99);
    const auto n = random_links(rng, kt, kr, static_cast<std::size_t>(q));
    const auto sol = solve_irs(ch, n);
    ASSERT_EQ(sol.status, IrsStatus::exact);
    const double scale = ch.direct.cwiseAbs().maxCoeff();
    ASSERT_LT(sol.residual, 1e-8 * scale) << "trial " << trial << " Q=" << q;
    // oracle: substitute into the equivalent channel directly
    const CMatrix h = equivalent_channel(ch, sol.config);
    for (const auto& [i, j] : n.links) ASSERT_LT(std::abs(h(j - 1, i - 1)), 1e-8 * scale);
    for (int j = 1; j <= kr; ++j)
      for (int i = 1; i <= kt; ++i)
        if (!std::binary_search(n.links.begin(), n.links.end(), std::pair{i, j}))
          ASSERT_GT(std::abs(h(j - 1, i - 1)), 1e-3);
  }
}

TEST(IrsSolve, EmptyAndOverdetermined) {
  const auto p = make(3, 4, 1, 1, 2);
  const auto ch = sample_block_channels(p, 1, 5);
  const auto e = solve_irs(ch, NullSet{});
  EXPECT_EQ(e.status, IrsStatus::exact);
  EXPECT_EQ(e.config.q, CVector::Zero(2));
  const NullSet three{{{1, 2}, {2, 3}, {3, 4}}};
  const auto o = solve_irs(ch, three);
  EXPECT_EQ(o.status, IrsStatus::infeasible);
  EXPECT_GT(o.residual, 0.0);
  // the LS solution is no worse (in 2-norm) than q = 0
  const CMatrix a = irs_coefficient_matrix(ch, three);
  CVector b(3);
  for (int r = 0; r < 3; ++r) b(r) = -ch.direct(three.links[r].second - 1, three.links[r].first - 1);
  EXPECT_LE((a * o.config.q - b).norm(), b.norm() + 1e-12);
}

TEST(IrsSolve, UnderdeterminedMinimumNorm) {
  const auto p = make(3, 4, 1, 1, 8);
  const auto ch = sample_block_channels(p, 4, 5);
  const NullSet n{{{1, 2}, {2, 3}, {3, 1}}};
  const auto sol = solve_irs(ch, n);
  EXPECT_EQ(sol.status, IrsStatus::exact);
  EXPECT_LT(sol.residual, 1e-10);
  // min-norm solution lies in the row space of A
  const CMatrix a = irs_coefficient_matrix(ch, n);
  const CVector y = (a * a.adjoint()).ldlt().solve(a * sol.config.q);
  EXPECT_LT((a.adjoint() * y - sol.config.q).norm(), 1e-9 * sol.config.q.norm());
}

TEST(IrsSolve, SingularSystemRaises) {
  ChannelRealization ch;
  ch.direct = CMatrix::Constant(2, 2, 1.0);
  ch.tx_to_irs = CMatrix::Constant(2, 2, 1.0);
  ch.irs_to_rx = CMatrix::Constant(2, 2, 1.0);
  EXPECT_THROW(solve_irs(ch, NullSet{{{1, 1}, {2, 2}}}), SingularSystemError);
}

TEST(IrsResiduals, ZeroConfigAndLinearity) {
  const auto p = make(3, 4, 1, 1, 6);
  const auto ch = sample_block_channels(p, 2, 8);
  const auto s = schedule_theorem1(p, DemandVector::worst_case(4));
  const auto n = required_nulls(s.blocks[0], p);
  double want = 0;
  for (const auto& [i, j] : n.links) want = std::max(want, std::abs(ch.direct(j - 1, i - 1)));
  EXPECT_DOUBLE_EQ(residuals(IrsConfig::zero(6), ch, n), want);

  const auto sol = solve_irs(ch, n);
  EXPECT_LT(sol.residual, 1e-9 * ch.direct.cwiseAbs().maxCoeff());
  CVector dir = CVector::Zero(6);
  dir(0) = 1.0;
  const double r1 = residuals(IrsConfig{sol.config.q + 1e-3 * dir}, ch, n);
  const double r2 = residuals(IrsConfig{sol.config.q + 2e-3 * dir}, ch, n);
  EXPECT_GT(r1, 0.0);
  EXPECT_NEAR(r2 / r1, 2.0, 1e-6);

  const auto net = network_indicator(equivalent_channel(ch, sol.config),
                                     1e-6 * ch.direct.cwiseAbs().maxCoeff());
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 4; ++j)
      EXPECT_EQ(net.n(i - 1, j - 1),
                std::binary_search(n.links.begin(), n.links.end(), std::pair{i, j}) ? 0 : 1);
}

TEST(IrsSolve, MonotoneFeasibility) {
  const auto p = make(4, 4, 1, 1, 6);
  const auto ch = sample_block_channels(p, 3, 3);
  std::mt19937_64 rng(1);
  const auto n = random_links(rng, 4, 4, 6);
  ASSERT_EQ(solve_irs(ch, n).status, IrsStatus::exact);
  for (std::size_t drop = 0; drop < n.size(); ++drop) {
    NullSet sub = n;
    sub.links.erase(sub.links.begin() + static_cast<long>(drop));
    const auto s = solve_irs(ch, sub);
    EXPECT_EQ(s.status, IrsStatus::exact);
    EXPECT_LT(s.residual, 1e-9 * ch.direct.cwiseAbs().maxCoeff());
  }
}

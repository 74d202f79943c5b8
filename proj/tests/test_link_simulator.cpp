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

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "irscache/link_simulator.hpp"

using namespace irscache;

namespace {

SystemParams make(int kt, int kr, int mu_t, int mu_r, int q, int n = 0) {
  SystemParams p;
  p.k_t = kt;
  p.k_r = kr;
  p.n_files = n ? n : kr;
  p.f_packets = 1;
  p.mu_t = mu_t;
  p.mu_r = mu_r;
  p.q_elements = q;
  return p;
}

SystemParams worked() { return make(3, 4, 1, 1, 6, 12); }

}  // namespace

TEST(Transmit, SignalsFollowSchedule) {
  const auto p = worked();
  const auto s = schedule_theorem1(p, DemandVector::worst_case(4));
  const auto& b = s.blocks.front();
  const auto bf = select_binary_beamformers(b);
  const std::vector<cx> sym{cx(1, 0), cx(0, 1), cx(-1, 0), cx(0, -1)};
  const CVector x = transmit_block(b, bf, sym, 3);
  // transmitter 1 carries a combination of two subfiles, 2 and 3 one each
  EXPECT_EQ(x(0), sym[0] + sym[1]);
  EXPECT_EQ(x(1), sym[2]);
  EXPECT_EQ(x(2), sym[3]);

  BlockPlan single;
  single.index = 1;
  single.deliveries.push_back({SubfileId{1, 0, {2}, {1}, {}, {}}, 2, {2}, 1});
  const CVector xs = transmit_block(single, select_binary_beamformers(single), {cx(0.6, 0.8)}, 3);
  EXPECT_EQ(xs, (CVector(3) << 0.0, cx(0.6, 0.8), 0.0).finished());

  BeamformerSet zero = bf;
  for (auto& v : zero.v) std::fill(v.begin(), v.end(), cx(0, 0));
  EXPECT_EQ(transmit_block(b, zero, sym, 3), CVector::Zero(3));
}

TEST(Transmit, RejectsTransmitterWithoutSubfile) {
  const auto p = worked();
  const auto a = place_caches(split_library(p, PlacementMode::subset), p);
  const CacheIndex idx(a);
  auto s = schedule_theorem1(p, DemandVector::worst_case(4));
  auto b = s.blocks.front();
  b.deliveries[0].serving = {2};
  EXPECT_THROW(transmit_block(b, select_binary_beamformers(b), std::vector<cx>(4, 1.0), 3, &idx),
               ScheduleConsistencyError);
}

TEST(Decode, CacheOnlyBlocksNeedNoIrs) {
  // mu_R = K_R - 1, L = 0: every interfering term is cached
  const auto p = make(3, 4, 1, 3, 0);
  EpisodeOptions o;
  o.irs_enabled = false;
  const auto r = run_episode(p, 5, o);
  EXPECT_EQ(r.failed_blocks(), 0);
  EXPECT_LT(r.max_decode_residual(), 1e-10);
  EXPECT_EQ(r.sum_dof(), Rational(4));
}

TEST(Episode, WorkedExample) {
  const auto r = run_episode(worked(), 1);
  EXPECT_EQ(r.h(), 9);
  EXPECT_EQ(r.delivered, 36);
  EXPECT_EQ(r.sum_dof(), Rational(4));
  EXPECT_EQ(r.per_user_dof(), Rational(1));
  EXPECT_LT(r.max_decode_residual(), 1e-8);
  EXPECT_TRUE(r.passed());
}

TEST(Episode, SmallIrsFallsBackToSubnetworks) {
  auto p = worked();
  p.q_elements = 2;
  const auto r = run_episode(p, 1);
  EXPECT_EQ(r.shape.regime, Regime::t1_subnetwork);
  EXPECT_EQ(r.per_user_dof(), Rational(3, 4));
  EXPECT_TRUE(r.passed());
}

TEST(Episode, PaperStrictTwoTransmitterIsInfeasible) {
  const auto p = make(4, 4, 2, 1, 2);
  const auto r = run_episode(p, 3);
  EXPECT_EQ(r.shape.l, 1);
  EXPECT_EQ(r.infeasible_blocks(), r.h());
  EXPECT_FALSE(r.passed());
  EpisodeOptions o;
  o.mode = QMode::sufficient;
  auto q = p;
  q.q_elements = 4;
  const auto ok = run_episode(q, 3, o);
  EXPECT_TRUE(ok.passed());
  EXPECT_EQ(ok.sum_dof(), Rational(4));
}

TEST(Episode, IrsOffBreaksDecoding) {
  EpisodeOptions o;
  o.irs_enabled = false;
  const auto setup = prepare_episode(worked(), o);
  const auto r = run_prepared(setup, 2, o);
  EXPECT_EQ(r.failed_blocks(), r.h());
  double smallest = 1e9;
  for (std::size_t b = 0; b < r.blocks.size(); ++b) {
    const auto& plan = setup.schedule.blocks[b];
    for (std::size_t k = 0; k < plan.deliveries.size(); ++k) {
      const int rx = plan.deliveries[k].rx;
      // receivers in R cache every other subfile of the block
      if (contains(plan.cache_set, rx)) {
        EXPECT_LT(r.blocks[b].decode_residual[k], 1e-10);
      } else {
        smallest = std::min(smallest, r.blocks[b].decode_residual[k]);
      }
    }
  }
  EXPECT_GT(smallest, 1e-3);
}

TEST(Episode, ExactOnDeskScaleGrid) {
  for (int kt = 1; kt <= 6; ++kt)
    for (int kr = 2; kr <= 6; ++kr)
      for (int mu_t = 1; mu_t <= kt; ++mu_t) {
        if (mu_t >= 2 && kt % mu_t) continue;
        for (int mu_r = 1; mu_r < kr; ++mu_r) {
          const auto base = make(kt, kr, mu_t, mu_r, 0);
          for (int l = 0; l <= l_cap(base); ++l) {
            auto p = base;
            p.q_elements = static_cast<int>(required_elements(l, mu_t, QMode::sufficient));
            EpisodeOptions o;
            o.mode = QMode::sufficient;
            const auto setup = prepare_episode(p, o);
            ASSERT_EQ(setup.shape.l, l);
            const auto r = run_prepared(setup, 1000 + static_cast<std::uint64_t>(l), o);
            ASSERT_TRUE(r.passed()) << describe(p) << " L=" << l << " max residual "
                                    << r.max_decode_residual();
            ASSERT_EQ(r.sum_dof(), Rational(std::min(mu_r + mu_t + l, kr))) << describe(p);
            for (const auto& b : r.blocks) ASSERT_EQ(b.delivered, static_cast<int>(b.rx.size()));
          }
        }
      }
}

TEST(Episode, DemandInvariance) {
  const auto p = make(3, 4, 1, 1, 6, 6);
  std::vector<int> files{1, 2, 3, 4, 5, 6};
  std::set<Rational> seen;
  for (int k = 0; k < 6; ++k) {
    std::next_permutation(files.begin(), files.end());
    EpisodeOptions o;
    o.demand = DemandVector{{files.begin(), files.begin() + 4}};
    const auto r = run_episode(p, 10 + static_cast<std::uint64_t>(k), o);
    EXPECT_TRUE(r.passed());
    seen.insert(r.sum_dof());
  }
  EXPECT_EQ(seen.size(), 1u);
}

TEST(Episode, Reproducible) {
  const auto a = run_episode(worked(), 77);
  const auto b = run_episode(worked(), 77);
  for (std::size_t k = 0; k < a.blocks.size(); ++k)
    EXPECT_EQ(a.blocks[k].decode_residual, b.blocks[k].decode_residual);
}

TEST(Slope, InterferenceFreeIsOnePerUser) {
  const auto s = estimate_dof_slope(worked(), 1, {1e6, 1e8});
  EXPECT_NEAR(s.per_user, 1.0, 0.05);
  EXPECT_EQ(s.interfered_pairs, 0);
}

TEST(Slope, IrsOffSaturates) {
  EpisodeOptions o;
  o.irs_enabled = false;
  const auto s = estimate_dof_slope(worked(), 1, {1e6, 1e8}, o);
  EXPECT_GT(s.interfered_pairs, 0);
  EXPECT_NEAR(s.per_user_interfered, 0.0, 0.05);
}

TEST(Slope, NoInterferencePossible) {
  const auto s = estimate_dof_slope(make(1, 2, 1, 1, 0), 4, {1e4, 1e6, 1e8});
  EXPECT_NEAR(s.per_user, 1.0, 0.05);
  EXPECT_THROW(estimate_dof_slope(worked(), 1, {1e6}), PreconditionError);
  EXPECT_THROW(estimate_dof_slope(worked(), 1, {1e8, 1e6}), PreconditionError);
}

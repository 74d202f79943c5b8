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

#include <random>

#include <gtest/gtest.h>

#include "irscache/cache_placement.hpp"

using namespace irscache;

namespace {

SystemParams make(int kt, int kr, int n, long f, int mu_t, int mu_r) {
  SystemParams p;
  p.k_t = kt;
  p.k_r = kr;
  p.n_files = n;
  p.f_packets = f;
  p.mu_t = mu_t;
  p.mu_r = mu_r;
  return p;
}

long long choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(SplitLibrary, ExampleTwelveSubfilesPerFile) {
  const auto u = split_library(make(3, 4, 4, 12, 1, 1), PlacementMode::subset);
  EXPECT_EQ(u.subfiles_per_file, 12);
  EXPECT_EQ(u.subfiles.size(), 48u);
  EXPECT_EQ(u.packets_per_subfile, Rational(1));
}

TEST(SplitLibrary, FullTransmitterSet) {
  const auto u = split_library(make(3, 4, 4, 8, 3, 2), PlacementMode::subset);
  EXPECT_EQ(u.subfiles.size(), static_cast<std::size_t>(4 * choose(4, 2)));
}

TEST(SplitLibrary, OrderedMode) {
  const auto u = split_library(make(4, 3, 3, 18, 2, 1), PlacementMode::ordered);
  EXPECT_EQ(u.subfiles_per_file, 18);
  EXPECT_EQ(u.subfiles.size(), 54u);
  for (const auto& w : u.subfiles) EXPECT_EQ(w.tx_set, u.ordered->by_kappa(w.kappa).front());
}

TEST(PlaceCaches, ExampleBudgets) {
  const auto p = make(3, 4, 12, 12, 1, 1);
  const auto a = place_caches(split_library(p, PlacementMode::subset), p);
  for (const auto& c : a.tx_caches) {
    EXPECT_EQ(c.size(), 48u);
    EXPECT_EQ(a.packets_per_subfile * static_cast<long>(c.size()), Rational(4 * 12));
  }
  for (const auto& c : a.rx_caches) {
    EXPECT_EQ(c.size(), 36u);
    EXPECT_EQ(a.packets_per_subfile * static_cast<long>(c.size()), Rational(3 * 12));
  }
  EXPECT_TRUE(verify_cache_budgets(a, p).ok);
}

TEST(PlaceCaches, MuRZeroRejected) {
  EXPECT_THROW(split_library(make(3, 4, 12, 12, 1, 0), PlacementMode::subset), PreconditionError);
}

TEST(PlaceCaches, TwoTransmitterBinomialIdentity) {
  const auto p = make(4, 4, 4, 36, 2, 2);
  const auto a = place_caches(split_library(p, PlacementMode::subset), p);
  const Rational per_tx = Rational(4 * choose(3, 1) * choose(4, 2)) * a.packets_per_subfile;
  EXPECT_EQ(per_tx, Rational(72));
  EXPECT_EQ(per_tx, p.m_t_files() * p.f_packets);
  EXPECT_TRUE(verify_cache_budgets(a, p).ok);
}

TEST(PlaceCaches, UncoveredSubfileDetected) {
  const auto p = make(3, 4, 4, 12, 1, 1);
  auto a = place_caches(split_library(p, PlacementMode::subset), p);
  const auto victim = a.subfiles[5];
  for (auto& c : a.tx_caches) std::erase(c, victim);
  const auto v = verify_cache_budgets(a, p);
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.report.find("uncovered subfile"), std::string::npos) << v.report;
}

TEST(PlaceCaches, CountsAndMembership) {
  for (auto [kt, kr, mu_t, mu_r] : std::vector<std::array<int, 4>>{
           {3, 4, 1, 1}, {4, 5, 2, 2}, {6, 4, 3, 1}, {5, 3, 1, 2}}) {
    const auto p = make(kt, kr, kr, 7, mu_t, mu_r);
    const auto a = place_caches(split_library(p, PlacementMode::subset), p);
    for (const auto& c : a.tx_caches)
      EXPECT_EQ(static_cast<long long>(c.size()),
                p.n_files * choose(kt - 1, mu_t - 1) * choose(kr, mu_r));
    for (std::size_t j = 0; j < a.rx_caches.size(); ++j)
      for (const auto& w : a.rx_caches[j]) EXPECT_TRUE(contains(w.rx_set, static_cast<int>(j) + 1));
    EXPECT_EQ(a.packets_per_subfile * (choose(kt, mu_t) * choose(kr, mu_r)), Rational(7));
  }
}

TEST(PlaceCaches, RandomTuplesBudgets) {
  std::mt19937_64 rng(2026);
  int done = 0;
  while (done < 30) {
    const int kt = 1 + static_cast<int>(rng() % 6);
    const int kr = 2 + static_cast<int>(rng() % 5);
    const int mu_t = 1 + static_cast<int>(rng() % kt);
    const int mu_r = 1 + static_cast<int>(rng() % (kr - 1));
    const int n = kr + static_cast<int>(rng() % 4);
    const long f = 1 + static_cast<long>(rng() % 50);
    if (mu_t >= 2 && kt % mu_t) continue;
    const auto p = make(kt, kr, n, f, mu_t, mu_r);
    for (auto mode : {PlacementMode::subset, PlacementMode::ordered}) {
      if (mode == PlacementMode::ordered && kt % mu_t) continue;
      const auto a = place_caches(split_library(p, mode), p);
      EXPECT_TRUE(verify_cache_budgets(a, p).ok) << describe(p) << " " << to_string(mode);
    }
    ++done;
  }
}

TEST(Refine, SplitFactorsAndMass) {
  const auto p = make(4, 6, 6, 60, 2, 1);
  const auto u = split_library(p, PlacementMode::subset);
  std::vector<Request> reqs;
  for (const auto& w : u.subfiles)
    if (w.file == 1 && !contains(w.rx_set, 1)) reqs.push_back({w, 1, u.packets_per_subfile});
  const auto t_only = refine_subfiles(reqs, 6, 1, 0);
  EXPECT_EQ(t_only.size(), reqs.size() * choose(4, 1));
  const auto both = refine_subfiles(reqs, 6, 1, 1);
  EXPECT_EQ(both.size(), reqs.size() * 12);
  Rational total = 0, want = 0;
  for (const auto& r : both) {
    total += r.packets;
    EXPECT_TRUE(disjoint(r.subfile.rx_set, r.subfile.zf_set));
    EXPECT_TRUE(disjoint(r.subfile.rx_set, r.subfile.irs_set));
    EXPECT_TRUE(disjoint(r.subfile.zf_set, r.subfile.irs_set));
    EXPECT_FALSE(contains(set_union(r.subfile.zf_set, r.subfile.irs_set), 1));
  }
  for (const auto& r : reqs) want += r.packets;
  EXPECT_EQ(total, want);
  EXPECT_EQ(refine_subfiles(reqs, 6, 0, 0).size(), reqs.size());
  EXPECT_THROW(refine_subfiles(reqs, 6, 3, 2), PreconditionError);
}

TEST(CacheIndexLookup, UsesParentSubfile) {
  const auto p = make(3, 4, 4, 12, 1, 1);
  const auto a = place_caches(split_library(p, PlacementMode::subset), p);
  const CacheIndex idx(a);
  SubfileId w = a.subfiles[0];
  w.zf_set = {3};
  w.irs_set = {4};
  EXPECT_TRUE(idx.tx_has(w.tx_set.front(), w));
  EXPECT_TRUE(idx.rx_has(w.rx_set.front(), w));
  EXPECT_FALSE(idx.rx_has(4, w));
}

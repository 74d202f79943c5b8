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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irscache/common.hpp"

namespace irscache {

/// 1 + ((i + j - 1) mod m): cyclic successor arithmetic on [1, m].
inline int cyclic_shift(int i, long long j, int m) {
  require(m >= 1, "cyclic_shift: modulus must be >= 1");
  require(i >= 1 && i <= m, "cyclic_shift: index outside [1, m]");
  require(j >= 0, "cyclic_shift: offset must be non-negative");
  return 1 + static_cast<int>((static_cast<long long>(i) + j - 1) % m);
}

/// All k-subsets of [1 : n] in lexicographic order.
inline std::vector<Subset> enumerate_subsets(int n, int k) {
  require(n >= 0 && k >= 0, "enumerate_subsets: negative argument");
  require(k <= n, "enumerate_subsets: k > n");
  std::vector<Subset> out;
  Subset cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    out.push_back(cur);
    int pos = k - 1;
    while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == n - k + pos + 1) --pos;
    if (pos < 0) break;
    ++cur[static_cast<std::size_t>(pos)];
    for (int q = pos + 1; q < k; ++q)
      cur[static_cast<std::size_t>(q)] = cur[static_cast<std::size_t>(q - 1)] + 1;
  }
  return out;
}

/// Outcome of a structural check: ok, or the first violation found.
struct Verdict {
  bool ok = true;
  std::string report;

  explicit operator bool() const { return ok; }
  static Verdict pass() { return {}; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }
};

/// Parallel classes of mu_t-subsets of [1 : m*mu_t]: each class partitions the
/// ground set into m blocks and every mu_t-subset lies in exactly one class.
struct SubsetPartitionSystem {
  int ground_size = 0;
  int m = 0;
  int mu_t = 0;
  std::vector<std::vector<Subset>> classes;

  /// kappa numbering: class c (0-based) owns the window [c*m + 1 : (c+1)*m].
  const Subset& by_kappa(long kappa) const {
    require(kappa >= 1 && kappa <= static_cast<long>(classes.size()) * m,
            "kappa outside numbering range");
    const auto idx = static_cast<std::size_t>(kappa - 1);
    return classes[idx / static_cast<std::size_t>(m)][idx % static_cast<std::size_t>(m)];
  }

  long kappa_count() const { return static_cast<long>(classes.size()) * m; }
};

inline Verdict verify_subset_partition(const SubsetPartitionSystem& sys) {
  const int n = sys.ground_size;
  if (sys.m < 1 || sys.mu_t < 1 || n != sys.m * sys.mu_t)
    return Verdict::fail("ground size is not m * mu_t");
  const BigInt expected = binomial(n, sys.mu_t) / sys.m;
  if (BigInt(sys.classes.size()) != expected)
    return Verdict::fail("expected " + expected.str() + " classes, found " +
                         std::to_string(sys.classes.size()));
  std::map<Subset, std::size_t> seen;
  for (std::size_t c = 0; c < sys.classes.size(); ++c) {
    const auto& cls = sys.classes[c];
    if (static_cast<int>(cls.size()) != sys.m)
      return Verdict::fail("class " + std::to_string(c + 1) + " does not have m subsets");
    std::vector<int> hits(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& s : cls) {
      if (static_cast<int>(s.size()) != sys.mu_t || !std::is_sorted(s.begin(), s.end()) ||
          std::adjacent_find(s.begin(), s.end()) != s.end())
        return Verdict::fail("class " + std::to_string(c + 1) + ": malformed subset " +
                             to_string(s));
      for (int x : s) {
        if (x < 1 || x > n)
          return Verdict::fail("class " + std::to_string(c + 1) + ": element out of range");
        ++hits[static_cast<std::size_t>(x)];
      }
      auto [it, fresh] = seen.emplace(s, c);
      if (!fresh)
        return Verdict::fail("duplicate subset " + to_string(s) + " in classes " +
                             std::to_string(it->second + 1) + " and " + std::to_string(c + 1));
    }
    for (int x = 1; x <= n; ++x)
      if (hits[static_cast<std::size_t>(x)] != 1)
        return Verdict::fail("class " + std::to_string(c + 1) + " is not a partition (element " +
                             std::to_string(x) + " covered " +
                             std::to_string(hits[static_cast<std::size_t>(x)]) + " times)");
  }
  if (BigInt(seen.size()) != binomial(n, sys.mu_t))
    return Verdict::fail("not every subset is covered");
  return Verdict::pass();
}

namespace detail {

// Circle method: point 1 sits at the hub, points 2..2m rotate around it.
inline SubsetPartitionSystem round_robin_pairs(int m) {
  SubsetPartitionSystem sys{2 * m, m, 2, {}};
  const int ring = 2 * m - 1;
  for (int r = 0; r < ring; ++r) {
    std::vector<Subset> cls;
    cls.push_back({1, r + 2});
    for (int k = 1; k < m; ++k) {
      int a = (r + k) % ring + 2;
      int b = ((r - k) % ring + ring) % ring + 2;
      cls.push_back(a < b ? Subset{a, b} : Subset{b, a});
    }
    std::sort(cls.begin(), cls.end());
    sys.classes.push_back(std::move(cls));
  }
  return sys;
}

class ParallelClassSearch {
 public:
  ParallelClassSearch(int m, int mu_t, std::uint64_t budget)
      : m_(m), mu_t_(mu_t), n_(m * mu_t), budget_(budget) {
    subsets_ = enumerate_subsets(n_, mu_t_);
    masks_.reserve(subsets_.size());
    by_min_.assign(static_cast<std::size_t>(n_) + 1, {});
    for (std::size_t i = 0; i < subsets_.size(); ++i) {
      std::uint64_t mask = 0;
      for (int x : subsets_[i]) mask |= std::uint64_t{1} << (x - 1);
      masks_.push_back(mask);
      by_min_[static_cast<std::size_t>(subsets_[i].front())].push_back(i);
    }
    used_.assign(subsets_.size(), false);
    n_classes_ = by_min_[1].size();
    full_ = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
  }

  std::optional<SubsetPartitionSystem> run() {
    chosen_.assign(n_classes_, {});
    if (!extend(0, 0)) return std::nullopt;
    SubsetPartitionSystem sys{n_, m_, mu_t_, {}};
    for (const auto& picks : chosen_) {
      std::vector<Subset> cls;
      for (auto i : picks) cls.push_back(subsets_[i]);
      std::sort(cls.begin(), cls.end());
      sys.classes.push_back(std::move(cls));
    }
    return sys;
  }

 private:
  // Class c is anchored by the c-th subset containing element 1; the rest of
  // the class is filled by always covering the smallest uncovered element.
  bool extend(std::size_t cls, std::uint64_t covered) {
    if (cls == n_classes_) return true;
    if (++nodes_ > budget_) return false;
    if (covered == full_) return extend(cls + 1, 0);
    if (covered == 0) {
      const auto anchor = by_min_[1][cls];
      return place(cls, anchor, covered);
    }
    int e = 1;
    while (covered & (std::uint64_t{1} << (e - 1))) ++e;
    for (auto idx : by_min_[static_cast<std::size_t>(e)]) {
      if (used_[idx] || (masks_[idx] & covered)) continue;
      if (place(cls, idx, covered)) return true;
      if (nodes_ > budget_) return false;
    }
    return false;
  }

  bool place(std::size_t cls, std::size_t idx, std::uint64_t covered) {
    used_[idx] = true;
    chosen_[cls].push_back(idx);
    if (extend(cls, covered | masks_[idx])) return true;
    chosen_[cls].pop_back();
    used_[idx] = false;
    return false;
  }

  int m_, mu_t_, n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::uint64_t full_ = 0;
  std::size_t n_classes_ = 0;
  std::vector<Subset> subsets_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::vector<std::size_t>> by_min_;
  std::vector<bool> used_;
  std::vector<std::vector<std::size_t>> chosen_;
};

}  // namespace detail

inline constexpr std::uint64_t kDefaultPartitionBudget = 2'000'000;

/// Searches for an (m, mu_t)-subset partition. Returns nullopt when the
/// backtracking budget runs out; that is not a proof of non-existence.
inline std::optional<SubsetPartitionSystem> find_subset_partition(
    int m, int mu_t, std::uint64_t budget = kDefaultPartitionBudget) {
  require(m >= 1, "find_subset_partition: m must be >= 1");
  require(mu_t >= 2, "find_subset_partition: mu_t must be >= 2");
  require(m <= 64 / mu_t, "find_subset_partition: m * mu_t exceeds 64-element index type");
  require(binomial(m * mu_t, mu_t) <= BigInt(1) << 24,
          "find_subset_partition: subset count exceeds enumeration limit");
  if (mu_t == 2) return detail::round_robin_pairs(m);
  return detail::ParallelClassSearch(m, mu_t, budget).run();
}

/// (m*mu_t)! / (mu_t!)^m
inline BigInt ordered_partition_count(int m, int mu_t) {
  BigInt den = 1;
  const BigInt f = factorial(mu_t);
  for (int i = 0; i < m; ++i) den *= f;
  return factorial(static_cast<long>(m) * mu_t) / den;
}

inline constexpr int kOrderedPartitionGuard = 10;

/// Every ordered tuple (A_1, ..., A_m) of disjoint mu_t-subsets covering
/// [1 : m*mu_t], numbered by kappa = position + 1. The m! orderings of one
/// unordered partition occupy the window [k*m! + 1 : (k+1)*m!].
struct OrderedPartitionSystem {
  int m = 0;
  int mu_t = 0;
  std::vector<std::vector<Subset>> partitions;

  long window_size() const { return static_cast<long>(factorial_i64(m)); }
  long size() const { return static_cast<long>(partitions.size()); }

  const std::vector<Subset>& by_kappa(long kappa) const {
    require(kappa >= 1 && kappa <= size(), "kappa outside numbering range");
    return partitions[static_cast<std::size_t>(kappa - 1)];
  }

  long kappa_of(const std::vector<Subset>& p) const {
    if (index_.empty())
      for (std::size_t i = 0; i < partitions.size(); ++i)
        index_.emplace(partitions[i], static_cast<long>(i) + 1);
    auto it = index_.find(p);
    require(it != index_.end(), "not an ordered partition of this system");
    return it->second;
  }

 private:
  mutable std::map<std::vector<Subset>, long> index_;
};

namespace detail {

inline void unordered_partitions(const Subset& rest, int mu_t, std::vector<Subset>& acc,
                                 std::vector<std::vector<Subset>>& out) {
  if (rest.empty()) {
    out.push_back(acc);
    return;
  }
  const int head = rest.front();
  const Subset tail(rest.begin() + 1, rest.end());
  for (const auto& pick : enumerate_subsets(static_cast<int>(tail.size()), mu_t - 1)) {
    Subset block{head};
    for (int p : pick) block.push_back(tail[static_cast<std::size_t>(p - 1)]);
    acc.push_back(block);
    unordered_partitions(set_minus(tail, block), mu_t, acc, out);
    acc.pop_back();
  }
}

}  // namespace detail

inline OrderedPartitionSystem enumerate_ordered_partitions(int m, int mu_t,
                                                           int guard = kOrderedPartitionGuard) {
  require(m >= 1 && mu_t >= 1, "enumerate_ordered_partitions: m and mu_t must be >= 1");
  require(m * mu_t <= guard, "enumerate_ordered_partitions: ground set of " +
                                 std::to_string(m * mu_t) + " elements exceeds guard of " +
                                 std::to_string(guard));
  std::vector<std::vector<Subset>> groups;
  std::vector<Subset> acc;
  detail::unordered_partitions(iota_set(m * mu_t), mu_t, acc, groups);

  OrderedPartitionSystem sys;
  sys.m = m;
  sys.mu_t = mu_t;
  for (const auto& g : groups) {
    std::vector<int> perm(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = i;
    do {
      std::vector<Subset> p;
      p.reserve(perm.size());
      for (int i : perm) p.push_back(g[static_cast<std::size_t>(i)]);
      sys.partitions.push_back(std::move(p));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return sys;
}

}  // namespace irscache

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

#include <compare>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "irscache/combinatorics.hpp"
#include "irscache/params.hpp"

namespace irscache {

/// How each file is split on the transmitter side: by mu_T-subsets S of [K_T],
/// or by ordered partitions (A_1, ..., A_M) of [K_T] with A_1 caching.
enum class PlacementMode { subset, ordered };

inline const char* to_string(PlacementMode m) {
  return m == PlacementMode::subset ? "subset" : "ordered";
}

/// Full index of a (possibly refined) subfile W_{k, S, R, T, L}.
///
/// `tx_set` is always the set of transmitters that cache the subfile (S, or
/// A_1 in ordered mode); `kappa` is the ordered-partition number in ordered
/// mode and 0 otherwise. `zf_set` and `irs_set` are empty until refined.
struct SubfileId {
  int file = 0;
  long kappa = 0;
  Subset tx_set;
  Subset rx_set;
  Subset zf_set;
  Subset irs_set;

  auto operator<=>(const SubfileId&) const = default;
  bool operator==(const SubfileId&) const = default;

  /// The unrefined subfile this piece was cut from.
  SubfileId parent() const { return {file, kappa, tx_set, rx_set, {}, {}}; }
};

inline std::string to_string(const SubfileId& s) {
  std::string out = "W(" + std::to_string(s.file) + ",";
  out += s.kappa ? "k" + std::to_string(s.kappa) + to_string(s.tx_set) : to_string(s.tx_set);
  out += "," + to_string(s.rx_set);
  if (!s.zf_set.empty() || !s.irs_set.empty()) out += "," + to_string(s.zf_set);
  if (!s.irs_set.empty()) out += "," + to_string(s.irs_set);
  return out + ")";
}

struct SubfileUniverse {
  PlacementMode mode = PlacementMode::subset;
  std::vector<SubfileId> subfiles;
  long subfiles_per_file = 0;
  Rational packets_per_subfile;
  std::shared_ptr<const OrderedPartitionSystem> ordered;
};

/// Splits every file into C(K_T, mu_T) * C(K_R, mu_R) subfiles (subset mode) or
/// (M mu_T)!/(mu_T!)^M * C(K_R, mu_R) subfiles (ordered mode).
inline SubfileUniverse split_library(const SystemParams& params, PlacementMode mode) {
  params.validate();
  SubfileUniverse u;
  u.mode = mode;
  const auto rx_sets = enumerate_subsets(params.k_r, params.mu_r);
  std::vector<std::pair<long, Subset>> tx_index;
  if (mode == PlacementMode::subset) {
    for (auto& s : enumerate_subsets(params.k_t, params.mu_t)) tx_index.emplace_back(0, s);
  } else {
    require(params.k_t % params.mu_t == 0, "ordered placement needs K_T = M*mu_T");
    auto sys = std::make_shared<OrderedPartitionSystem>(
        enumerate_ordered_partitions(params.m_groups(), params.mu_t));
    for (long k = 1; k <= sys->size(); ++k) tx_index.emplace_back(k, sys->by_kappa(k).front());
    u.ordered = std::move(sys);
  }
  u.subfiles_per_file = static_cast<long>(tx_index.size() * rx_sets.size());
  u.packets_per_subfile = Rational(params.f_packets, u.subfiles_per_file);
  u.subfiles.reserve(static_cast<std::size_t>(params.n_files * u.subfiles_per_file));
  for (int k = 1; k <= params.n_files; ++k)
    for (const auto& [kappa, s] : tx_index)
      for (const auto& r : rx_sets) u.subfiles.push_back({k, kappa, s, r, {}, {}});
  return u;
}

/// Uncoded, demand-independent cache contents of every node.
struct CacheAssignment {
  std::vector<std::vector<SubfileId>> tx_caches;  // index i-1
  std::vector<std::vector<SubfileId>> rx_caches;  // index j-1
  std::vector<SubfileId> subfiles;                // the whole universe
  Rational packets_per_subfile;
};

/// W is cached at transmitter i iff i is in its caching set, and at receiver
/// j iff j is in its receiver set.
inline CacheAssignment place_caches(const SubfileUniverse& universe, const SystemParams& params) {
  params.validate();
  CacheAssignment a;
  a.tx_caches.resize(static_cast<std::size_t>(params.k_t));
  a.rx_caches.resize(static_cast<std::size_t>(params.k_r));
  a.subfiles = universe.subfiles;
  a.packets_per_subfile = universe.packets_per_subfile;
  for (const auto& w : universe.subfiles) {
    for (int i : w.tx_set) a.tx_caches[static_cast<std::size_t>(i - 1)].push_back(w);
    for (int j : w.rx_set) a.rx_caches[static_cast<std::size_t>(j - 1)].push_back(w);
  }
  return a;
}

inline Verdict verify_cache_budgets(const CacheAssignment& a, const SystemParams& params) {
  const Rational tx_budget = params.m_t_files() * params.f_packets;
  const Rational rx_budget = params.m_r_files() * params.f_packets;
  if (static_cast<int>(a.tx_caches.size()) != params.k_t ||
      static_cast<int>(a.rx_caches.size()) != params.k_r)
    return Verdict::fail("cache count does not match K_T / K_R");
  std::set<SubfileId> cached;
  for (const auto& c : a.tx_caches) cached.insert(c.begin(), c.end());
  for (const auto& w : a.subfiles)
    if (!cached.count(w)) return Verdict::fail("uncovered subfile " + to_string(w));
  for (std::size_t i = 0; i < a.tx_caches.size(); ++i) {
    const Rational load = a.packets_per_subfile * static_cast<long>(a.tx_caches[i].size());
    if (load != tx_budget)
      return Verdict::fail("transmitter " + std::to_string(i + 1) + " holds " + load.str() +
                           " packets, expected M_T*F = " + tx_budget.str());
  }
  for (std::size_t j = 0; j < a.rx_caches.size(); ++j) {
    const Rational load = a.packets_per_subfile * static_cast<long>(a.rx_caches[j].size());
    if (load != rx_budget)
      return Verdict::fail("receiver " + std::to_string(j + 1) + " holds " + load.str() +
                           " packets, expected M_R*F = " + rx_budget.str());
  }
  return Verdict::pass();
}

/// A subfile requested by (and to be delivered to) receiver `rx`.
struct Request {
  SubfileId subfile;
  int rx = 0;
  Rational packets;

  auto operator<=>(const Request& o) const {
    if (auto c = rx <=> o.rx; c != 0) return c;
    return subfile <=> o.subfile;
  }
  bool operator==(const Request& o) const { return rx == o.rx && subfile == o.subfile; }
};

/// Cuts every request into C(K_R - |R| - 1, zf_size) pieces labelled by a
/// zero-forcing set T, then each of those into C(K_R - |R| - zf_size - 1, l_size)
/// pieces labelled by an IRS set L. T and L avoid the intended receiver and the
/// receiver cache set. Packet mass is split evenly.
inline std::vector<Request> refine_subfiles(const std::vector<Request>& requests, int k_r,
                                            int zf_size, int l_size) {
  require(zf_size >= 0 && l_size >= 0, "refine_subfiles: negative split size");
  std::vector<Request> out;
  for (const auto& req : requests) {
    const auto& w = req.subfile;
    require(w.zf_set.empty() && w.irs_set.empty(), "refine_subfiles: subfile already refined");
    require(static_cast<int>(w.rx_set.size()) + zf_size + l_size <= k_r - 1,
            "refine_subfiles: mu_R + |T| + L must not exceed K_R - 1");
    const Subset free = set_minus(without(iota_set(k_r), req.rx), w.rx_set);
    const auto t_choices = enumerate_subsets(static_cast<int>(free.size()), zf_size);
    const long pieces = static_cast<long>(t_choices.size()) *
                        binomial_i64(static_cast<long>(free.size()) - zf_size, l_size);
    const Rational mass = req.packets / pieces;
    for (const auto& tpos : t_choices) {
      Subset t;
      for (int p : tpos) t.push_back(free[static_cast<std::size_t>(p - 1)]);
      const Subset rest = set_minus(free, t);
      for (const auto& lpos : enumerate_subsets(static_cast<int>(rest.size()), l_size)) {
        Subset l;
        for (int p : lpos) l.push_back(rest[static_cast<std::size_t>(p - 1)]);
        SubfileId piece = w;
        piece.zf_set = t;
        piece.irs_set = std::move(l);
        out.push_back({std::move(piece), req.rx, mass});
      }
    }
  }
  return out;
}

/// Set-based membership view of a placement for per-block lookups.
class CacheIndex {
 public:
  explicit CacheIndex(const CacheAssignment& a) {
    for (const auto& c : a.tx_caches) tx_.emplace_back(c.begin(), c.end());
    for (const auto& c : a.rx_caches) rx_.emplace_back(c.begin(), c.end());
  }

  bool tx_has(int i, const SubfileId& w) const {
    return i >= 1 && i <= static_cast<int>(tx_.size()) &&
           tx_[static_cast<std::size_t>(i - 1)].count(w.parent());
  }
  bool rx_has(int j, const SubfileId& w) const {
    return j >= 1 && j <= static_cast<int>(rx_.size()) &&
           rx_[static_cast<std::size_t>(j - 1)].count(w.parent());
  }

 private:
  std::vector<std::set<SubfileId>> tx_;
  std::vector<std::set<SubfileId>> rx_;
};

}  // namespace irscache
